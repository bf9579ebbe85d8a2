//! Certified solver for `T_n = (b ± 1) b^l ± 1` where `T` is the Padovan,
//! Perrin or Narayana's cows sequence.
//!
//! The pipeline bounds `n` with Matveev's theorem, shrinks the bound by
//! continued-fraction reduction, then searches exhaustively with exact
//! integers. All real arithmetic is interval arithmetic over rationals.

pub mod algebraic;
pub mod error;
pub mod linear_forms;
pub mod pipeline;
pub mod reduction;
pub mod search;
pub mod sequences;
mod serde_str;

pub use algebraic::{LazyReal, PrecisionPolicy, RealEnclosure};
pub use error::{Error, Result};
pub use linear_forms::{family_bound, FamilyConstants};
pub use pipeline::{run_all, run_family, PipelineReport, RunConfig};
pub use reduction::{Method, ReductionOutcome};
pub use search::{EquationFamily, Form, Kind, Sign, Solution};
pub use sequences::{SequenceId, SequenceSpec};
