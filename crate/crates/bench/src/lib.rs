//! Shared fixtures for the criterion benches.

use twsolve_core::algebraic::{dominant_root, LazyReal, RealEnclosure};
use twsolve_core::sequences::PADOVAN;

/// `log b / log alpha` for the Padovan root.
pub fn padovan_tau(b: u64) -> LazyReal {
    LazyReal::new(format!("log {b} / log alpha"), move |p| {
        let alpha = dominant_root(&PADOVAN.char_poly(), p)?;
        RealEnclosure::from_integer(b, p).ln()?.checked_div(&alpha.ln()?)
    })
}
