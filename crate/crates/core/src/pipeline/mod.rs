//! End-to-end workflow per equation family: bound, reduce, search, verify.

pub mod paper;

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::PrecisionPolicy;
use crate::error::{Error, Result};
use crate::linear_forms::{family_bound_detail, reduction_setup, ReductionSetup};
use crate::reduction::{
    baker_davenport, legendre_applicable, legendre_bound, Method, ReductionOutcome,
};
use crate::search::{enumerate_solutions, verify_no_solutions_between, EquationFamily, Sign, Solution};
use crate::sequences::SequenceId;

pub use paper::{compare as compare_with_paper, expected_triples, PaperCheck};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub b_min: u64,
    pub b_max: u64,
    /// Overrides the family's search cutoff. The search still extends past
    /// the reduced bound if that is larger.
    pub n_max: Option<u64>,
    pub policy: PrecisionPolicy,
}

impl RunConfig {
    pub fn new(b_min: u64, b_max: u64) -> Self {
        RunConfig {
            b_min,
            b_max,
            n_max: None,
            policy: PrecisionPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b_min < 2 || self.b_min > self.b_max {
            return Err(Error::Config(format!(
                "base range [{}, {}] must satisfy 2 <= b_min <= b_max",
                self.b_min, self.b_max
            )));
        }
        if self.policy.start_bits == 0 || self.policy.start_bits > self.policy.cap_bits {
            return Err(Error::Config(format!(
                "precision cap {} is below the starting precision {}",
                self.policy.cap_bits, self.policy.start_bits
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyDescriptor {
    pub sequence: SequenceId,
    pub base_sign: Sign,
    pub tail_sign: Sign,
}

impl From<EquationFamily> for FamilyDescriptor {
    fn from(f: EquationFamily) -> Self {
        FamilyDescriptor {
            sequence: f.sequence,
            base_sign: f.base_sign,
            tail_sign: f.tail_sign,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionRecord {
    pub method: Method,
    pub convergent_index: usize,
    #[serde(serialize_with = "crate::serde_str::display")]
    pub q: BigInt,
    pub epsilon_lo: Option<String>,
    #[serde(serialize_with = "crate::serde_str::integer_opt")]
    pub a_max: Option<BigInt>,
    pub new_bound: u64,
}

impl From<&ReductionOutcome> for ReductionRecord {
    fn from(o: &ReductionOutcome) -> Self {
        ReductionRecord {
            method: o.method,
            convergent_index: o.convergent_index,
            q: o.q.clone(),
            epsilon_lo: o.epsilon.as_ref().map(|e| e.lo_decimal(30)),
            a_max: o.a_max.clone(),
            new_bound: o.new_bound,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionRecord {
    pub n: u64,
    pub b: u64,
    pub l: u32,
    #[serde(serialize_with = "crate::serde_str::display")]
    pub value: BigInt,
    /// Set when `l >= n`, outside the range the bounds were derived for.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub l_not_below_n: bool,
}

impl From<&Solution> for SolutionRecord {
    fn from(s: &Solution) -> Self {
        SolutionRecord {
            n: s.n,
            b: s.b,
            l: s.l,
            value: s.value.clone(),
            l_not_below_n: s.violates_l_below_n(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseRecord {
    pub b: u64,
    /// Bound on `n` fed to the reduction (the maximum over the base range).
    #[serde(serialize_with = "crate::serde_str::display")]
    pub matveev_bound: BigInt,
    pub reduction: Option<ReductionRecord>,
    pub solutions: Vec<SolutionRecord>,
    pub gap_verified: bool,
    /// Bound on `n` for this base alone.
    #[serde(serialize_with = "crate::serde_str::display")]
    pub family_bound: BigInt,
    pub search_limit: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction_error: Option<String>,
    #[serde(skip)]
    pub outcome: Option<ReductionOutcome>,
    #[serde(skip)]
    pub found: Vec<Solution>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrecisionStats {
    pub start_bits: u32,
    pub cap_bits: u32,
    pub max_bits_used: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub family: FamilyDescriptor,
    pub per_b: Vec<BaseRecord>,
    pub tool_version: &'static str,
    pub equation: String,
    pub b_min: u64,
    pub b_max: u64,
    pub precision: PrecisionStats,
    #[serde(skip)]
    pub equation_family: EquationFamily,
}

impl PipelineReport {
    pub fn solutions(&self) -> Vec<Solution> {
        self.per_b.iter().flat_map(|r| r.found.iter().cloned()).collect()
    }

    /// `true` if some base has no reduction certificate or a failed gap check.
    pub fn has_failures(&self) -> bool {
        self.per_b
            .iter()
            .any(|r| r.reduction.is_none() || !r.gap_verified)
    }

    pub fn check_paper(&self) -> PaperCheck {
        compare_with_paper(self.equation_family, self.b_min, self.b_max, &self.solutions())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text summary in the shape of a theorem statement.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let triples: Vec<String> = self
            .solutions()
            .iter()
            .map(|s| format!("({}, {}, {})", s.n, s.b, s.l))
            .collect();
        let _ = writeln!(
            out,
            "{}  for {} <= b <= {}: {{{}}}",
            self.equation,
            self.b_min,
            self.b_max,
            triples.join(", ")
        );
        for r in &self.per_b {
            let red = match (&r.reduction, &r.reduction_error) {
                (Some(x), _) => {
                    let method = match x.method {
                        Method::BakerDavenport => "baker-davenport",
                        Method::Legendre => "legendre",
                    };
                    format!("{method} k={} n <= {}", x.convergent_index, x.new_bound)
                }
                (None, Some(e)) => format!("reduction failed: {e}"),
                (None, None) => "reduction failed".to_string(),
            };
            let flagged = r.solutions.iter().filter(|s| s.l_not_below_n).count();
            let _ = write!(
                out,
                "  b={:<3} M={}  {red}  searched n <= {}  gap {}",
                r.b,
                r.matveev_bound,
                r.search_limit,
                if r.gap_verified { "verified" } else { "NOT verified" }
            );
            if flagged > 0 {
                let _ = write!(out, "  ({flagged} with l >= n)");
            }
            out.push('\n');
        }
        out
    }
}

/// Baker–Davenport, or Legendre's criterion when `μ = 0`.
pub fn reduce(setup: &ReductionSetup, m: &BigInt, policy: PrecisionPolicy) -> Result<ReductionOutcome> {
    match baker_davenport(&setup.tau, &setup.mu, &setup.a, &setup.base, m, policy) {
        Err(Error::MuDegenerate) => {
            if !legendre_applicable(&setup.a, &setup.base, m, setup.search_cutoff)? {
                return Err(Error::LegendreInapplicable(format!(
                    "root^{} / 2A does not exceed M = {m}",
                    setup.search_cutoff + 1
                )));
            }
            legendre_bound(&setup.tau, &setup.a, &setup.base, m, policy)
        }
        other => other,
    }
}

fn run_base(family: EquationFamily, b: u64, m: &BigInt, own: BigInt, config: &RunConfig) -> Result<BaseRecord> {
    let setup = reduction_setup(family, b, config.policy.start_bits)?;
    let outcome = match reduce(&setup, m, config.policy) {
        Ok(o) => Ok(o),
        Err(Error::Config(e)) => return Err(Error::Config(e)),
        Err(e) => Err(e),
    };
    let cutoff = config.n_max.unwrap_or(setup.search_cutoff);
    let (search_limit, gap_verified) = match &outcome {
        Ok(o) => {
            let limit = cutoff.max(o.new_bound.saturating_add(1));
            let gap = verify_no_solutions_between(family, b, b, o.new_bound.min(limit), limit)?;
            (limit, gap.is_empty())
        }
        Err(_) => (cutoff, false),
    };
    let found = enumerate_solutions(family, b, b, search_limit)?;
    Ok(BaseRecord {
        b,
        matveev_bound: m.clone(),
        reduction: outcome.as_ref().ok().map(ReductionRecord::from),
        solutions: found.iter().map(SolutionRecord::from).collect(),
        gap_verified,
        family_bound: own,
        search_limit,
        reduction_error: outcome.as_ref().err().map(ToString::to_string),
        outcome: outcome.ok(),
        found,
    })
}

/// Runs the full workflow for one family. Reduction failures are recorded
/// per base; only configuration errors abort.
pub fn run_family(family: EquationFamily, config: &RunConfig) -> Result<PipelineReport> {
    config.validate()?;
    let bases: Vec<u64> = (config.b_min..=config.b_max).collect();
    let bounds = bases
        .par_iter()
        .map(|&b| family_bound_detail(family, b, config.policy.start_bits).map(|d| d.n_bound))
        .collect::<Result<Vec<_>>>()?;
    let m = bounds.iter().max().cloned().expect("nonempty range");
    let per_b = bases
        .par_iter()
        .zip(bounds)
        .map(|(&b, own)| run_base(family, b, &m, own, config))
        .collect::<Result<Vec<_>>>()?;
    let max_bits_used = per_b
        .iter()
        .filter_map(|r| r.outcome.as_ref().map(|o| o.precision_bits))
        .max()
        .unwrap_or(config.policy.start_bits);
    Ok(PipelineReport {
        family: family.into(),
        per_b,
        tool_version: TOOL_VERSION,
        equation: family.equation(),
        b_min: config.b_min,
        b_max: config.b_max,
        precision: PrecisionStats {
            start_bits: config.policy.start_bits,
            cap_bits: config.policy.cap_bits,
            max_bits_used,
        },
        equation_family: family,
    })
}

/// All twelve families in catalogue order.
pub fn run_all(config: &RunConfig) -> Result<Vec<PipelineReport>> {
    config.validate()?;
    EquationFamily::all()
        .into_par_iter()
        .map(|f| run_family(f, config))
        .collect()
}
