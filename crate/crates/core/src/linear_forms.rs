//! Matveev's lower bound for linear forms in logarithms and the analytic
//! constants of each family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::algebraic::{binet_coefficient, dominant_root, parse_decimal, LazyReal, RealEnclosure};
use crate::error::{Error, Result};
use crate::search::EquationFamily;
use crate::sequences::{SequenceId, SequenceSpec};

/// Parameters of Matveev's theorem for `Λ = η_1^{a_1} ··· η_s^{a_s} - 1`.
#[derive(Clone, Debug)]
pub struct MatveevInput {
    s: u32,
    degree: u32,
    d_exponent: BigInt,
    heights: Vec<RealEnclosure>,
}

impl MatveevInput {
    /// `heights[j]` must dominate `max(d·h(η_j), |log η_j|, 0.16)`.
    pub fn new(degree: u32, d_exponent: impl Into<BigInt>, heights: Vec<RealEnclosure>) -> Result<Self> {
        let d_exponent = d_exponent.into();
        let s = heights.len() as u32;
        if s == 0 {
            return Err(Error::DomainError("Matveev needs at least one height".into()));
        }
        if degree == 0 {
            return Err(Error::DomainError("field degree must be at least 1".into()));
        }
        if d_exponent < BigInt::one() {
            return Err(Error::DomainError(format!("D = {d_exponent} must be at least 1")));
        }
        let floor = BigRational::new(4.into(), 25.into());
        if let Some(j) = heights.iter().position(|h| h.lo() < &floor) {
            return Err(Error::DomainError(format!(
                "B_{} = {} is not certified >= 0.16",
                j + 1,
                heights[j]
            )));
        }
        Ok(MatveevInput {
            s,
            degree,
            d_exponent,
            heights,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn d_exponent(&self) -> &BigInt {
        &self.d_exponent
    }

    pub fn heights(&self) -> &[RealEnclosure] {
        &self.heights
    }
}

/// `1.4 · 30^{s+3} · s^{4.5} · d² · (1 + log d) · (1 + log D) · B_1 ··· B_s`,
/// so that `log |Λ| > -matveev_bound(..)` whenever `Λ ≠ 0`.
pub fn matveev_bound(input: &MatveevInput) -> Result<RealEnclosure> {
    let p = input.heights.iter().map(RealEnclosure::precision).max().unwrap_or(64);
    let s = BigInt::from(input.s);
    let d = BigInt::from(input.degree);
    let exact = BigRational::new(7.into(), 5.into())
        * BigRational::from_integer(BigInt::from(30).pow(input.s + 3) * s.pow(4) * &d * &d);
    let sqrt_s = RealEnclosure::from_integer(s, p).sqrt()?;
    let one = RealEnclosure::from_integer(1, p);
    let log_d = RealEnclosure::from_integer(d, p).ln()?;
    let log_big_d = RealEnclosure::from_integer(input.d_exponent.clone(), p).ln()?;
    let mut acc = sqrt_s.scale(&exact) * (&one + &log_d) * (&one + &log_big_d);
    for h in &input.heights {
        acc = acc * h;
    }
    Ok(acc)
}

/// `2 S log S` without any domain check.
pub fn two_s_log_s(s: &RealEnclosure) -> Result<RealEnclosure> {
    let two = BigRational::from_integer(2.into());
    Ok((s * &s.ln()?).scale(&two))
}

/// Ceiling of the upper endpoint of `2 S log S`. For `S >= 4`, every real
/// `x > 1` with `x / log x < S` satisfies `x <` the result.
pub fn resolve_n_bound(s: &RealEnclosure) -> Result<BigInt> {
    if s.lo() < &BigRational::from_integer(4.into()) {
        return Err(Error::DomainError(format!("S = {s} is not certified >= 4")));
    }
    Ok(two_s_log_s(s)?.hi().ceil().to_integer())
}

/// Per-sequence constants shared by all four equations of that sequence.
#[derive(Clone, Debug)]
pub struct FamilyConstants {
    pub sequence: SequenceId,
    /// `|Λ| < lambda_cap / root^n` for `n` past the search cutoff.
    pub lambda_cap_numerator: BigRational,
    /// `|Γ| < gamma_cap / root^n`.
    pub gamma_cap_numerator: BigRational,
    /// `gamma_cap / log root`.
    pub reduction_a: RealEnclosure,
    /// `c` in `B_1 = log(c · b³)`.
    pub b1_inner_constant: i64,
    pub search_cutoff: u64,
}

fn cap_literals(seq: SequenceId) -> (&'static str, &'static str, i64, u64) {
    match seq {
        SequenceId::Padovan => ("2.77", "5.54", 184, 300),
        SequenceId::Perrin => ("3", "6", 8, 350),
        SequenceId::Narayana => ("3.4", "6.8", 248, 400),
    }
}

impl FamilyConstants {
    pub fn new(seq: SequenceId, precision: u32) -> Result<Self> {
        let (lambda, gamma, c, cutoff) = cap_literals(seq);
        let gamma_cap_numerator = parse_decimal(gamma)?;
        let root = dominant_root(&seq.spec().char_poly(), precision)?;
        let reduction_a = RealEnclosure::exact(gamma_cap_numerator.clone(), precision)
            .checked_div(&root.ln()?)?;
        Ok(FamilyConstants {
            sequence: seq,
            lambda_cap_numerator: parse_decimal(lambda)?,
            gamma_cap_numerator,
            reduction_a,
            b1_inner_constant: c,
            search_cutoff: cutoff,
        })
    }

    /// Re-derives the bound on `|Λ|` from the Binet error term: for
    /// `n > cutoff`, `|Λ| · root^n <= (1 + e · root^{-n/2}) / (coeff · root^shift)`.
    /// Returns whether the stored cap dominates that at `n = cutoff + 1`.
    pub fn lambda_cap_holds(&self, precision: u32) -> Result<bool> {
        let spec = self.sequence.spec();
        let root = dominant_root(&spec.char_poly(), precision)?;
        let coeff = binet_coefficient(spec, &root)?;
        let half = self.search_cutoff.div_ceil(2) as i64;
        let tail = root.powi(-half)?.scale(&BigRational::from_integer(spec.binet_error_coeff.into()));
        let one = RealEnclosure::from_integer(1, precision);
        let derived = (&one + &tail).checked_div(&(&coeff * &root.powi(spec.binet_index_shift)?))?;
        Ok(derived.hi() <= &self.lambda_cap_numerator)
    }

    /// `1 + log(n + shift) < 1.2 log n` for every `n > cutoff`. The gap
    /// `1.2 log n - log(n + shift)` is increasing, so checking `cutoff + 1`
    /// suffices.
    pub fn log_factor_holds(&self, precision: u32) -> Result<bool> {
        let shift = self.sequence.spec().binet_index_shift as u64;
        let n = self.search_cutoff + 1;
        let one = RealEnclosure::from_integer(1, precision);
        let lhs = &one + &RealEnclosure::from_integer(n + shift, precision).ln()?;
        let rhs = RealEnclosure::from_integer(n, precision).ln()?.scale(&BigRational::new(6.into(), 5.into()));
        Ok(lhs.certainly_lt(&rhs))
    }
}

/// Certified intermediate values of [`family_bound`].
#[derive(Clone, Debug)]
pub struct FamilyBound {
    pub family: EquationFamily,
    pub b: u64,
    /// Matveev's constant with `D = 1`; the `(1 + log D)` factor is folded
    /// into `1.2 log n`.
    pub matveev_constant: RealEnclosure,
    /// `n / log n < s_value`.
    pub s_value: RealEnclosure,
    pub n_bound: BigInt,
}

fn check_base(b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::Config(format!("base b = {b} must be at least 2")));
    }
    Ok(())
}

/// Matveev heights `(log(c b³), 3 log b, log root)` for the form
/// `(b ± 1) coeff^{-1} · b^l · root^{-(n + shift)}`.
pub fn family_heights(constants: &FamilyConstants, b: u64, precision: u32) -> Result<Vec<RealEnclosure>> {
    let spec = constants.sequence.spec();
    let root = dominant_root(&spec.char_poly(), precision)?;
    let b3 = BigInt::from(b).pow(3);
    Ok(vec![
        RealEnclosure::from_integer(b3.clone() * constants.b1_inner_constant, precision).ln()?,
        RealEnclosure::from_integer(b3, precision).ln()?,
        root.ln()?,
    ])
}

pub fn family_bound_detail(family: EquationFamily, b: u64, precision: u32) -> Result<FamilyBound> {
    check_base(b)?;
    let constants = FamilyConstants::new(family.sequence, precision)?;
    if !constants.log_factor_holds(precision)? {
        return Err(Error::DomainError(format!(
            "1 + log n < 1.2 log n is not certified past n = {}",
            constants.search_cutoff
        )));
    }
    let heights = family_heights(&constants, b, precision)?;
    let log_root = heights[2].clone();
    let c = matveev_bound(&MatveevInput::new(3, 1, heights)?)?;
    let cap = RealEnclosure::exact(constants.lambda_cap_numerator.clone(), precision).ln()?;
    let log_cutoff = RealEnclosure::from_integer(constants.search_cutoff, precision).ln()?;
    // n log root < log cap + 1.2 C log n, divided through by log n > log cutoff.
    let numerator = c.scale(&BigRational::new(6.into(), 5.into())) + cap.checked_div(&log_cutoff)?;
    let s_value = numerator.checked_div(&log_root)?;
    let n_bound = resolve_n_bound(&s_value)?.max(BigInt::from(constants.search_cutoff + 1));
    Ok(FamilyBound {
        family,
        b,
        matveev_constant: c,
        s_value,
        n_bound,
    })
}

/// Certified upper bound on `n` for any solution with base `b`.
pub fn family_bound(family: EquationFamily, b: u64) -> Result<BigInt> {
    Ok(family_bound_detail(family, b, crate::algebraic::DEFAULT_START_BITS)?.n_bound)
}

/// Inhomogeneous part of the reduced form `|l τ - v + μ| < A B^{-n}`.
#[derive(Clone, Debug)]
pub enum Mu {
    /// `(b ± 1) / coeff = 1` exactly, so the form is homogeneous.
    Zero,
    Value(LazyReal),
}

/// Inputs of the continued-fraction reduction for one `(family, b)`.
#[derive(Clone, Debug)]
pub struct ReductionSetup {
    pub family: EquationFamily,
    pub b: u64,
    /// `log b / log root`.
    pub tau: LazyReal,
    /// `log((b ± 1) / coeff) / log root`.
    pub mu: Mu,
    pub a: RealEnclosure,
    /// The root itself: `|Γ| / log root < A · root^{-n}`.
    pub base: RealEnclosure,
    pub search_cutoff: u64,
}

fn log_root(spec: &'static SequenceSpec, p: u32) -> Result<RealEnclosure> {
    dominant_root(&spec.char_poly(), p)?.ln()
}

pub fn reduction_setup(family: EquationFamily, b: u64, precision: u32) -> Result<ReductionSetup> {
    check_base(b)?;
    let spec = family.sequence.spec();
    let constants = FamilyConstants::new(family.sequence, precision)?;
    let tau = LazyReal::new(format!("log {b} / log root"), move |p| {
        RealEnclosure::from_integer(b, p).ln()?.checked_div(&log_root(spec, p)?)
    });
    let factor = family.base_factor(b);
    let mu = if spec.binet_coeff_minpoly.is_none() && factor == 1 {
        Mu::Zero
    } else {
        Mu::Value(LazyReal::new(format!("log({factor} / coeff) / log root"), move |p| {
            let root = dominant_root(&spec.char_poly(), p)?;
            let coeff = binet_coefficient(spec, &root)?;
            let ratio = RealEnclosure::from_integer(factor, p).checked_div(&coeff)?;
            ratio.ln()?.checked_div(&root.ln()?)
        }))
    };
    let base = dominant_root(&spec.char_poly(), precision)?;
    debug_assert!(base.lo().is_positive());
    Ok(ReductionSetup {
        family,
        b,
        tau,
        mu,
        a: constants.reduction_a,
        base,
        search_cutoff: constants.search_cutoff,
    })
}
