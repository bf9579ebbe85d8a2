//! Padovan, Perrin and Narayana's cows sequences.
//!
//! Terms are generated by the exact integer recurrence. The Binet
//! approximation and the growth inequalities are only *checked* against the
//! exact terms, never used to produce them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebraic::{dominant_root, BinetData, IntPoly, PrecisionPolicy, RealEnclosure};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceId {
    Padovan,
    Perrin,
    Narayana,
}

impl SequenceId {
    pub const ALL: [SequenceId; 3] = [SequenceId::Padovan, SequenceId::Perrin, SequenceId::Narayana];

    pub fn spec(self) -> &'static SequenceSpec {
        match self {
            SequenceId::Padovan => &PADOVAN,
            SequenceId::Perrin => &PERRIN,
            SequenceId::Narayana => &NARAYANA,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SequenceId::Padovan => "padovan",
            SequenceId::Perrin => "perrin",
            SequenceId::Narayana => "narayana",
        }
    }

    /// Conventional symbol for the n-th term, used in text reports.
    pub fn symbol(self) -> &'static str {
        match self {
            SequenceId::Padovan => "P",
            SequenceId::Perrin => "E",
            SequenceId::Narayana => "N",
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "padovan" => Ok(SequenceId::Padovan),
            "perrin" => Ok(SequenceId::Perrin),
            "narayana" => Ok(SequenceId::Narayana),
            other => Err(Error::Config(format!("unknown sequence {other:?}"))),
        }
    }
}

/// Static description of one ternary recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    pub id: SequenceId,
    /// `T_0, T_1, T_2`.
    pub initials: [i64; 3],
    /// `(c2, c1, c0)` in `T_{m+3} = c2 T_{m+2} + c1 T_{m+1} + c0 T_m`.
    pub recurrence: [i64; 3],
    /// Characteristic polynomial, coefficients from the constant term up.
    pub char_poly: [i64; 4],
    /// Minimal polynomial of the dominant Binet coefficient; `None` when the
    /// coefficient is exactly 1.
    pub binet_coeff_minpoly: Option<[i64; 4]>,
    pub growth_low_offset: i64,
    pub growth_high_offset: i64,
    pub binet_error_coeff: u32,
    pub growth_valid_from: u64,
    /// `T_n ~ coeff * root^(n + shift)`. Zero for Padovan and Perrin. For
    /// Narayana the coefficient `phi / ((phi - lambda)(phi - delta))` (root of
    /// `31x^3 - 3x - 1`) belongs to the sequence shifted by one index, so the
    /// shift is 1.
    pub binet_index_shift: i64,
}

impl SequenceSpec {
    pub fn char_poly(&self) -> IntPoly {
        IntPoly::new(&self.char_poly)
    }

    pub fn binet_coeff_minpoly(&self) -> Option<IntPoly> {
        self.binet_coeff_minpoly.map(|c| IntPoly::new(&c))
    }

    /// Leading coefficient of the Binet coefficient's minimal polynomial
    /// (1 when the coefficient is 1).
    pub fn binet_coeff_leading(&self) -> i64 {
        self.binet_coeff_minpoly.map_or(1, |c| c[3])
    }
}

pub static PADOVAN: SequenceSpec = SequenceSpec {
    id: SequenceId::Padovan,
    initials: [1, 1, 1],
    recurrence: [0, 1, 1],
    char_poly: [-1, -1, 0, 1],
    binet_coeff_minpoly: Some([-1, 6, -23, 23]),
    growth_low_offset: -3,
    growth_high_offset: -1,
    binet_error_coeff: 1,
    growth_valid_from: 1,
    binet_index_shift: 0,
};

pub static PERRIN: SequenceSpec = SequenceSpec {
    id: SequenceId::Perrin,
    initials: [3, 0, 2],
    recurrence: [0, 1, 1],
    char_poly: [-1, -1, 0, 1],
    binet_coeff_minpoly: None,
    growth_low_offset: -2,
    growth_high_offset: 1,
    binet_error_coeff: 2,
    growth_valid_from: 2,
    binet_index_shift: 0,
};

pub static NARAYANA: SequenceSpec = SequenceSpec {
    id: SequenceId::Narayana,
    initials: [1, 1, 1],
    recurrence: [1, 0, 1],
    char_poly: [-1, 0, -1, 1],
    binet_coeff_minpoly: Some([-1, -3, 0, 31]),
    growth_low_offset: -2,
    growth_high_offset: -1,
    binet_error_coeff: 1,
    growth_valid_from: 1,
    binet_index_shift: 1,
};

fn step(spec: &SequenceSpec, a: &BigInt, b: &BigInt, c: &BigInt) -> BigInt {
    // a = T_m, b = T_{m+1}, c = T_{m+2}
    let [c2, c1, c0] = spec.recurrence;
    let mut next = BigInt::zero();
    for (coeff, t) in [(c2, c), (c1, b), (c0, a)] {
        match coeff {
            0 => {}
            1 => next += t,
            k => next += t * k,
        }
    }
    next
}

/// The exact `n`-th term, in constant space.
pub fn term(spec: &SequenceSpec, n: u64) -> BigInt {
    let [i0, i1, i2] = spec.initials;
    let (mut a, mut b, mut c) = (BigInt::from(i0), BigInt::from(i1), BigInt::from(i2));
    if n < 3 {
        return [a, b, c].into_iter().nth(n as usize).unwrap();
    }
    for _ in 2..n {
        let next = step(spec, &a, &b, &c);
        a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
    }
    c
}

/// Terms `0..=n_max` in one pass.
pub fn terms_up_to(spec: &SequenceSpec, n_max: u64) -> Vec<BigInt> {
    let len = n_max as usize + 1;
    let mut out: Vec<BigInt> = spec.initials.iter().take(len).map(|&v| BigInt::from(v)).collect();
    while out.len() < len {
        let k = out.len();
        let next = step(spec, &out[k - 3], &out[k - 2], &out[k - 1]);
        out.push(next);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthCheck {
    pub n: u64,
    /// `root^(n + low_offset) <= T_n`
    pub lower_holds: bool,
    /// `T_n <= root^(n + high_offset)`
    pub upper_holds: bool,
}

impl GrowthCheck {
    pub fn passed(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub sequence: SequenceId,
    pub checks: Vec<GrowthCheck>,
    pub max_precision: u32,
}

impl GrowthReport {
    pub fn failures(&self) -> Vec<&GrowthCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(GrowthCheck::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinetCheck {
    pub n: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinetReport {
    pub sequence: SequenceId,
    pub index_shift: i64,
    pub checks: Vec<BinetCheck>,
    pub max_precision: u32,
}

impl BinetReport {
    pub fn failures(&self) -> Vec<u64> {
        self.checks.iter().filter(|c| !c.holds).map(|c| c.n).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Three-way certified outcome of `lhs <= rhs` with interval operands.
fn certified_le(lhs: &RealEnclosure, rhs: &RealEnclosure) -> Option<bool> {
    if lhs.hi() <= rhs.lo() {
        Some(true)
    } else if lhs.lo() > rhs.hi() {
        Some(false)
    } else {
        None
    }
}

fn exact(t: &BigInt, precision: u32) -> RealEnclosure {
    RealEnclosure::from_integer(t.clone(), precision)
}

/// Certifies `root^(n + low) <= T_n <= root^(n + high)` for every
/// `growth_valid_from <= n <= n_max`.
///
/// `root` must enclose the dominant root of `spec.char_poly`. When a
/// comparison cannot be decided the root is recomputed at twice the
/// precision (and intersected with the caller's enclosure), up to the
/// policy cap.
pub fn check_growth_bounds(
    spec: &SequenceSpec,
    n_max: u64,
    root: &RealEnclosure,
    policy: &PrecisionPolicy,
) -> Result<GrowthReport> {
    if n_max < spec.growth_valid_from {
        return Err(Error::DomainError(format!(
            "n_max = {n_max} is below the first valid index {}",
            spec.growth_valid_from
        )));
    }
    let terms = terms_up_to(spec, n_max);
    let mut precision = root.precision().max(policy.start_bits);
    let mut r = root.clone();
    let mut checks = Vec::with_capacity(terms.len());
    for n in spec.growth_valid_from..=n_max {
        let t = &terms[n as usize];
        loop {
            let lower = r.powi(n as i64 + spec.growth_low_offset)?;
            let upper = r.powi(n as i64 + spec.growth_high_offset)?;
            let te = exact(t, precision);
            match (certified_le(&lower, &te), certified_le(&te, &upper)) {
                (Some(lower_holds), Some(upper_holds)) => {
                    checks.push(GrowthCheck {
                        n,
                        lower_holds,
                        upper_holds,
                    });
                    break;
                }
                _ => {
                    precision = policy.next(precision).ok_or_else(|| {
                        Error::exhausted(policy.cap_bits, format!("checking growth bound at n = {n}"))
                    })?;
                    let refined = dominant_root(&spec.char_poly(), precision)?;
                    r = refined.intersect(root).ok_or_else(|| {
                        Error::DomainError("supplied root enclosure misses the dominant root".into())
                    })?;
                }
            }
        }
    }
    Ok(GrowthReport {
        sequence: spec.id,
        checks,
        max_precision: precision,
    })
}

/// Certifies `|T_n - coeff * root^(n + shift)| < c / root^(n/2)` for
/// `1 <= n <= n_max`, where `c = spec.binet_error_coeff` and `shift` is
/// `binet.index_shift`.
///
/// The comparison is squared so no half-integer powers are needed:
/// `(T_n - coeff * root^(n + shift))^2 * root^n < c^2`.
pub fn check_binet_error(
    spec: &SequenceSpec,
    n_max: u64,
    binet: &BinetData,
    policy: &PrecisionPolicy,
) -> Result<BinetReport> {
    if n_max < 1 {
        return Err(Error::DomainError("n_max must be at least 1".into()));
    }
    let terms = terms_up_to(spec, n_max);
    let mut data = binet.clone();
    let mut precision = binet.root.precision().max(policy.start_bits);
    let c2 = RealEnclosure::from_integer(spec.binet_error_coeff * spec.binet_error_coeff, precision);
    let mut checks = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let t = &terms[n as usize];
        loop {
            let approx = &data.coeff * &data.root.powi(n as i64 + data.index_shift)?;
            let diff = &exact(t, precision) - &approx;
            let lhs = &diff.square() * &data.root.powi(n as i64)?;
            if lhs.certainly_lt(&c2) {
                checks.push(BinetCheck { n, holds: true });
                break;
            }
            if !lhs.lo().lt(c2.lo()) {
                checks.push(BinetCheck { n, holds: false });
                break;
            }
            precision = policy.next(precision).ok_or_else(|| {
                Error::exhausted(policy.cap_bits, format!("checking Binet error at n = {n}"))
            })?;
            data = BinetData::compute_with_shift(spec, precision, binet.index_shift)?;
        }
    }
    Ok(BinetReport {
        sequence: spec.id,
        index_shift: binet.index_shift,
        checks,
        max_precision: precision,
    })
}
