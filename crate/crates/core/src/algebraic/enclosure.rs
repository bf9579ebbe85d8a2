//! Outward-rounded interval arithmetic over exact rationals.
//!
//! Endpoints are stored as `BigRational`. Exact inputs (integers, test
//! rationals) stay exact through `+`, `-` and `*` when no rounding is needed;
//! every operation rounds its result outward to the working precision, so the
//! lower endpoint only ever moves down and the upper endpoint only ever moves
//! up.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Guard bits carried by the logarithm series beyond the target precision.
const LOG_GUARD_BITS: u32 = 64;

/// A closed interval `[lo, hi]` known to contain one real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: BigRational,
    hi: BigRational,
    precision: u32,
}

impl RealEnclosure {
    /// Builds an enclosure from explicit endpoints.
    ///
    /// The endpoints are stored as given (no rounding). Returns a domain
    /// error when `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational, precision: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::DomainError(format!(
                "enclosure endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(RealEnclosure { lo, hi, precision })
    }

    pub fn exact(value: BigRational, precision: u32) -> Self {
        RealEnclosure {
            lo: value.clone(),
            hi: value,
            precision,
        }
    }

    pub fn from_integer(value: impl Into<BigInt>, precision: u32) -> Self {
        Self::exact(BigRational::from_integer(value.into()), precision)
    }

    /// Exact `num / den`.
    pub fn from_ratio(num: i64, den: i64, precision: u32) -> Self {
        Self::exact(BigRational::new(num.into(), den.into()), precision)
    }

    /// Parses a short decimal literal such as `"2.77"` into an exact point.
    pub fn from_decimal(literal: &str, precision: u32) -> Result<Self> {
        parse_decimal(literal).map(|q| Self::exact(q, precision))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Nearest `f64` to the midpoint, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &RealEnclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &RealEnclosure) -> Option<RealEnclosure> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        (lo <= hi).then(|| RealEnclosure {
            lo,
            hi,
            precision: self.precision.max(other.precision),
        })
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified strict comparison `self < other`.
    pub fn certainly_lt(&self, other: &RealEnclosure) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &RealEnclosure) -> bool {
        self.lo > other.hi
    }

    /// Certified ordering of the enclosed value against an exact rational,
    /// or `None` when the enclosure straddles it. A point enclosure equal to
    /// `x` compares `Equal`.
    pub fn cmp_rational(&self, x: &BigRational) -> Option<Ordering> {
        if &self.hi < x {
            Some(Ordering::Less)
        } else if &self.lo > x {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn cmp_integer(&self, x: &BigInt) -> Option<Ordering> {
        self.cmp_rational(&BigRational::from_integer(x.clone()))
    }

    /// `floor` of the enclosed value when both endpoints agree on it.
    pub fn floor_if_unique(&self) -> Option<BigInt> {
        let f = self.lo.floor();
        (f == self.hi.floor()).then(|| f.to_integer())
    }

    pub fn abs(&self) -> RealEnclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let hi = std::cmp::max(-&self.lo, self.hi.clone());
            RealEnclosure {
                lo: BigRational::zero(),
                hi,
                precision: self.precision,
            }
        }
    }

    pub fn hull(&self, other: &RealEnclosure) -> RealEnclosure {
        RealEnclosure {
            lo: std::cmp::min(&self.lo, &other.lo).clone(),
            hi: std::cmp::max(&self.hi, &other.hi).clone(),
            precision: self.precision.max(other.precision),
        }
    }

    fn rounded(lo: BigRational, hi: BigRational, precision: u32) -> RealEnclosure {
        RealEnclosure {
            lo: round_down(&lo, precision),
            hi: round_up(&hi, precision),
            precision,
        }
    }

    pub fn recip(&self) -> Result<RealEnclosure> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::rounded(
            self.hi.recip(),
            self.lo.recip(),
            self.precision,
        ))
    }

    pub fn checked_div(&self, other: &RealEnclosure) -> Result<RealEnclosure> {
        Ok(self * &other.recip()?)
    }

    pub fn scale(&self, factor: &BigRational) -> RealEnclosure {
        let a = &self.lo * factor;
        let b = &self.hi * factor;
        if factor.is_negative() {
            Self::rounded(b, a, self.precision)
        } else {
            Self::rounded(a, b, self.precision)
        }
    }

    pub fn square(&self) -> RealEnclosure {
        let a = self.abs();
        Self::rounded(&a.lo * &a.lo, &a.hi * &a.hi, self.precision)
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// the reciprocal.
    pub fn powi(&self, exponent: i64) -> Result<RealEnclosure> {
        if exponent < 0 {
            return self.powi(-exponent)?.recip();
        }
        let mut result = RealEnclosure::from_integer(1, self.precision);
        let mut base = self.clone();
        let mut e = exponent as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(result)
    }

    pub fn sqrt(&self) -> Result<RealEnclosure> {
        if self.lo.is_negative() {
            return Err(Error::DomainError(format!(
                "square root of an enclosure with negative lower endpoint {}",
                self.lo
            )));
        }
        Ok(RealEnclosure {
            lo: sqrt_bound(&self.lo, self.precision, false),
            hi: sqrt_bound(&self.hi, self.precision, true),
            precision: self.precision,
        })
    }

    /// Natural logarithm; requires a strictly positive enclosure.
    pub fn ln(&self) -> Result<RealEnclosure> {
        if !self.lo.is_positive() {
            return Err(Error::DomainError(format!(
                "logarithm of an enclosure with lower endpoint {}",
                self.lo
            )));
        }
        let lo = ln_bounds(&self.lo, self.precision).0;
        let hi = ln_bounds(&self.hi, self.precision).1;
        Ok(Self::rounded(lo, hi, self.precision))
    }

    /// Lower endpoint as a decimal string truncated toward negative infinity.
    pub fn lo_decimal(&self, digits: usize) -> String {
        format_decimal(&self.lo, digits, false)
    }

    pub fn hi_decimal(&self, digits: usize) -> String {
        format_decimal(&self.hi, digits, true)
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        write!(
            f,
            "[{}, {}]",
            self.lo_decimal(digits),
            self.hi_decimal(digits)
        )
    }
}

impl Add for &RealEnclosure {
    type Output = RealEnclosure;
    fn add(self, rhs: &RealEnclosure) -> RealEnclosure {
        RealEnclosure::rounded(
            &self.lo + &rhs.lo,
            &self.hi + &rhs.hi,
            self.precision.max(rhs.precision),
        )
    }
}

impl Sub for &RealEnclosure {
    type Output = RealEnclosure;
    fn sub(self, rhs: &RealEnclosure) -> RealEnclosure {
        RealEnclosure::rounded(
            &self.lo - &rhs.hi,
            &self.hi - &rhs.lo,
            self.precision.max(rhs.precision),
        )
    }
}

impl Mul for &RealEnclosure {
    type Output = RealEnclosure;
    fn mul(self, rhs: &RealEnclosure) -> RealEnclosure {
        let precision = self.precision.max(rhs.precision);
        if !self.lo.is_negative() && !rhs.lo.is_negative() {
            return RealEnclosure::rounded(&self.lo * &rhs.lo, &self.hi * &rhs.hi, precision);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RealEnclosure::rounded(lo, hi, precision)
    }
}

impl Neg for &RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        RealEnclosure {
            lo: -&self.hi,
            hi: -&self.lo,
            precision: self.precision,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for RealEnclosure {
            type Output = RealEnclosure;
            fn $method(self, rhs: RealEnclosure) -> RealEnclosure {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RealEnclosure> for RealEnclosure {
            type Output = RealEnclosure;
            fn $method(self, rhs: &RealEnclosure) -> RealEnclosure {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RealEnclosure {
    type Output = RealEnclosure;
    fn neg(self) -> RealEnclosure {
        -&self
    }
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `floor(log2 |x|)` for nonzero `x`.
pub(crate) fn floor_log2(x: &BigRational) -> i64 {
    let num = x.numer().abs();
    let den = x.denom();
    let mut e = num.bits() as i64 - den.bits() as i64;
    // 2^e <= |x| < 2^(e+1), adjusting the bit-length estimate by at most one.
    let scaled_cmp = |e: i64| -> Ordering {
        if e >= 0 {
            num.cmp(&(den * pow2(e as u64)))
        } else {
            (&num * pow2((-e) as u64)).cmp(den)
        }
    };
    if scaled_cmp(e) == Ordering::Less {
        e -= 1;
    }
    if scaled_cmp(e + 1) != Ordering::Less {
        e += 1;
    }
    e
}

fn is_power_of_two(n: &BigInt) -> bool {
    let n = n.magnitude();
    n.bits() > 0 && n.trailing_zeros() == Some(n.bits() - 1)
}

/// Rounds `x` toward negative infinity to at most `precision` significant
/// bits (exact dyadics that already fit are returned unchanged).
pub(crate) fn round_down(x: &BigRational, precision: u32) -> BigRational {
    round_to(x, precision, false)
}

pub(crate) fn round_up(x: &BigRational, precision: u32) -> BigRational {
    round_to(x, precision, true)
}

fn round_to(x: &BigRational, precision: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    if (x.denom().is_one() || is_power_of_two(x.denom())) && x.numer().bits() <= precision as u64 {
        return x.clone();
    }
    let e = floor_log2(x);
    let k = precision as i64 - 1 - e;
    let (num, den) = (x.numer(), x.denom());
    let (scaled_num, scaled_den) = if k >= 0 {
        (num * pow2(k as u64), den.clone())
    } else {
        (num.clone(), den * pow2((-k) as u64))
    };
    let m = if up {
        num_integer::Integer::div_ceil(&scaled_num, &scaled_den)
    } else {
        scaled_num.div_floor(&scaled_den)
    };
    if k >= 0 {
        BigRational::new(m, pow2(k as u64))
    } else {
        BigRational::from_integer(m * pow2((-k) as u64))
    }
}

/// Lower (`up == false`) or upper bound of `sqrt(x)` for `x >= 0`.
fn sqrt_bound(x: &BigRational, precision: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    // sqrt(a/b) = sqrt(a*b)/b; scale by 4^s for `precision` bits.
    let a = x.numer();
    let b = x.denom();
    let e = floor_log2(x);
    let s = (precision as i64 + 2 - e / 2).max(0) as u64;
    let n = a * b * pow2(2 * s);
    let r = n.sqrt();
    let scale = pow2(s);
    if up {
        let r = if &r * &r == n { r } else { r + 1u32 };
        BigRational::new(num_integer::Integer::div_ceil(&r, b), scale)
    } else {
        BigRational::new(r.div_floor(b), scale)
    }
}

/// `2^w * atanh(t)` for `0 <= t <= 1/3`, returned as `[lower, upper]` in
/// fixed point with scale `2^w`.
///
/// Every truncation rounds down, so the plain partial sum is already a lower
/// bound. Per-term truncation error stays below 3 ulp and the omitted tail
/// below 3 ulp once the running power underflows to zero.
fn atanh_fixed(t: &BigRational, w: u32) -> (BigInt, BigInt) {
    let tt = (t.numer() << w as usize).div_floor(t.denom());
    let t2 = (&tt * &tt) >> w as usize;
    let mut term = tt;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !term.is_zero() {
        sum += &term / BigInt::from(2 * j + 1);
        term = (&term * &t2) >> w as usize;
        j += 1;
    }
    let slack = BigInt::from(3 * j + 3);
    let upper = &sum + slack;
    (sum, upper)
}

/// Certified bounds for `ln(x)`, `x > 0` exact, roughly `precision` bits.
fn ln_bounds(x: &BigRational, precision: u32) -> (BigRational, BigRational) {
    if x.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    let w = precision + LOG_GUARD_BITS;
    let k = floor_log2(x);
    let m = if k >= 0 {
        x / BigRational::from_integer(pow2(k as u64))
    } else {
        x * BigRational::from_integer(pow2((-k) as u64))
    };
    let one = BigRational::one();
    let t = (&m - &one) / (&m + &one);
    let (a_lo, a_hi) = atanh_fixed(&t, w);
    let (l2_lo, l2_hi) = atanh_fixed(&BigRational::new(1.into(), 3.into()), w);
    let k_big = BigInt::from(k);
    let (k_lo, k_hi) = if k >= 0 {
        (&k_big * &l2_lo, &k_big * &l2_hi)
    } else {
        (&k_big * &l2_hi, &k_big * &l2_lo)
    };
    let scale = pow2(w as u64);
    let lo = BigRational::new((a_lo + k_lo) * 2, scale.clone());
    let hi = BigRational::new((a_hi + k_hi) * 2, scale);
    (lo, hi)
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let e = floor_log2(x);
    // Keep 60 significant bits, then rescale.
    let shift = 60 - e;
    let scaled = if shift >= 0 {
        (x.numer() << shift as usize) / x.denom()
    } else {
        x.numer() / (x.denom() << (-shift) as usize)
    };
    let mantissa = scaled.to_f64().unwrap_or(f64::NAN);
    mantissa * 2f64.powi(-(shift as i32))
}

pub(crate) fn parse_decimal(literal: &str) -> Result<BigRational> {
    let bad = || Error::DomainError(format!("not a decimal literal: {literal:?}"));
    let s = literal.trim();
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits: String = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

/// Decimal rendering with `digits` fractional digits, rounded down or up.
pub(crate) fn format_decimal(x: &BigRational, digits: usize, up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = n.sign() == Sign::Minus;
    let mag = n.magnitude().to_string();
    let body = if digits == 0 {
        mag
    } else {
        let padded = format!("{:0>width$}", mag, width = digits + 1);
        let (i, f) = padded.split_at(padded.len() - digits);
        format!("{i}.{f}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
