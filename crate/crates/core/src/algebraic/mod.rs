//! Certified enclosures of the dominant roots, Binet coefficients and
//! logarithmic heights.

mod enclosure;
mod height;
mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use enclosure::RealEnclosure;
pub(crate) use enclosure::parse_decimal;
pub use height::{log_height, HeightDescriptor, HeightValue};
pub use poly::IntPoly;

use crate::error::{Error, Result};
use crate::sequences::{SequenceId, SequenceSpec};

pub const DEFAULT_START_BITS: u32 = 192;
pub const DEFAULT_CAP_BITS: u32 = 1 << 16;

/// Precision ladder: start at `start_bits`, double on failure, give up past
/// `cap_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: DEFAULT_START_BITS,
            cap_bits: DEFAULT_CAP_BITS,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_cap(cap_bits: u32) -> Self {
        PrecisionPolicy {
            start_bits: DEFAULT_START_BITS.min(cap_bits),
            cap_bits,
        }
    }

    /// The rung after `current`, or `None` once the cap is passed.
    pub fn next(&self, current: u32) -> Option<u32> {
        let next = current.checked_mul(2)?;
        (next <= self.cap_bits).then_some(next)
    }

    pub fn rungs(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::successors(Some(self.start_bits), move |&p| self.next(p))
    }

    /// Runs `attempt` on each rung until it returns `Some`.
    pub fn run<T>(
        &self,
        context: &str,
        mut attempt: impl FnMut(u32) -> Result<Option<T>>,
    ) -> Result<T> {
        for bits in self.rungs() {
            if let Some(value) = attempt(bits)? {
                return Ok(value);
            }
        }
        Err(Error::exhausted(self.cap_bits, context))
    }
}

/// A real number that can be enclosed to any requested precision.
pub trait Refinable: Send + Sync {
    fn enclose(&self, precision: u32) -> Result<RealEnclosure>;
}

impl<F> Refinable for F
where
    F: Fn(u32) -> Result<RealEnclosure> + Send + Sync,
{
    fn enclose(&self, precision: u32) -> Result<RealEnclosure> {
        self(precision)
    }
}

/// Shareable handle to a [`Refinable`] with a display label.
#[derive(Clone)]
pub struct LazyReal {
    label: String,
    source: Arc<dyn Refinable>,
}

impl LazyReal {
    pub fn new(label: impl Into<String>, source: impl Refinable + 'static) -> Self {
        LazyReal {
            label: label.into(),
            source: Arc::new(source),
        }
    }

    /// An exact rational; every precision yields the same point enclosure.
    pub fn rational(label: impl Into<String>, value: BigRational) -> Self {
        Self::new(label, move |p| Ok(RealEnclosure::exact(value.clone(), p)))
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl Refinable for LazyReal {
    fn enclose(&self, precision: u32) -> Result<RealEnclosure> {
        self.source.enclose(precision)
    }
}

impl fmt::Debug for LazyReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("LazyReal").field(&self.label).finish()
    }
}

fn sign(x: &BigRational) -> Ordering {
    x.cmp(&BigRational::zero())
}

/// Enclosure of the unique real root `> 1` of `poly`, of width at most
/// `2^(2 - precision)`.
///
/// The endpoints satisfy `poly(lo) < 0 < poly(hi)` exactly (after
/// normalising the leading coefficient to be positive), unless the root is
/// rational and hit exactly, in which case a point enclosure is returned.
pub fn dominant_root(poly: &IntPoly, precision: u32) -> Result<RealEnclosure> {
    if poly.degree() == 0 {
        return Err(Error::NotBracketed);
    }
    let poly = if poly.leading() < 0 {
        IntPoly::new(&poly.coeffs().iter().map(|c| -c).collect::<Vec<_>>())
    } else {
        poly.clone()
    };
    let one = BigRational::one();
    if sign(&poly.eval_rational(&one)) != Ordering::Less {
        return Err(Error::NotBracketed);
    }
    let mut lo = one;
    let mut hi = poly.cauchy_bound();
    debug_assert_eq!(sign(&poly.eval_rational(&hi)), Ordering::Greater);
    let half = BigRational::new(1.into(), 2.into());

    // Bisection to ~60 bits, then Newton with doubling precision.
    let coarse = BigRational::new(1.into(), BigInt::one() << 60usize);
    while &hi - &lo > coarse {
        let mid = (&lo + &hi) * &half;
        match sign(&poly.eval_rational(&mid)) {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Ok(RealEnclosure::exact(mid, precision)),
        }
    }
    if let Some(enc) = newton_polish(&poly, &lo, &hi, precision) {
        return Ok(enc);
    }
    // Newton failed to bracket; fall back to bisection all the way.
    let target = BigRational::new(1.into(), BigInt::one() << (precision as usize - 1).max(1));
    while &hi - &lo > target {
        let mid = (&lo + &hi) * &half;
        match sign(&poly.eval_rational(&mid)) {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Ok(RealEnclosure::exact(mid, precision)),
        }
    }
    Ok(RealEnclosure::new(lo, hi, precision).expect("bisection keeps lo <= hi"))
}

fn newton_polish(
    poly: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
    precision: u32,
) -> Option<RealEnclosure> {
    let deriv = poly.derivative();
    let mut x = (lo + hi) / BigRational::from_integer(2.into());
    let mut bits = 60u32;
    let final_bits = precision + 16;
    let mut extra = 2;
    loop {
        bits = (bits * 2).min(final_bits);
        let fx = poly.eval_rational(&x);
        if fx.is_zero() {
            return Some(RealEnclosure::exact(x, precision));
        }
        let dfx = deriv.eval_rational(&x);
        if dfx.is_zero() {
            return None;
        }
        x = enclosure::round_down(&(&x - fx / dfx), bits);
        if bits == final_bits {
            if extra == 0 {
                break;
            }
            extra -= 1;
        }
    }
    let delta = BigRational::new(1.into(), BigInt::one() << precision as usize);
    let (a, b) = (&x - &delta, &x + &delta);
    let ok = sign(&poly.eval_rational(&a)) == Ordering::Less
        && sign(&poly.eval_rational(&b)) == Ordering::Greater
        && &a >= lo
        && &b <= hi;
    ok.then(|| RealEnclosure::new(a, b, precision).unwrap())
}

/// Common modulus of the complex pair of a monic cubic with one real root:
/// the pair multiplies to `-c0 / root`.
pub fn conjugate_modulus(poly: &IntPoly, root: &RealEnclosure) -> Result<RealEnclosure> {
    if poly.degree() != 3 || poly.leading() != 1 {
        return Err(Error::DomainError(format!("{poly} is not a monic cubic")));
    }
    let product = RealEnclosure::from_integer(-poly.coeffs()[0], root.precision());
    product.checked_div(root)?.sqrt()
}

/// Modulus of the complex conjugate Binet coefficients, from the minimal
/// polynomial of the real one: `|q|^2 = (product of roots) / p`.
pub fn conjugate_coeff_modulus(minpoly: &IntPoly, coeff: &RealEnclosure) -> Result<RealEnclosure> {
    if minpoly.degree() != 3 {
        return Err(Error::DomainError(format!("{minpoly} is not a cubic")));
    }
    let p = coeff.precision();
    let product = RealEnclosure::from_ratio(-minpoly.coeffs()[0], minpoly.leading(), p);
    product.checked_div(coeff)?.sqrt()
}

/// The dominant Binet coefficient of `spec`, evaluated from `root`.
///
/// * Padovan: `(1 + a) / (-a^2 + 3a + 1)`.
/// * Perrin: exactly 1.
/// * Narayana: `phi / ((phi - lambda)(phi - delta))`. The denominator is
///   `f'(phi) = 3 phi^2 - 2 phi` for `f = x^3 - x^2 - 1`, so the coefficient
///   is `1 / (3 phi - 2)`.
///
/// The result is checked against the catalogued minimal polynomial.
pub fn binet_coefficient(spec: &SequenceSpec, root: &RealEnclosure) -> Result<RealEnclosure> {
    let p = root.precision();
    let int = |v: i64| RealEnclosure::from_integer(v, p);
    let coeff = match spec.id {
        SequenceId::Perrin => return Ok(int(1)),
        SequenceId::Padovan => {
            let num = &int(1) + root;
            let den = &(&root.scale(&BigRational::from_integer(3.into())) + &int(1)) - &root.square();
            num.checked_div(&den)?
        }
        SequenceId::Narayana => {
            let den = &root.scale(&BigRational::from_integer(3.into())) - &int(2);
            den.recip()?
        }
    };
    if let Some(minpoly) = spec.binet_coeff_minpoly() {
        if !minpoly.eval_enclosure(&coeff).contains_zero() {
            return Err(Error::DomainError(format!(
                "Binet coefficient {coeff} is not a root of {minpoly}"
            )));
        }
    }
    Ok(coeff)
}

/// Enclosures of the dominant-root Binet data of one sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinetData {
    pub root: RealEnclosure,
    pub coeff: RealEnclosure,
    /// `|beta| = |gamma|` (or `|lambda| = |delta|`).
    pub conj_modulus: RealEnclosure,
    /// `|q| = |r|` (or `|C_lambda| = |C_delta|`); 1 for Perrin.
    pub coeff_conj_modulus: RealEnclosure,
    /// `T_n ~ coeff * root^(n + index_shift)`.
    pub index_shift: i64,
}

impl BinetData {
    pub fn compute(spec: &SequenceSpec, precision: u32) -> Result<Self> {
        Self::compute_with_shift(spec, precision, spec.binet_index_shift)
    }

    /// As [`BinetData::compute`] but with an explicit index shift, for
    /// checking alternative forms of the approximation.
    pub fn compute_with_shift(spec: &SequenceSpec, precision: u32, index_shift: i64) -> Result<Self> {
        let poly = spec.char_poly();
        let root = dominant_root(&poly, precision)?;
        let coeff = binet_coefficient(spec, &root)?;
        let conj_modulus = conjugate_modulus(&poly, &root)?;
        let coeff_conj_modulus = match spec.binet_coeff_minpoly() {
            Some(m) => conjugate_coeff_modulus(&m, &coeff)?,
            None => RealEnclosure::from_integer(1, precision),
        };
        Ok(BinetData {
            root,
            coeff,
            conj_modulus,
            coeff_conj_modulus,
            index_shift,
        })
    }
}

/// `true` iff the enclosure lies strictly inside the open interval
/// `(lo, hi)` given as decimal literals.
pub fn strictly_within(x: &RealEnclosure, lo: &str, hi: &str) -> bool {
    let lo = parse_decimal(lo).expect("decimal literal");
    let hi = parse_decimal(hi).expect("decimal literal");
    x.lo() > &lo && x.hi() < &hi
}
