//! Continued-fraction reduction of the Matveev bound: the Baker–Davenport
//! (Dujella–Pethő) criterion and Legendre's criterion for the homogeneous
//! case.

mod continued_fraction;

pub use continued_fraction::{partial_quotients, ContinuedFraction};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::algebraic::{LazyReal, PrecisionPolicy, RealEnclosure, Refinable};
use crate::error::{Error, Result};
use crate::linear_forms::Mu;

/// Convergents tried by [`baker_davenport`] before giving up.
pub const MAX_ATTEMPTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BakerDavenport,
    Legendre,
}

#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    pub method: Method,
    pub convergent_index: usize,
    pub q: BigInt,
    /// `||μ q|| - M ||τ q||`, Baker–Davenport only.
    pub epsilon: Option<RealEnclosure>,
    /// `max a_i` for `i <= convergent_index`, Legendre only.
    pub a_max: Option<BigInt>,
    pub new_bound: u64,
    /// Highest working precision the certificate needed.
    pub precision_bits: u32,
}

/// Certified `min_m |x - m|`.
pub fn nearest_integer_distance(x: &RealEnclosure) -> Result<RealEnclosure> {
    let half = BigRational::new(BigInt::one(), 2.into());
    if x.width() >= BigRational::new(BigInt::one(), 4.into()) {
        return Err(Error::AmbiguousMidpoint);
    }
    let m = (x.midpoint() + &half).floor();
    if x.lo() < &(&m - &half) || x.hi() > &(&m + &half) {
        return Err(Error::AmbiguousMidpoint);
    }
    Ok((x - &RealEnclosure::exact(m, x.precision())).abs())
}

fn check_a_b(a: &RealEnclosure, b: &RealEnclosure, m: &BigInt) -> Result<()> {
    if !a.is_positive() {
        return Err(Error::DomainError(format!("A = {a} must be positive")));
    }
    if b.lo() <= &BigRational::one() {
        return Err(Error::DomainError(format!("B = {b} must exceed 1")));
    }
    if m < &BigInt::one() {
        return Err(Error::DomainError(format!("M = {m} must be at least 1")));
    }
    Ok(())
}

/// `floor(log(x) / log(B.lo))` from the upper endpoint.
fn log_ratio_floor(x: &RealEnclosure, b: &RealEnclosure) -> Result<u64> {
    let p = x.precision().max(b.precision());
    let log_b = RealEnclosure::exact(b.lo().clone(), p).ln()?;
    let r = x.ln()?.checked_div(&log_b)?;
    let f = r.hi().floor().to_integer();
    Ok(if f.is_negative() { 0 } else { f.to_u64().unwrap_or(u64::MAX) })
}

enum Sign {
    Positive(RealEnclosure, u32),
    Nonpositive,
}

fn certified_epsilon(
    tau: &LazyReal,
    mu: &LazyReal,
    q: &BigInt,
    m: &BigInt,
    policy: &PrecisionPolicy,
    start: u32,
) -> Result<Sign> {
    let qr = BigRational::from_integer(q.clone());
    let mr = BigRational::from_integer(m.clone());
    let mut bits = start;
    loop {
        let attempt = (|| -> Result<Option<Sign>> {
            let dmu = nearest_integer_distance(&mu.enclose(bits)?.scale(&qr))?;
            let dtau = nearest_integer_distance(&tau.enclose(bits)?.scale(&qr))?;
            let eps = &dmu - &dtau.scale(&mr);
            Ok(if eps.is_positive() {
                Some(Sign::Positive(eps, bits))
            } else if !eps.hi().is_positive() {
                Some(Sign::Nonpositive)
            } else {
                None
            })
        })();
        match attempt {
            Ok(Some(sign)) => return Ok(sign),
            Ok(None) | Err(Error::AmbiguousMidpoint) => {}
            Err(e) => return Err(e),
        }
        bits = policy.next(bits).ok_or_else(|| {
            Error::exhausted(policy.cap_bits, format!("sign of epsilon at q = {q}"))
        })?;
    }
}

/// If `0 < |w τ - v + μ| < A B^{-w}` with `w <= M`, then `w <= new_bound`.
pub fn baker_davenport(
    tau: &LazyReal,
    mu: &Mu,
    a: &RealEnclosure,
    b: &RealEnclosure,
    m: &BigInt,
    policy: PrecisionPolicy,
) -> Result<ReductionOutcome> {
    check_a_b(a, b, m)?;
    let mu = match mu {
        Mu::Zero => return Err(Error::MuDegenerate),
        Mu::Value(v) => v,
    };
    let mut cf = ContinuedFraction::new(tau.clone(), policy)?;
    let first = cf.first_denominator_above(&(m * 6))?;
    for k in first..first + MAX_ATTEMPTS {
        cf.ensure(k + 1)?;
        let q = cf.denominators()[k].clone();
        match certified_epsilon(tau, mu, &q, m, &policy, cf.precision())? {
            Sign::Positive(eps, bits) => {
                let p = bits.max(a.precision());
                let ratio = RealEnclosure::exact(a.hi() * BigRational::from_integer(q.clone()) / eps.lo(), p);
                let new_bound = log_ratio_floor(&ratio, b)?;
                return Ok(ReductionOutcome {
                    method: Method::BakerDavenport,
                    convergent_index: k,
                    q,
                    epsilon: Some(eps),
                    a_max: None,
                    new_bound,
                    precision_bits: bits.max(cf.precision()),
                });
            }
            Sign::Nonpositive => continue,
        }
    }
    Err(Error::EpsilonNonpositive {
        first_index: first,
        attempts: MAX_ATTEMPTS,
    })
}

/// If `0 < |l τ - n| < A B^{-n}` with `l <= M` and `B^n > 2 A M`, then
/// `n <= new_bound`.
pub fn legendre_bound(
    tau: &LazyReal,
    a: &RealEnclosure,
    b: &RealEnclosure,
    m: &BigInt,
    policy: PrecisionPolicy,
) -> Result<ReductionOutcome> {
    check_a_b(a, b, m)?;
    let mut cf = ContinuedFraction::new(tau.clone(), policy)?;
    let n = cf.first_denominator_above(m)?;
    let a_max = cf.quotients()[..=n].iter().max().cloned().unwrap_or_default();
    let factor = (&a_max + 2) * m;
    let p = cf.precision().max(a.precision());
    let arg = RealEnclosure::exact(a.hi() * BigRational::from_integer(factor), p);
    Ok(ReductionOutcome {
        method: Method::Legendre,
        convergent_index: n,
        q: cf.denominators()[n].clone(),
        epsilon: None,
        a_max: Some(a_max),
        new_bound: log_ratio_floor(&arg, b)?,
        precision_bits: cf.precision(),
    })
}

/// `B^{cutoff+1} / (2A)`; Legendre's criterion applies to every `n > cutoff`
/// when this exceeds `M`.
pub fn legendre_margin(a: &RealEnclosure, b: &RealEnclosure, cutoff: u64) -> Result<RealEnclosure> {
    let exp = i64::try_from(cutoff + 1).map_err(|_| Error::DomainError("cutoff too large".into()))?;
    b.powi(exp)?.checked_div(&a.scale(&BigRational::from_integer(2.into())))
}

pub fn legendre_applicable(a: &RealEnclosure, b: &RealEnclosure, m: &BigInt, cutoff: u64) -> Result<bool> {
    Ok(legendre_margin(a, b, cutoff)?.cmp_integer(m) == Some(std::cmp::Ordering::Greater))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::strictly_within;
    use crate::linear_forms::reduction_setup;
    use crate::search::{EquationFamily, Form, Kind};
    use crate::sequences::SequenceId;

    const P: u32 = 192;

    fn enc(x: &str) -> RealEnclosure {
        RealEnclosure::from_decimal(x, P).unwrap()
    }

    #[test]
    fn distance_examples() {
        let x = RealEnclosure::new(
            crate::algebraic::parse_decimal("2.2499").unwrap(),
            crate::algebraic::parse_decimal("2.2501").unwrap(),
            P,
        )
        .unwrap();
        let d = nearest_integer_distance(&x).unwrap();
        assert!(strictly_within(&d, "0.2498", "0.2502"));
        assert!(d.contains(&BigRational::new(1.into(), 4.into())));
        let half = nearest_integer_distance(&enc("3.5")).unwrap();
        assert_eq!(half.lo(), &BigRational::new(1.into(), 2.into()));
        assert!(half.is_point());
        let neg = nearest_integer_distance(&enc("-2.1")).unwrap();
        assert!(neg.contains(&BigRational::new(1.into(), 10.into())));
        let straddle = RealEnclosure::new(
            crate::algebraic::parse_decimal("3.49").unwrap(),
            crate::algebraic::parse_decimal("3.51").unwrap(),
            P,
        )
        .unwrap();
        assert!(matches!(nearest_integer_distance(&straddle), Err(Error::AmbiguousMidpoint)));
        let wide = RealEnclosure::new(BigRational::one(), BigRational::from_integer(2.into()), P).unwrap();
        assert!(matches!(nearest_integer_distance(&wide), Err(Error::AmbiguousMidpoint)));
    }

    fn fam(seq: SequenceId, form: Form, kind: Kind) -> EquationFamily {
        EquationFamily::new(seq, form, kind)
    }

    #[test]
    fn padovan_b2_reduces() {
        let s = reduction_setup(fam(SequenceId::Padovan, Form::Thabit, Kind::First), 2, P).unwrap();
        let m: BigInt = "18200000000000000".parse().unwrap();
        let out = baker_davenport(&s.tau, &s.mu, &s.a, &s.base, &m, PrecisionPolicy::default()).unwrap();
        assert_eq!(out.method, Method::BakerDavenport);
        assert!(out.q > &m * 6);
        assert!(out.epsilon.as_ref().unwrap().is_positive());
        assert!(out.new_bound < 212, "{}", out.new_bound);
        // The chosen convergent is the first past 6M.
        let mut cf = ContinuedFraction::new(s.tau.clone(), PrecisionPolicy::default()).unwrap();
        cf.ensure(out.convergent_index + 1).unwrap();
        assert_eq!(cf.denominators()[out.convergent_index], out.q);
        assert!(cf.denominators()[out.convergent_index - 1] <= &m * 6);
    }

    #[test]
    fn perrin_b2_williams_is_degenerate() {
        let s = reduction_setup(fam(SequenceId::Perrin, Form::Williams, Kind::First), 2, P).unwrap();
        let m: BigInt = "13400000000000000".parse().unwrap();
        assert!(matches!(
            baker_davenport(&s.tau, &s.mu, &s.a, &s.base, &m, PrecisionPolicy::default()),
            Err(Error::MuDegenerate)
        ));
        let out = legendre_bound(&s.tau, &s.a, &s.base, &m, PrecisionPolicy::default()).unwrap();
        assert_eq!(out.method, Method::Legendre);
        assert_eq!(out.a_max, Some(BigInt::from(80)));
        // The published q_42 < M < q_43 counts two places later than k here.
        assert_eq!(out.convergent_index, 41);
        assert!(out.q > m);
        let mut cf = ContinuedFraction::new(s.tau.clone(), PrecisionPolicy::default()).unwrap();
        cf.ensure(41).unwrap();
        assert!(cf.denominators()[40] < m);
        assert!(out.new_bound < 159, "{}", out.new_bound);
        let margin = legendre_margin(&s.a, &s.base, 350).unwrap();
        let floor: BigInt = "170000000000000000000000000000000000000000".parse().unwrap();
        assert_eq!(margin.cmp_integer(&floor), Some(std::cmp::Ordering::Greater));
        assert!(legendre_applicable(&s.a, &s.base, &m, 350).unwrap());
    }

    #[test]
    fn legendre_golden_ratio() {
        let phi = LazyReal::new("phi", |p| {
            let s5 = RealEnclosure::from_integer(5, p).sqrt()?;
            Ok((&s5 + &RealEnclosure::from_integer(1, p)).scale(&BigRational::new(1.into(), 2.into())))
        });
        let a = enc("2");
        let b = enc("1.5");
        let out = legendre_bound(&phi, &a, &b, &BigInt::from(100), PrecisionPolicy::default()).unwrap();
        assert_eq!(out.a_max, Some(BigInt::one()));
        // log(2 * 3 * 100) / log 1.5 = 15.77
        assert_eq!(out.new_bound, 15);
    }

    #[test]
    fn bad_parameters() {
        let s = reduction_setup(fam(SequenceId::Padovan, Form::Thabit, Kind::First), 2, P).unwrap();
        let m = BigInt::from(1000);
        let one = enc("1");
        assert!(matches!(
            baker_davenport(&s.tau, &s.mu, &s.a, &one, &m, PrecisionPolicy::default()),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            legendre_bound(&s.tau, &-s.a.clone(), &s.base, &m, PrecisionPolicy::default()),
            Err(Error::DomainError(_))
        ));
    }
}
