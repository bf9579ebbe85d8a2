use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebraic::{LazyReal, PrecisionPolicy, Refinable, RealEnclosure};
use crate::error::{Error, Result};

/// Continued-fraction expansion of a refinable real with certified partial
/// quotients and exact convergents.
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    source: LazyReal,
    policy: PrecisionPolicy,
    precision: u32,
    value: RealEnclosure,
    quotients: Vec<BigInt>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

/// Every quotient whose floor is identical at both ends of the enclosure,
/// stopping after `max` of them.
fn certified_quotients(x: &RealEnclosure, max: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let (mut lo, mut hi) = (x.lo().clone(), x.hi().clone());
    while out.len() < max {
        let a = lo.floor();
        if a != hi.floor() {
            break;
        }
        let (flo, fhi) = (&lo - &a, &hi - &a);
        out.push(a.to_integer());
        // A zero fractional part means the expansion may end here (or the
        // next quotient is unbounded); neither is decidable from the interval.
        if flo.is_zero() {
            break;
        }
        lo = fhi.recip();
        hi = flo.recip();
    }
    out
}

impl ContinuedFraction {
    pub fn new(source: LazyReal, policy: PrecisionPolicy) -> Result<Self> {
        let precision = policy.start_bits;
        let value = source.enclose(precision)?;
        Ok(ContinuedFraction {
            source,
            policy,
            precision,
            value,
            quotients: Vec::new(),
            p: Vec::new(),
            q: Vec::new(),
        })
    }

    /// Extends the expansion to at least `count` quotients, refining the
    /// source as needed.
    pub fn ensure(&mut self, count: usize) -> Result<()> {
        while self.quotients.len() < count {
            let found = certified_quotients(&self.value, count);
            if found.len() > self.quotients.len() {
                debug_assert!(found.starts_with(&self.quotients));
                for a in &found[self.quotients.len()..] {
                    self.push(a.clone());
                }
                continue;
            }
            match self.policy.next(self.precision) {
                Some(next) => {
                    self.precision = next;
                    self.value = self.source.enclose(next)?;
                }
                None => {
                    return Err(Error::exhausted(
                        self.policy.cap_bits,
                        format!(
                            "partial quotient {} of {}",
                            self.quotients.len(),
                            self.source.label()
                        ),
                    ))
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, a: BigInt) {
        let k = self.quotients.len();
        let (p1, p2) = match k {
            0 => (BigInt::one(), BigInt::zero()),
            1 => (self.p[0].clone(), BigInt::one()),
            _ => (self.p[k - 1].clone(), self.p[k - 2].clone()),
        };
        let (q1, q2) = match k {
            0 => (BigInt::zero(), BigInt::one()),
            1 => (self.q[0].clone(), BigInt::zero()),
            _ => (self.q[k - 1].clone(), self.q[k - 2].clone()),
        };
        self.p.push(&a * p1 + p2);
        self.q.push(&a * q1 + q2);
        self.quotients.push(a);
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    /// `(p_k, q_k)` for a computed index `k`.
    pub fn convergent(&self, k: usize) -> Option<(&BigInt, &BigInt)> {
        Some((self.p.get(k)?, self.q.get(k)?))
    }

    pub fn convergent_ratio(&self, k: usize) -> Option<BigRational> {
        self.convergent(k)
            .map(|(p, q)| BigRational::new(p.clone(), q.clone()))
    }

    pub fn denominators(&self) -> &[BigInt] {
        &self.q
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.p
    }

    /// Current enclosure of the expanded value.
    pub fn value(&self) -> &RealEnclosure {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn source(&self) -> &LazyReal {
        &self.source
    }

    /// Smallest `k` with `q_k > bound`.
    pub fn first_denominator_above(&mut self, bound: &BigInt) -> Result<usize> {
        loop {
            if let Some(k) = self.q.iter().position(|q| q > bound) {
                return Ok(k);
            }
            self.ensure(self.quotients.len() + 8)?;
        }
    }
}

/// At least `count` certified quotients of `x`.
pub fn partial_quotients(x: LazyReal, count: usize, policy: PrecisionPolicy) -> Result<ContinuedFraction> {
    let mut cf = ContinuedFraction::new(x, policy)?;
    cf.ensure(count)?;
    Ok(cf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::dominant_root;
    use crate::sequences::PADOVAN;
    use num_traits::Signed;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn log2_over_log_alpha() -> LazyReal {
        LazyReal::new("log 2 / log alpha", |p| {
            let alpha = dominant_root(&PADOVAN.char_poly(), p)?;
            RealEnclosure::from_integer(2, p).ln()?.checked_div(&alpha.ln()?)
        })
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn log2_over_log_alpha_quotients() {
        let cf = partial_quotients(log2_over_log_alpha(), 26, policy()).unwrap();
        assert_eq!(
            cf.quotients()[..26],
            ints(&[2, 2, 6, 1, 1, 1, 2, 1, 13, 3, 1, 1, 1, 1, 1, 8, 1, 3, 2, 2, 7, 1, 2, 5, 1, 2])[..]
        );
    }

    #[test]
    fn golden_ratio_is_all_ones() {
        let phi = LazyReal::new("phi", |p| {
            let s5 = RealEnclosure::from_integer(5, p).sqrt()?;
            Ok((&s5 + &RealEnclosure::from_integer(1, p)).scale(&BigRational::new(1.into(), 2.into())))
        });
        let cf = partial_quotients(phi, 20, policy()).unwrap();
        assert!(cf.quotients()[..20].iter().all(|a| a.is_one()));
        // Denominators are Fibonacci numbers.
        assert_eq!(cf.denominators()[..8], ints(&[1, 1, 2, 3, 5, 8, 13, 21])[..]);
    }

    #[test]
    fn rational_input_exhausts() {
        let x = LazyReal::rational("7/3", BigRational::new(7.into(), 3.into()));
        let small = PrecisionPolicy { start_bits: 64, cap_bits: 1024 };
        let mut cf = partial_quotients(x, 2, small).unwrap();
        assert_eq!(cf.quotients(), &ints(&[2, 3])[..]);
        assert!(matches!(cf.ensure(3), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn negative_values_expand() {
        let x = LazyReal::rational("-7/3", BigRational::new((-7).into(), 3.into()));
        let small = PrecisionPolicy { start_bits: 64, cap_bits: 128 };
        let cf = partial_quotients(x, 3, small).unwrap();
        // -7/3 = -3 + 2/3 = [-3; 1, 2]
        assert_eq!(cf.quotients(), &ints(&[-3, 1, 2])[..]);
    }

    #[test]
    fn first_denominator_above_bound() {
        let mut cf = ContinuedFraction::new(log2_over_log_alpha(), policy()).unwrap();
        let m = BigInt::from(10).pow(17);
        let k = cf.first_denominator_above(&m).unwrap();
        assert!(cf.denominators()[k] > m);
        assert!(k == 0 || cf.denominators()[k - 1] <= m);
    }

    #[test]
    fn convergent_invariants() {
        let cf = partial_quotients(log2_over_log_alpha(), 60, policy()).unwrap();
        let (p, q) = (cf.numerators(), cf.denominators());
        // Determinant identity p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}.
        for k in 1..p.len() {
            let det = &p[k] * &q[k - 1] - &p[k - 1] * &q[k];
            let expect = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            assert_eq!(det, expect, "k = {k}");
        }
        // |tau - p_k/q_k| < 1/(q_k q_{k+1}), certified at a finer precision.
        let tau = log2_over_log_alpha().enclose(1024).unwrap();
        for k in 0..p.len() - 1 {
            let approx = RealEnclosure::exact(BigRational::new(p[k].clone(), q[k].clone()), 1024);
            let gap = (&tau - &approx).abs();
            let limit = BigRational::new(BigInt::one(), &q[k] * &q[k + 1]);
            assert!(gap.hi() < &limit, "k = {k}");
            assert!(gap.lo().is_positive());
        }
    }
}
