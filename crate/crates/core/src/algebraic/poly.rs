use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::RealEnclosure;

/// Integer polynomial, coefficients stored from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(coeffs: &[i64]) -> Self {
        let mut coeffs = coeffs.to_vec();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() == 1 {
            return IntPoly::new(&[0]);
        }
        let d: Vec<i64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as i64)
            .collect();
        IntPoly::new(&d)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(BigInt::from(c));
        }
        acc
    }

    /// Horner evaluation in interval arithmetic.
    pub fn eval_enclosure(&self, x: &RealEnclosure) -> RealEnclosure {
        let p = x.precision();
        let mut acc = RealEnclosure::from_integer(0, p);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &RealEnclosure::from_integer(c, p);
        }
        acc
    }

    /// Discriminant of a cubic `a x^3 + b x^2 + c x + d`.
    pub fn cubic_discriminant(&self) -> Option<BigInt> {
        if self.degree() != 3 {
            return None;
        }
        let [d, c, b, a] = [0, 1, 2, 3].map(|i| BigInt::from(self.coeffs[i]));
        let disc = BigInt::from(18) * &a * &b * &c * &d - BigInt::from(4) * b.pow(3) * &d
            + b.pow(2) * c.pow(2)
            - BigInt::from(4) * &a * c.pow(3)
            - BigInt::from(27) * a.pow(2) * d.pow(2);
        Some(disc)
    }

    /// `max |c_i / c_n| + 1`, an upper bound on the modulus of every root.
    pub fn cauchy_bound(&self) -> BigRational {
        let lead = BigInt::from(self.leading()).abs();
        let max = self.coeffs[..self.degree()]
            .iter()
            .map(|&c| BigInt::from(c).abs())
            .max()
            .unwrap_or_default();
        BigRational::new(max, lead) + BigRational::from_integer(1.into())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 && self.coeffs.len() > 1 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}
