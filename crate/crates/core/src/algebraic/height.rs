//! Catalogued logarithmic heights.
//!
//! Only the numbers that appear in the linear forms are supported: rational
//! integers, the two dominant roots and the two non-trivial Binet
//! coefficients, plus products and inverses of those (bounded through
//! `h(xy) <= h(x) + h(y)` and `h(1/x) = h(x)`).

use std::fmt;

use super::{dominant_root, IntPoly, RealEnclosure};
use crate::error::{Error, Result};
use crate::sequences::SequenceId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightDescriptor {
    Integer(i64),
    DominantRoot(SequenceId),
    BinetCoefficient(SequenceId),
    /// An algebraic number given only by its minimal polynomial; accepted
    /// when the polynomial is one of the catalogued ones.
    MinimalPolynomial(IntPoly),
    Product(Vec<HeightDescriptor>),
    Inverse(Box<HeightDescriptor>),
}

impl fmt::Display for HeightDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightDescriptor::Integer(m) => write!(f, "{m}"),
            HeightDescriptor::DominantRoot(s) => write!(f, "dominant root of {s}"),
            HeightDescriptor::BinetCoefficient(s) => write!(f, "Binet coefficient of {s}"),
            HeightDescriptor::MinimalPolynomial(p) => write!(f, "root of {p}"),
            HeightDescriptor::Product(parts) => {
                let parts: Vec<String> = parts.iter().map(|p| format!("({p})")).collect();
                f.write_str(&parts.join(" * "))
            }
            HeightDescriptor::Inverse(inner) => write!(f, "1/({inner})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightValue {
    pub value: RealEnclosure,
    pub description: String,
    /// `false` when `value` is only an upper bound (products).
    pub exact: bool,
}

/// Catalogued minimal polynomials: leading coefficient and the sequence whose
/// data they belong to. All roots other than the dominant one lie inside the
/// unit circle.
fn catalogue(poly: &IntPoly) -> Option<HeightDescriptor> {
    match poly.coeffs() {
        [-1, -1, 0, 1] => Some(HeightDescriptor::DominantRoot(SequenceId::Padovan)),
        [-1, 0, -1, 1] => Some(HeightDescriptor::DominantRoot(SequenceId::Narayana)),
        [-1, 6, -23, 23] => Some(HeightDescriptor::BinetCoefficient(SequenceId::Padovan)),
        [-1, -3, 0, 31] => Some(HeightDescriptor::BinetCoefficient(SequenceId::Narayana)),
        _ => None,
    }
}

pub fn log_height(number: &HeightDescriptor, precision: u32) -> Result<HeightValue> {
    let int = |v: i64| RealEnclosure::from_integer(v, precision);
    let third = |x: RealEnclosure| x.checked_div(&int(3));
    let (value, exact) = match number {
        HeightDescriptor::Integer(0) => {
            return Err(Error::UnsupportedNumber("the integer 0".into()));
        }
        HeightDescriptor::Integer(m) => (int(m.abs()).ln()?, true),
        // Monic minimal polynomial with the conjugates inside the unit
        // circle: h = log(root) / 3.
        HeightDescriptor::DominantRoot(seq) => {
            let root = dominant_root(&seq.spec().char_poly(), precision)?;
            (third(root.ln()?)?, true)
        }
        // Leading coefficient c with every root inside the unit circle:
        // h = log(c) / 3.
        HeightDescriptor::BinetCoefficient(seq) => {
            let lead = seq.spec().binet_coeff_leading();
            (third(int(lead).ln()?)?, true)
        }
        HeightDescriptor::MinimalPolynomial(poly) => {
            let known = catalogue(poly)
                .ok_or_else(|| Error::UnsupportedNumber(format!("root of {poly}")))?;
            let h = log_height(&known, precision)?;
            (h.value, h.exact)
        }
        HeightDescriptor::Product(parts) => {
            let mut total = int(0);
            for part in parts {
                total = &total + &log_height(part, precision)?.value;
            }
            (total, parts.len() <= 1)
        }
        HeightDescriptor::Inverse(inner) => {
            let h = log_height(inner, precision)?;
            (h.value, h.exact)
        }
    };
    Ok(HeightValue {
        value,
        description: number.to_string(),
        exact,
    })
}
