//! Serialize big integers as decimal strings so JSON consumers never lose digits.

use std::fmt::Display;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serializer;

pub(crate) fn display<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// A JSON number when it fits in `u64`, otherwise a decimal string.
pub(crate) fn integer_opt<S: Serializer>(value: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match value.as_ref().map(|v| (v, v.to_u64())) {
        Some((_, Some(small))) => s.serialize_u64(small),
        Some((big, None)) => s.collect_str(big),
        None => s.serialize_none(),
    }
}
