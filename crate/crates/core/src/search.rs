//! Exact enumeration of `T_n = (b ± 1) * b^l ± 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{terms_up_to, SequenceId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(self, x: i64) -> i64 {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `(b + 1)` forms are Thabit numbers, `(b - 1)` forms Williams numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Thabit,
    Williams,
}

/// Trailing `- 1` is the first kind, `+ 1` the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    First,
    Second,
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "thabit" => Ok(Form::Thabit),
            "williams" => Ok(Form::Williams),
            other => Err(Error::Config(format!("unknown form {other:?}"))),
        }
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "first" => Ok(Kind::First),
            "second" => Ok(Kind::Second),
            other => Err(Error::Config(format!("unknown kind {other:?}"))),
        }
    }
}

/// One of the twelve equations `T_n = (b ± 1) b^l ± 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EquationFamily {
    pub sequence: SequenceId,
    pub base_sign: Sign,
    pub tail_sign: Sign,
}

impl EquationFamily {
    pub fn new(sequence: SequenceId, form: Form, kind: Kind) -> Self {
        EquationFamily {
            sequence,
            base_sign: match form {
                Form::Thabit => Sign::Plus,
                Form::Williams => Sign::Minus,
            },
            tail_sign: match kind {
                Kind::First => Sign::Minus,
                Kind::Second => Sign::Plus,
            },
        }
    }

    /// All twelve families, ordered by sequence, then Thabit before
    /// Williams, then first kind before second.
    pub fn all() -> Vec<EquationFamily> {
        let mut out = Vec::with_capacity(12);
        for seq in SequenceId::ALL {
            for form in [Form::Thabit, Form::Williams] {
                for kind in [Kind::First, Kind::Second] {
                    out.push(EquationFamily::new(seq, form, kind));
                }
            }
        }
        out
    }

    pub fn form(&self) -> Form {
        match self.base_sign {
            Sign::Plus => Form::Thabit,
            Sign::Minus => Form::Williams,
        }
    }

    pub fn kind(&self) -> Kind {
        match self.tail_sign {
            Sign::Minus => Kind::First,
            Sign::Plus => Kind::Second,
        }
    }

    /// `b + 1` or `b - 1`.
    pub fn base_factor(&self, b: u64) -> u64 {
        match self.base_sign {
            Sign::Plus => b + 1,
            Sign::Minus => b - 1,
        }
    }

    /// `(b ± 1) b^l ± 1`.
    pub fn value(&self, b: u64, l: u32) -> BigInt {
        BigInt::from(self.base_factor(b)) * BigInt::from(b).pow(l) + self.tail_sign.apply(1)
    }

    /// Short identifier such as `padovan-thabit-first`.
    pub fn slug(&self) -> String {
        let form = match self.form() {
            Form::Thabit => "thabit",
            Form::Williams => "williams",
        };
        let kind = match self.kind() {
            Kind::First => "first",
            Kind::Second => "second",
        };
        format!("{}-{form}-{kind}", self.sequence)
    }

    pub fn equation(&self) -> String {
        format!(
            "{}_n = (b {} 1)*b^l {} 1",
            self.sequence.symbol(),
            self.base_sign.symbol(),
            self.tail_sign.symbol()
        )
    }
}

impl fmt::Display for EquationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.slug())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Solution {
    pub family: EquationFamily,
    pub n: u64,
    pub b: u64,
    pub l: u32,
    #[serde(serialize_with = "crate::serde_str::display")]
    pub value: BigInt,
}

impl Solution {
    /// The derivation of the bounds assumes `l < n`; small solutions such as
    /// `P_0 = 1 = 1 * 2^1 - 1` do not satisfy it.
    pub fn violates_l_below_n(&self) -> bool {
        u64::from(self.l) >= self.n
    }

    pub fn triple(&self) -> (u64, u64, u32) {
        (self.n, self.b, self.l)
    }
}

/// Finds `l >= 1` with `value = (b ± 1) b^l ± 1`, by exact division.
pub fn decompose(value: &BigInt, b: u64, base_sign: Sign, tail_sign: Sign) -> Option<u32> {
    if b < 2 {
        return None;
    }
    let shifted = value - tail_sign.apply(1);
    if !shifted.is_positive() {
        return None;
    }
    let factor = BigInt::from(match base_sign {
        Sign::Plus => b + 1,
        Sign::Minus => b - 1,
    });
    let (mut rest, rem) = shifted.div_rem(&factor);
    if !rem.is_zero() {
        return None;
    }
    let base = BigInt::from(b);
    let mut l = 0u32;
    loop {
        let (q, r) = rest.div_rem(&base);
        if !r.is_zero() {
            break;
        }
        rest = q;
        l += 1;
    }
    (rest.is_one() && l >= 1).then_some(l)
}

fn check_range(b_min: u64, b_max: u64) -> Result<()> {
    if b_min < 2 || b_min > b_max {
        return Err(Error::Config(format!(
            "base range [{b_min}, {b_max}] must satisfy 2 <= b_min <= b_max"
        )));
    }
    Ok(())
}

fn solutions_in(
    family: EquationFamily,
    terms: &[BigInt],
    b_min: u64,
    b_max: u64,
    n_range: std::ops::RangeInclusive<u64>,
) -> Vec<Solution> {
    let mut out: Vec<Solution> = (b_min..=b_max)
        .into_par_iter()
        .flat_map_iter(|b| {
            n_range.clone().filter_map(move |n| {
                let value = &terms[n as usize];
                decompose(value, b, family.base_sign, family.tail_sign).map(|l| Solution {
                    family,
                    n,
                    b,
                    l,
                    value: value.clone(),
                })
            })
        })
        .collect();
    out.sort_by_key(|s| (s.b, s.n, s.l));
    out
}

/// Every solution with `0 <= n <= n_max` and `b_min <= b <= b_max`, sorted by
/// `(b, n, l)`.
pub fn enumerate_solutions(
    family: EquationFamily,
    b_min: u64,
    b_max: u64,
    n_max: u64,
) -> Result<Vec<Solution>> {
    check_range(b_min, b_max)?;
    let terms = terms_up_to(family.sequence.spec(), n_max);
    Ok(solutions_in(family, &terms, b_min, b_max, 0..=n_max))
}

/// Result of an exhaustive check over `lo < n <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapCertificate {
    pub family: EquationFamily,
    pub b_min: u64,
    pub b_max: u64,
    pub lo: u64,
    pub hi: u64,
    /// Number of `(n, b)` pairs examined.
    pub pairs_checked: u64,
    pub counterexamples: Vec<Solution>,
}

impl GapCertificate {
    pub fn is_empty(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn verify_no_solutions_between(
    family: EquationFamily,
    b_min: u64,
    b_max: u64,
    lo: u64,
    hi: u64,
) -> Result<GapCertificate> {
    check_range(b_min, b_max)?;
    if lo > hi {
        return Err(Error::Config(format!("gap [{lo}, {hi}] is reversed")));
    }
    let (counterexamples, pairs_checked) = if lo == hi {
        (Vec::new(), 0)
    } else {
        let terms = terms_up_to(family.sequence.spec(), hi);
        let found = solutions_in(family, &terms, b_min, b_max, lo + 1..=hi);
        (found, (hi - lo) * (b_max - b_min + 1))
    };
    Ok(GapCertificate {
        family,
        b_min,
        b_max,
        lo,
        hi,
        pairs_checked,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(seq: SequenceId, form: Form, kind: Kind) -> EquationFamily {
        EquationFamily::new(seq, form, kind)
    }

    fn triples(sols: &[Solution]) -> Vec<(u64, u64, u32)> {
        let mut t: Vec<_> = sols.iter().map(Solution::triple).collect();
        t.sort();
        t
    }

    #[test]
    fn decompose_examples() {
        use Sign::*;
        // Thabit first kind: (b+1) b^l - 1
        assert_eq!(decompose(&5.into(), 2, Plus, Minus), Some(1));
        // Thabit second kind: 2745 = 8 * 7^3 + 1
        assert_eq!(decompose(&2745.into(), 7, Plus, Plus), Some(3));
        assert_eq!(decompose(&4.into(), 2, Plus, Minus), None);
        // Williams first kind with b - 1 = 1: 3 = 1 * 2^2 - 1
        assert_eq!(decompose(&3.into(), 2, Minus, Minus), Some(2));
        // E_1 = 0 gives 1 = 2^0, which needs l >= 1.
        assert_eq!(decompose(&0.into(), 2, Minus, Minus), None);
        assert_eq!(decompose(&0.into(), 2, Minus, Plus), None);
        assert_eq!(decompose(&(-5).into(), 3, Plus, Plus), None);
    }

    #[test]
    fn family_catalogue() {
        let all = EquationFamily::all();
        assert_eq!(all.len(), 12);
        let f = fam(SequenceId::Perrin, Form::Williams, Kind::Second);
        assert_eq!(f.slug(), "perrin-williams-second");
        assert_eq!(f.equation(), "E_n = (b - 1)*b^l + 1");
        assert_eq!(f.value(2, 4), BigInt::from(17));
    }

    #[test]
    fn padovan_thabit_first() {
        let sols = enumerate_solutions(fam(SequenceId::Padovan, Form::Thabit, Kind::First), 2, 10, 300).unwrap();
        assert_eq!(triples(&sols), vec![(7, 2, 1)]);
        assert_eq!(sols[0].value, BigInt::from(5));
    }

    #[test]
    fn perrin_williams_first() {
        let sols = enumerate_solutions(fam(SequenceId::Perrin, Form::Williams, Kind::First), 2, 10, 350).unwrap();
        assert_eq!(
            triples(&sols),
            vec![(0, 2, 2), (3, 2, 2), (5, 3, 1), (6, 3, 1), (7, 2, 3), (10, 3, 2), (12, 6, 1)]
        );
    }

    #[test]
    fn narayana_williams_second() {
        let sols =
            enumerate_solutions(fam(SequenceId::Narayana, Form::Williams, Kind::Second), 2, 10, 400).unwrap();
        assert_eq!(
            triples(&sols),
            vec![(4, 2, 1), (7, 2, 3), (8, 4, 1), (9, 3, 2), (14, 2, 7)]
        );
    }

    #[test]
    fn repeated_values_give_distinct_triples() {
        let sols = enumerate_solutions(fam(SequenceId::Padovan, Form::Williams, Kind::First), 2, 2, 10).unwrap();
        let t = triples(&sols);
        assert!(t.starts_with(&[(0, 2, 1), (1, 2, 1), (2, 2, 1)]));
        assert!(sols[0].violates_l_below_n());
    }

    #[test]
    fn output_sorted_by_base_then_index() {
        let sols = enumerate_solutions(fam(SequenceId::Perrin, Form::Williams, Kind::First), 2, 10, 100).unwrap();
        let keys: Vec<_> = sols.iter().map(|s| (s.b, s.n, s.l)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn invalid_ranges() {
        let f = fam(SequenceId::Padovan, Form::Thabit, Kind::First);
        assert!(matches!(enumerate_solutions(f, 5, 3, 10), Err(Error::Config(_))));
        assert!(matches!(enumerate_solutions(f, 1, 3, 10), Err(Error::Config(_))));
        assert!(matches!(verify_no_solutions_between(f, 2, 3, 10, 5), Err(Error::Config(_))));
    }

    #[test]
    fn gap_certificates() {
        for f in EquationFamily::all().into_iter().filter(|f| f.sequence == SequenceId::Padovan) {
            let cert = verify_no_solutions_between(f, 2, 10, 212, 300).unwrap();
            assert!(cert.is_empty());
            assert_eq!(cert.pairs_checked, 88 * 9);
        }
        for f in EquationFamily::all().into_iter().filter(|f| f.sequence == SequenceId::Perrin) {
            assert!(verify_no_solutions_between(f, 2, 10, 219, 350).unwrap().is_empty());
        }
        let f = fam(SequenceId::Narayana, Form::Thabit, Kind::Second);
        let empty = verify_no_solutions_between(f, 2, 10, 100, 100).unwrap();
        assert!(empty.is_empty() && empty.pairs_checked == 0);
        // A gap that does contain a solution reports it.
        let hit = verify_no_solutions_between(f, 2, 10, 20, 30).unwrap();
        assert_eq!(triples(&hit.counterexamples), vec![(22, 7, 3)]);
    }

    mod props {
        use super::*;
        use crate::sequences::term;
        use proptest::prelude::*;

        /// Brute force: walk l upward while the form stays below the value.
        fn oracle(value: &BigInt, b: u64, family: EquationFamily) -> Option<u32> {
            let mut l = 1u32;
            loop {
                let v = family.value(b, l);
                if &v == value {
                    return Some(l);
                }
                if &v > value {
                    return None;
                }
                l += 1;
            }
        }

        proptest! {
            #[test]
            fn decompose_matches_oracle(n in 0u64..400, b in 2u64..=10, which in 0usize..12) {
                let family = EquationFamily::all()[which];
                let value = term(family.sequence.spec(), n);
                prop_assert_eq!(
                    decompose(&value, b, family.base_sign, family.tail_sign),
                    oracle(&value, b, family)
                );
            }

            #[test]
            fn solutions_round_trip(which in 0usize..12, b in 2u64..=10) {
                let family = EquationFamily::all()[which];
                for s in enumerate_solutions(family, b, b, 200).unwrap() {
                    prop_assert_eq!(family.value(s.b, s.l), term(family.sequence.spec(), s.n));
                }
            }
        }
    }
}
