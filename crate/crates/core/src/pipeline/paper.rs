//! Published solution tables for `2 <= b <= 10`.

use serde::Serialize;

use crate::search::{EquationFamily, Form, Kind, Solution};
use crate::sequences::SequenceId;

pub const TABLE_B_MIN: u64 = 2;
pub const TABLE_B_MAX: u64 = 10;

/// Expected `(n, b, l)` triples, sorted.
pub fn expected_triples(family: EquationFamily) -> &'static [(u64, u64, u32)] {
    use Form::*;
    use Kind::*;
    use SequenceId::*;
    match (family.sequence, family.form(), family.kind()) {
        (Padovan, Thabit, First) => &[(7, 2, 1)],
        (Padovan, Thabit, Second) => &[(8, 2, 1), (12, 4, 1), (14, 3, 2), (15, 2, 4), (19, 5, 2)],
        (Padovan, Williams, First) => &[(0, 2, 1), (1, 2, 1), (2, 2, 1), (5, 2, 2), (7, 3, 1), (8, 2, 3)],
        (Padovan, Williams, Second) => &[
            (5, 2, 1),
            (7, 2, 2),
            (8, 3, 1),
            (9, 2, 3),
            (12, 5, 1),
            (15, 4, 2),
            (16, 2, 6),
            (26, 6, 3),
        ],
        (Perrin, Thabit, First) => &[(5, 2, 1), (6, 2, 1), (12, 5, 1)],
        (Perrin, Thabit, Second) => &[(7, 2, 1)],
        (Perrin, Williams, First) => &[(0, 2, 2), (3, 2, 2), (5, 3, 1), (6, 3, 1), (7, 2, 3), (10, 3, 2), (12, 6, 1)],
        (Perrin, Williams, Second) => &[(0, 2, 1), (3, 2, 1), (5, 2, 2), (6, 2, 2), (7, 3, 1), (10, 2, 4)],
        (Narayana, Thabit, First) => &[(9, 4, 1), (11, 6, 1)],
        (Narayana, Thabit, Second) => &[(8, 2, 2), (8, 3, 1), (22, 7, 3)],
        (Narayana, Williams, First) => &[(0, 2, 1), (1, 2, 1), (2, 2, 1), (4, 2, 2), (9, 5, 1), (11, 7, 1)],
        (Narayana, Williams, Second) => &[(4, 2, 1), (7, 2, 3), (8, 4, 1), (9, 3, 2), (14, 2, 7)],
    }
}

/// Comparison of found solutions against the table, restricted to the
/// overlap of the requested base range with `[2, 10]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaperCheck {
    pub family: EquationFamily,
    /// `false` when the requested range has no overlap with the table.
    pub covered: bool,
    pub missing: Vec<(u64, u64, u32)>,
    pub extra: Vec<(u64, u64, u32)>,
}

impl PaperCheck {
    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn compare(family: EquationFamily, b_min: u64, b_max: u64, found: &[Solution]) -> PaperCheck {
    let in_table = |b: u64| b >= b_min.max(TABLE_B_MIN) && b <= b_max.min(TABLE_B_MAX);
    let expected: Vec<_> = expected_triples(family)
        .iter()
        .copied()
        .filter(|&(_, b, _)| in_table(b))
        .collect();
    let got: Vec<_> = found
        .iter()
        .map(Solution::triple)
        .filter(|&(_, b, _)| in_table(b))
        .collect();
    PaperCheck {
        family,
        covered: b_min <= TABLE_B_MAX && b_max >= TABLE_B_MIN,
        missing: expected.iter().filter(|t| !got.contains(t)).copied().collect(),
        extra: got.iter().filter(|t| !expected.contains(t)).copied().collect(),
    }
}
