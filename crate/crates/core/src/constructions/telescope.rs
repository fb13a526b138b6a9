use alloc::vec::Vec;

use num_traits::Float;

use crate::functionals::{IterationSequence, SequenceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Parity {
    Even,
    Odd,
}

/// One application of the product combiner: the accumulated factor with
/// container `big_a` and resolution `a` absorbs factor `merged`.
///
/// Factor `j` of the long product is the covering number at resolution
/// `√R_j` with container `R_{j+1}` (primal) or `R_{j+1}/2` (dual).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Collapse {
    pub group: Parity,
    /// Index `j` of the accumulated resolution `√R_j` (or `√R_j/4`).
    pub j: usize,
    pub merged: usize,
    pub big_a: f64,
    pub a: f64,
    pub big_b: f64,
    pub b: f64,
    /// `A > a > 3B > 3b` with the factors' actual radii.
    pub hypothesis: bool,
    /// `(√R_j/4)/(R_{j−1}/2)`.
    pub ratio: f64,
    /// `ratio ≥ 3`.
    pub ratio_holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TelescopeSchedule {
    pub kind: SequenceKind,
    pub s: usize,
    pub collapses: Vec<Collapse>,
    pub hypothesis_failures: usize,
    pub ratio_failures: usize,
    /// Smallest `j` at which the ratio condition fails.
    pub first_failure: Option<usize>,
}

impl TelescopeSchedule {
    pub fn group(&self, parity: Parity) -> impl Iterator<Item = &Collapse> {
        self.collapses.iter().filter(move |c| c.group == parity)
    }

    /// Factor indices merged into each group's top factor, top first.
    pub fn index_pairs(&self, parity: Parity) -> Vec<(usize, usize)> {
        self.group(parity).map(|c| (c.j, c.merged)).collect()
    }
}

/// Splits the long product of a generated sequence into its even and odd
/// factors and collapses each group top-down, checking every step.
pub fn telescope_schedule(seq: &IterationSequence) -> TelescopeSchedule {
    let r = &seq.values;
    let s = seq.s;
    let container = |i: usize| match seq.kind {
        SequenceKind::Primal => r[i],
        SequenceKind::Dual => r[i] / 2.0,
    };
    let res = |i: usize| r[i].sqrt();
    let mut collapses = Vec::new();
    for (group, top) in [
        (Parity::Even, s.wrapping_sub(1)),
        (Parity::Odd, s.wrapping_sub(2)),
    ] {
        if s < 2 {
            break;
        }
        let big_a = container(top + 1);
        let mut j = top;
        while j >= 2 {
            let a = if j == top { res(j) } else { res(j) / 4.0 };
            let big_b = container(j - 1);
            let b = res(j - 2);
            let ratio = (res(j) / 4.0) / (r[j - 1] / 2.0);
            collapses.push(Collapse {
                group,
                j,
                merged: j - 2,
                big_a,
                a,
                big_b,
                b,
                hypothesis: big_a > a && a > 3.0 * big_b && big_b > b,
                ratio,
                ratio_holds: ratio >= 3.0,
            });
            j -= 2;
        }
    }
    let hypothesis_failures = collapses.iter().filter(|c| !c.hypothesis).count();
    let ratio_failures = collapses.iter().filter(|c| !c.ratio_holds).count();
    let first_failure = collapses
        .iter()
        .filter(|c| !c.ratio_holds)
        .map(|c| c.j)
        .min();
    TelescopeSchedule {
        kind: seq.kind,
        s,
        collapses,
        hypothesis_failures,
        ratio_failures,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{PaperConstants, dual_sequence, recurrence_terms};

    fn manual(kind: SequenceKind, values: Vec<f64>) -> IterationSequence {
        let s = values.len() - 1;
        IterationSequence {
            kind,
            values,
            s,
            diameter: 0.0,
        }
    }

    #[test]
    fn two_steps_have_nothing_to_collapse() {
        let seq = dual_sequence(&PaperConstants::default(), 50.0).unwrap();
        assert_eq!(seq.s, 2);
        let t = telescope_schedule(&seq);
        assert!(t.collapses.is_empty());
        assert_eq!(t.first_failure, None);
    }

    #[test]
    fn schedule_shape() {
        let seq = manual(
            SequenceKind::Primal,
            (0..9).map(|i| 10f64.powi(1 << i.min(8))).collect(),
        );
        let t = telescope_schedule(&seq);
        assert_eq!(t.index_pairs(Parity::Even), [(7, 5), (5, 3), (3, 1)]);
        assert_eq!(t.index_pairs(Parity::Odd), [(6, 4), (4, 2), (2, 0)]);
        let first = &t.collapses[0];
        assert_eq!(
            (first.big_a, first.a),
            (seq.values[8], seq.values[7].sqrt())
        );
        assert_eq!(t.collapses[1].a, seq.values[5].sqrt() / 4.0);
    }

    #[test]
    fn fast_growth_passes() {
        // R_j = 10^(3^j): √R_j/4 dwarfs R_{j−1}.
        let seq = manual(
            SequenceKind::Dual,
            (0..5).map(|i| 10f64.powi(3i32.pow(i))).collect(),
        );
        let t = telescope_schedule(&seq);
        assert_eq!(t.collapses.len(), 2);
        assert_eq!(t.ratio_failures, 0);
        assert_eq!(t.hypothesis_failures, 0);
    }

    #[test]
    fn small_start_reports_failures() {
        let terms = recurrence_terms(SequenceKind::Dual, &PaperConstants::default(), 100.0, 5);
        let seq = manual(SequenceKind::Dual, terms);
        let t = telescope_schedule(&seq);
        assert!(t.ratio_failures > 0);
        assert_eq!(t.first_failure, Some(2));
    }

    #[test]
    fn dual_from_a_million() {
        // The fourth term already overflows; the only collapse is at j = 2.
        let terms = recurrence_terms(SequenceKind::Dual, &PaperConstants::default(), 1e6, 7);
        assert_eq!(terms.len(), 4);
        let t = telescope_schedule(&manual(SequenceKind::Dual, terms));
        assert_eq!(t.index_pairs(Parity::Even), [(2, 0)]);
        assert_eq!(t.first_failure, Some(2));
        assert!(t.collapses[0].ratio < 0.01);
    }

    #[test]
    fn printed_ratio_matches_dual_hypothesis() {
        let values: Vec<f64> = (0..7).map(|i| 10f64.powf(1.2f64.powi(i) * 4.0)).collect();
        let t = telescope_schedule(&manual(SequenceKind::Dual, values));
        // Past the first step of each group, a = √R_j/4 and B = R_{j−1}/2.
        let later: Vec<&Collapse> = t.collapses.iter().filter(|c| c.j < t.s - 2).collect();
        assert!(!later.is_empty());
        for c in later {
            assert_eq!(c.a > 3.0 * c.big_b, c.ratio > 3.0, "j = {}", c.j);
        }
    }
}
