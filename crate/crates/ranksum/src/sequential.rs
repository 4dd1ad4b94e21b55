//! The perfect-separation strategy for sequential ranking: before each
//! outcome is revealed, the pending index is slotted strictly between the
//! observed zeros and the observed ones. Whatever the outcome turns out to
//! be, separation survives, so the realized AUC of any sequence containing
//! both classes is exactly 1 — with no information about the process at all.

use num::rational::BigRational;

use crate::error::Result;
use crate::kernels::{auc_with_constant, OutcomeVector};
use crate::preorder::TotalPreorder;
use crate::rational::half;

/// State after `t` observed outcomes: the current ranking covers indices
/// `1..=t+1`, with index `t+1` pending in the gap between the observed
/// zeros and ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialState {
    outcomes: Vec<bool>,
    current: TotalPreorder,
}

impl Default for SequentialState {
    fn default() -> Self {
        Self::new()
    }
}

impl SequentialState {
    /// No observations yet; the first index stands alone.
    pub fn new() -> Self {
        SequentialState {
            outcomes: Vec::new(),
            current: TotalPreorder::single_class(1).expect("one index"),
        }
    }

    pub fn observed(&self) -> &[bool] {
        &self.outcomes
    }

    /// The ranking currently quoted, over `observed().len() + 1` indices.
    pub fn current(&self) -> &TotalPreorder {
        &self.current
    }

    /// Records the pending index's outcome and slots the next index into a
    /// fresh singleton class strictly above every observed zero and strictly
    /// below every observed one; with only zeros observed it goes on top,
    /// with only ones at the bottom. All previous relations are untouched.
    pub fn insert_next(&self, outcome: bool) -> SequentialState {
        let mut outcomes = self.outcomes.clone();
        outcomes.push(outcome);
        let next_index = outcomes.len(); // 0-based id of the new pending index

        let mut classes: Vec<Vec<usize>> = self.current.classes().to_vec();
        let lowest_one = classes.iter().position(|class| {
            class
                .iter()
                .any(|&member| member < outcomes.len() && outcomes[member])
        });
        let slot = lowest_one.unwrap_or(classes.len());
        classes.insert(slot, vec![next_index]);
        let current = TotalPreorder::from_classes(next_index + 1, classes)
            .expect("insertion preserves a valid partition");
        SequentialState { outcomes, current }
    }
}

/// Feeds the outcomes through the strategy one at a time and scores the last
/// quoted ranking. Returns that ranking (over exactly the observed indices)
/// together with its realized AUC: 1 whenever both classes appear, otherwise
/// the convention constant ½.
pub fn run_sequence(outcomes: &OutcomeVector) -> Result<(TotalPreorder, BigRational)> {
    run_sequence_with_constant(outcomes, &half())
}

/// As [`run_sequence`] with an explicit degenerate-outcome constant.
pub fn run_sequence_with_constant(
    outcomes: &OutcomeVector,
    degenerate: &BigRational,
) -> Result<(TotalPreorder, BigRational)> {
    let mut state = SequentialState::new();
    for &bit in outcomes.bits() {
        state = state.insert_next(bit);
    }
    // The ranking in force when the final outcome arrived: the current one
    // restricted to the observed indices (restriction equals the previous
    // step's quote by the compatibility invariant).
    let quoted = state.current().restrict_to_first(outcomes.len())?;
    let score = auc_with_constant(outcomes, &quoted, degenerate)?;
    Ok((quoted, score))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn y(bits: &[u8]) -> OutcomeVector {
        OutcomeVector::from_ints(bits).unwrap()
    }

    fn preorder(text: &str) -> TotalPreorder {
        TotalPreorder::parse(text).unwrap()
    }

    #[test]
    fn fresh_state_holds_the_first_index_alone() {
        let state = SequentialState::new();
        assert_eq!(state.current(), &preorder("[1]"));
        assert!(state.observed().is_empty());
    }

    #[test]
    fn insertion_examples() {
        let state = SequentialState::new().insert_next(false).insert_next(true);
        assert_eq!(state.current(), &preorder("[1][3][2]"));

        let state = SequentialState::new()
            .insert_next(false)
            .insert_next(false)
            .insert_next(true);
        // zeros keep their prior order; index 4 sits between them and the one
        assert_eq!(state.current(), &preorder("[1][2][4][3]"));
    }

    #[test]
    fn run_examples() {
        let (ranking, score) = run_sequence(&y(&[0, 1, 0, 1, 1])).unwrap();
        assert_eq!(score, ratio(1, 1));
        assert_eq!(ranking.n(), 5);

        let (_, degenerate) = run_sequence(&y(&[1, 1, 1])).unwrap();
        assert_eq!(degenerate, ratio(1, 2));
        let (_, custom) = run_sequence_with_constant(&y(&[1, 1, 1]), &ratio(1, 4)).unwrap();
        assert_eq!(custom, ratio(1, 4));
    }

    #[test]
    fn every_step_is_compatible_and_separating() {
        for length in 1..=8usize {
            for mask in 0..(1u32 << length) {
                let mut state = SequentialState::new();
                for t in 0..length {
                    let previous = state.current().clone();
                    state = state.insert_next((mask >> t) & 1 == 1);
                    // compatibility: restriction to the old indices equals
                    // the previous ranking
                    assert_eq!(
                        state.current().restrict_to_first(previous.n()).unwrap(),
                        previous
                    );
                    // separation: every observed one outranks every observed zero
                    let observed = state.observed();
                    for (i, &a) in observed.iter().enumerate() {
                        for (j, &b) in observed.iter().enumerate() {
                            if a && !b {
                                assert!(state.current().lt(j, i), "index {j} not below {i}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn realized_auc_is_one_for_every_mixed_sequence_up_to_8() {
        for length in 2..=8usize {
            for mask in 1..(1u32 << length) - 1 {
                let bits: Vec<u8> = (0..length).map(|i| ((mask >> i) & 1) as u8).collect();
                let (_, score) = run_sequence(&y(&bits)).unwrap();
                assert_eq!(score, ratio(1, 1), "sequence {bits:?}");
            }
        }
    }
}
