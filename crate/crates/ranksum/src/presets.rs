//! Built-in demonstration inputs shared by the CLI's `reproduce` command and
//! the test suite.

use crate::dist::JointDistribution;
use crate::kernels::OutcomeVector;
use crate::propriety::GroupedMixtureSpec;
use crate::rational::ratio;
use crate::theory::PairModel;

/// A four-outcome distribution on which ranking by the marginals is strictly
/// beaten under the AUC: the positive-count denominator of the AUC weights
/// reorders elements 3 and 4 relative to their marginals.
pub fn auc_counterexample() -> JointDistribution {
    let atom = |bits: &[u8], num: i64, den: i64| {
        (
            OutcomeVector::from_ints(bits).expect("static bits"),
            ratio(num, den),
        )
    };
    JointDistribution::new(
        4,
        vec![
            atom(&[1, 1, 0, 0], 1, 2),
            atom(&[0, 0, 1, 0], 7, 16),
            atom(&[0, 0, 0, 1], 1, 16),
        ],
    )
    .expect("static distribution is valid")
}

/// Two equally weighted candidate models ranking 100 outcomes, 10 of which
/// carry a distinguishing feature. The models disagree on which group is
/// more likely positive, so the marginal-induced group ranking loses in
/// expected AUC to its reverse.
pub fn two_model_grouped() -> GroupedMixtureSpec {
    GroupedMixtureSpec::new(
        vec![(10, "featured".into()), (90, "plain".into())],
        vec![
            (ratio(1, 2), vec![ratio(2, 5), ratio(1, 2)]),
            (ratio(1, 2), vec![ratio(19, 20), ratio(9, 10)]),
        ],
    )
    .expect("static spec is valid")
}

/// A binary-covariate sampling model with theoretical AUC 7/10 under the
/// identity map.
pub fn binary_pair_model() -> PairModel {
    PairModel::new(vec![
        ("1".into(), true, ratio(3, 10)),
        ("1".into(), false, ratio(1, 10)),
        ("0".into(), true, ratio(2, 10)),
        ("0".into(), false, ratio(4, 10)),
    ])
    .expect("static model is valid")
}
