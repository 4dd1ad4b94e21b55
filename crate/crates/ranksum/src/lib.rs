//! Exact-arithmetic rank-sum scoring of binary-outcome forecasts.
//!
//! The crate scores total preorders (rankings with ties) against realized
//! 0/1 outcome vectors with the Wilcoxon–Mann–Whitney `u`, the empirical AUC
//! and the Gini coefficient, all in exact rational arithmetic, and decides
//! whether such a scoring function rewards honest forecasting on a given
//! finite-support joint distribution. Honest reports here are the total
//! preorders compatible with the distribution's marginal ordering; a scoring
//! function fails on a distribution when some other ranking attains a
//! strictly better expected score.
//!
//! Module map:
//! - [`preorder`]: total preorders, rank vectors, containment, enumeration;
//! - [`kernels`]: realized scores, ROC curves, marginal scoring rules;
//! - [`dist`]: finite-support joint distributions and exact expectations;
//! - [`propriety`]: propriety verdicts, sufficient-condition checks, the
//!   grouped-mixture closed form, and counterexample search;
//! - [`theory`]: theoretical AUC of a sampling model and its link to the
//!   expected empirical AUC;
//! - [`mapping`]: scoring of covariate-to-prediction mappings;
//! - [`sequential`]: the perfect-separation strategy in sequential ranking.

pub mod dist;
pub mod error;
pub mod kernels;
pub mod mapping;
pub mod preorder;
pub mod presets;
pub mod propriety;
pub mod rational;
pub mod sequential;
pub mod theory;

pub use error::{Error, Result};

#[cfg(test)]
mod concurrency_contract {
    //! Every value type is immutable after construction and moves freely
    //! across threads; enumeration streams are plain `Send + Sync` state
    //! machines.

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn shared_types_are_send_and_sync() {
        assert_send_sync::<crate::preorder::TotalPreorder>();
        assert_send_sync::<crate::preorder::RankVector>();
        assert_send_sync::<crate::preorder::Preorders>();
        assert_send_sync::<crate::preorder::ContainedSet>();
        assert_send_sync::<crate::kernels::OutcomeVector>();
        assert_send_sync::<crate::kernels::RocCurve>();
        assert_send_sync::<crate::kernels::WmwKernel>();
        assert_send_sync::<crate::kernels::AucKernel>();
        assert_send_sync::<crate::kernels::GiniKernel>();
        assert_send_sync::<crate::kernels::CustomKernel>();
        assert_send_sync::<crate::dist::JointDistribution>();
        assert_send_sync::<crate::dist::ProductDistribution>();
        assert_send_sync::<crate::dist::MixtureDistribution>();
        assert_send_sync::<crate::propriety::ProprietyCertificate>();
        assert_send_sync::<crate::propriety::GroupedMixtureSpec>();
        assert_send_sync::<crate::theory::PairModel>();
        assert_send_sync::<crate::theory::ScalarMap>();
        assert_send_sync::<crate::mapping::CovariateModel>();
        assert_send_sync::<crate::mapping::PredictionMapping>();
        assert_send_sync::<crate::sequential::SequentialState>();
    }
}
