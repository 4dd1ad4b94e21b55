//! Finite-support joint distributions on binary outcome vectors, with exact
//! expectation machinery for rank-sum kernels.
//!
//! Support is sparse: only positive-probability outcomes are listed. Product
//! and mixture forms expand to a sparse joint on demand, guarded by a cap,
//! so large instances stay in closed form.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{OutcomeVector, RankSumKernel};
use crate::preorder::{self, ContainedSet, TotalPreorder, DEFAULT_ENUMERATION_CAP};
use crate::rational::{format_rational, parse_rational};

/// Default bound on `n` for expanding product or mixture distributions into
/// an explicit 2^n-point support.
pub const DEFAULT_EXPANSION_CAP: usize = 20;

/// A distribution on `{0,1}^n` given by its positive-probability outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    n: usize,
    support: Vec<(OutcomeVector, BigRational)>,
}

impl JointDistribution {
    /// Validates that outcomes are distinct with matching length and that
    /// the strictly positive probabilities sum exactly to one. Sums that
    /// differ from one are rejected, never renormalized.
    pub fn new(n: usize, support: Vec<(OutcomeVector, BigRational)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("distribution needs n >= 1".into()));
        }
        if support.is_empty() {
            return Err(Error::InvalidInput(
                "distribution needs a non-empty support".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        let mut total = BigRational::zero();
        for (outcome, probability) in &support {
            if outcome.len() != n {
                return Err(Error::InvalidInput(format!(
                    "outcome length {} does not match n={n}",
                    outcome.len()
                )));
            }
            if *probability <= BigRational::zero() {
                return Err(Error::InvalidInput(format!(
                    "probability {} is not positive",
                    format_rational(probability)
                )));
            }
            if !seen.insert(outcome.clone()) {
                return Err(Error::InvalidInput(format!(
                    "outcome {:?} listed twice",
                    outcome.to_ints()
                )));
            }
            total += probability;
        }
        if total != BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {} instead of 1",
                format_rational(&total)
            )));
        }
        Ok(JointDistribution { n, support })
    }

    pub fn point_mass(outcome: OutcomeVector) -> Self {
        let n = outcome.len();
        JointDistribution {
            n,
            support: vec![(outcome, BigRational::one())],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(OutcomeVector, BigRational)] {
        &self.support
    }

    /// The marginal functional `M(P) = E[Y]`, exact.
    pub fn marginals(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.n];
        for (outcome, probability) in &self.support {
            for (i, &bit) in outcome.bits().iter().enumerate() {
                if bit {
                    out[i] += probability;
                }
            }
        }
        out
    }

    /// The exact rank functional `R(P)`: the preorder induced by the
    /// marginals.
    pub fn exact_rank(&self) -> TotalPreorder {
        TotalPreorder::induced_by(&self.marginals()).expect("n >= 1")
    }

    /// Pairwise characterization of the exact rank: compares
    /// `P[Y_i=1, Y_j=0]` with `P[Y_i=0, Y_j=1]`. `Less` means `i ≺ j`.
    pub fn pairwise_rank(&self, i: usize, j: usize) -> Result<Ordering> {
        if i >= self.n || j >= self.n {
            return Err(Error::InvalidInput(format!(
                "pair ({i}, {j}) out of range for n={}",
                self.n
            )));
        }
        if i == j {
            return Err(Error::InvalidInput(
                "pairwise rank needs two distinct indices".into(),
            ));
        }
        let mut i_over_j = BigRational::zero();
        let mut j_over_i = BigRational::zero();
        for (outcome, probability) in &self.support {
            match (outcome.get(i), outcome.get(j)) {
                (true, false) => i_over_j += probability,
                (false, true) => j_over_i += probability,
                _ => {}
            }
        }
        Ok(i_over_j.cmp(&j_over_i))
    }

    /// The weak rank functional `R*(P)`: all preorders contained in the
    /// exact rank, streamed under the default cap.
    pub fn weak_rank_members(&self) -> Result<ContainedSet> {
        preorder::contained_set(&self.exact_rank())
    }

    /// As [`JointDistribution::weak_rank_members`] with an explicit cap.
    pub fn weak_rank_members_capped(&self, cap: usize) -> Result<ContainedSet> {
        preorder::contained_set_capped(&self.exact_rank(), cap)
    }

    /// `E[σ(Y)]` for a kernel's weight functions, by linearity over the
    /// support.
    pub fn expected_weights(&self, kernel: &dyn RankSumKernel) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.n];
        for (outcome, probability) in &self.support {
            for (slot, w) in out.iter_mut().zip(kernel.weights(outcome)) {
                *slot += w * probability;
            }
        }
        out
    }

    /// `E[g(Y)]` for a kernel's offset.
    pub fn expected_offset(&self, kernel: &dyn RankSumKernel) -> BigRational {
        let mut total = BigRational::zero();
        for (outcome, probability) in &self.support {
            total += kernel.offset(outcome) * probability;
        }
        total
    }

    /// Expected kernel score of quoting `p`, via linearity of expectation:
    /// `E[g(Y)] + Σ E[σ_i(Y)] ρ_i(p)`.
    pub fn expected_score(
        &self,
        kernel: &dyn RankSumKernel,
        p: &TotalPreorder,
    ) -> Result<BigRational> {
        if p.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "preorder size {} does not match n={}",
                p.n(),
                self.n
            )));
        }
        let rho = p.rank_vector();
        let mut total = self.expected_offset(kernel);
        for (w, &r) in self.expected_weights(kernel).iter().zip(rho.values()) {
            total += w * BigRational::from_integer(BigInt::from(r));
        }
        Ok(total)
    }

    /// Expected score by direct support enumeration `Σ p(y) s(y, p)`; same
    /// value as [`JointDistribution::expected_score`] by a different route,
    /// kept for cross-checking.
    pub fn expected_score_direct(
        &self,
        kernel: &dyn RankSumKernel,
        p: &TotalPreorder,
    ) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (outcome, probability) in &self.support {
            total += kernel.score(outcome, p)? * probability;
        }
        Ok(total)
    }

    /// The expected-score maximizers: the preorder induced by `E[σ(Y)]`
    /// together with the stream of everything contained in it, each of which
    /// attains the same maximal expected score.
    pub fn optimal_preorders(
        &self,
        kernel: &dyn RankSumKernel,
    ) -> Result<(TotalPreorder, ContainedSet)> {
        self.optimal_preorders_capped(kernel, DEFAULT_ENUMERATION_CAP)
    }

    /// As [`JointDistribution::optimal_preorders`] with an explicit cap.
    pub fn optimal_preorders_capped(
        &self,
        kernel: &dyn RankSumKernel,
        cap: usize,
    ) -> Result<(TotalPreorder, ContainedSet)> {
        let induced = TotalPreorder::induced_by(&self.expected_weights(kernel))?;
        let members = preorder::contained_set_capped(&induced, cap)?;
        Ok((induced, members))
    }
}

/// Mutually independent coordinates given by their marginal probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDistribution {
    probs: Vec<BigRational>,
}

impl ProductDistribution {
    pub fn new(probs: Vec<BigRational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput(
                "product distribution needs n >= 1".into(),
            ));
        }
        for (i, p) in probs.iter().enumerate() {
            if !crate::rational::is_probability(p) {
                return Err(Error::InvalidInput(format!(
                    "marginal {i} = {} is outside [0, 1]",
                    format_rational(p)
                )));
            }
        }
        Ok(ProductDistribution { probs })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn marginals(&self) -> &[BigRational] {
        &self.probs
    }

    /// Expands to the sparse joint over all positive-probability outcomes.
    pub fn expand(&self) -> Result<JointDistribution> {
        self.expand_capped(DEFAULT_EXPANSION_CAP)
    }

    pub fn expand_capped(&self, cap: usize) -> Result<JointDistribution> {
        let n = self.n();
        if n > cap || n >= usize::BITS as usize {
            return Err(Error::ResourceLimit { requested: n, cap });
        }
        let mut support = Vec::new();
        for mask in 0usize..(1 << n) {
            let mut probability = BigRational::one();
            let mut bits = Vec::with_capacity(n);
            for (i, p) in self.probs.iter().enumerate() {
                let bit = (mask >> i) & 1 == 1;
                bits.push(bit);
                probability *= if bit {
                    p.clone()
                } else {
                    BigRational::one() - p
                };
                if probability.is_zero() {
                    break;
                }
            }
            if !probability.is_zero() {
                support.push((OutcomeVector::new(bits).expect("n >= 1"), probability));
            }
        }
        JointDistribution::new(n, support)
    }
}

/// A finite mixture of product distributions (a latent model selector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixtureDistribution {
    components: Vec<(BigRational, ProductDistribution)>,
}

impl MixtureDistribution {
    pub fn new(components: Vec<(BigRational, ProductDistribution)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput(
                "mixture needs at least one component".into(),
            ));
        }
        let n = components[0].1.n();
        let mut total = BigRational::zero();
        for (weight, component) in &components {
            if *weight <= BigRational::zero() {
                return Err(Error::InvalidInput(format!(
                    "mixture weight {} is not positive",
                    format_rational(weight)
                )));
            }
            if component.n() != n {
                return Err(Error::InvalidInput(
                    "mixture components differ in length".into(),
                ));
            }
            total += weight;
        }
        if total != BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "mixture weights sum to {} instead of 1",
                format_rational(&total)
            )));
        }
        Ok(MixtureDistribution { components })
    }

    pub fn n(&self) -> usize {
        self.components[0].1.n()
    }

    pub fn components(&self) -> &[(BigRational, ProductDistribution)] {
        &self.components
    }

    /// Weight-averaged component marginals.
    pub fn marginals(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.n()];
        for (weight, component) in &self.components {
            for (slot, p) in out.iter_mut().zip(component.marginals()) {
                *slot += weight * p;
            }
        }
        out
    }

    pub fn expand(&self) -> Result<JointDistribution> {
        self.expand_capped(DEFAULT_EXPANSION_CAP)
    }

    /// Merges expanded components atom by atom.
    pub fn expand_capped(&self, cap: usize) -> Result<JointDistribution> {
        let mut merged: BTreeMap<Vec<bool>, BigRational> = BTreeMap::new();
        for (weight, component) in &self.components {
            let joint = component.expand_capped(cap)?;
            for (outcome, probability) in joint.support() {
                *merged
                    .entry(outcome.bits().to_vec())
                    .or_insert_with(BigRational::zero) += weight * probability;
            }
        }
        let support = merged
            .into_iter()
            .map(|(bits, p)| (OutcomeVector::new(bits).expect("n >= 1"), p))
            .collect();
        JointDistribution::new(self.n(), support)
    }
}

/// Any of the three distribution file forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistributionSpec {
    Joint(JointDistribution),
    Product(ProductDistribution),
    Mixture(MixtureDistribution),
}

impl DistributionSpec {
    /// Expands product and mixture forms so every spec can be checked as an
    /// explicit joint.
    pub fn to_joint(&self, expansion_cap: usize) -> Result<JointDistribution> {
        match self {
            DistributionSpec::Joint(j) => Ok(j.clone()),
            DistributionSpec::Product(p) => p.expand_capped(expansion_cap),
            DistributionSpec::Mixture(m) => m.expand_capped(expansion_cap),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: DistributionFileDto = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("distribution JSON: {e}")))?;
        dto.try_into()
    }

    pub fn to_json(&self) -> String {
        let dto = DistributionFileDto::from(self);
        serde_json::to_string_pretty(&dto).expect("DTO serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum DistributionFileDto {
    Joint {
        n: usize,
        support: Vec<SupportAtomDto>,
    },
    Product {
        product: Vec<String>,
    },
    Mixture {
        mixture: Vec<MixtureComponentDto>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct SupportAtomDto {
    y: Vec<u8>,
    p: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct MixtureComponentDto {
    w: String,
    product: Vec<String>,
}

impl TryFrom<DistributionFileDto> for DistributionSpec {
    type Error = Error;

    fn try_from(dto: DistributionFileDto) -> Result<Self> {
        match dto {
            DistributionFileDto::Joint { n, support } => {
                let support = support
                    .into_iter()
                    .map(|atom| Ok((OutcomeVector::from_ints(&atom.y)?, parse_rational(&atom.p)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DistributionSpec::Joint(JointDistribution::new(n, support)?))
            }
            DistributionFileDto::Product { product } => {
                let probs = product
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DistributionSpec::Product(ProductDistribution::new(probs)?))
            }
            DistributionFileDto::Mixture { mixture } => {
                let components = mixture
                    .into_iter()
                    .map(|c| {
                        let weight = parse_rational(&c.w)?;
                        let probs = c
                            .product
                            .iter()
                            .map(|s| parse_rational(s))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((weight, ProductDistribution::new(probs)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(DistributionSpec::Mixture(MixtureDistribution::new(
                    components,
                )?))
            }
        }
    }
}

impl From<&DistributionSpec> for DistributionFileDto {
    fn from(spec: &DistributionSpec) -> Self {
        match spec {
            DistributionSpec::Joint(j) => DistributionFileDto::Joint {
                n: j.n(),
                support: j
                    .support()
                    .iter()
                    .map(|(y, p)| SupportAtomDto {
                        y: y.to_ints(),
                        p: format_rational(p),
                    })
                    .collect(),
            },
            DistributionSpec::Product(p) => DistributionFileDto::Product {
                product: p.marginals().iter().map(format_rational).collect(),
            },
            DistributionSpec::Mixture(m) => DistributionFileDto::Mixture {
                mixture: m
                    .components()
                    .iter()
                    .map(|(w, p)| MixtureComponentDto {
                        w: format_rational(w),
                        product: p.marginals().iter().map(format_rational).collect(),
                    })
                    .collect(),
            },
        }
    }
}
