//! Propriety verdicts for rank-sum kernels on finite distributions, the
//! sufficient-condition checks (known positive count, mutual independence,
//! latent mixtures), the grouped-mixture closed form, and seeded random
//! counterexample search.
//!
//! The fast verdict rests on the maximizer characterization: the expected
//! score of quoting `≼` is `E[g(Y)] + Σ E[σ_i(Y)] ρ_i(≼)`, maximized exactly
//! by the preorders contained in the one induced by `E[σ(Y)]`. The kernel is
//! proper on a distribution when that induced preorder is itself contained
//! in the marginal-induced exact rank, so that every maximizer is an honest
//! report. A brute-force route over all preorders cross-checks the verdict
//! on demand.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{JointDistribution, MixtureDistribution, ProductDistribution};
use crate::error::{Error, Result};
use crate::kernels::{alpha, AucKernel, OutcomeVector, RankSumKernel};
use crate::preorder::{self, TotalPreorder, DEFAULT_ENUMERATION_CAP};
use crate::rational::{format_rational, half, parse_rational, ratio};

/// Outcome of a propriety check on one distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every expected-score maximizer is an honest report.
    ProperHere,
    /// Some maximizer falls outside the honest set; quoting it never scores
    /// worse than honesty and, in the strict case, scores better.
    Improper,
}

/// One side of a certificate: a quoted preorder with its exact expected
/// score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredPreorder {
    pub preorder: TotalPreorder,
    pub score: BigRational,
}

/// Verdict for a `(distribution, kernel)` pair. When improper, `witness` is
/// the honest exact-rank report and `beating` a maximizer outside the honest
/// set; the beating score strictly exceeds the witness score whenever a
/// strict gain exists, and otherwise ties it with the beating preorder still
/// dishonest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProprietyCertificate {
    pub kernel: String,
    pub distribution: JointDistribution,
    pub verdict: Verdict,
    pub witness: ScoredPreorder,
    pub beating: Option<ScoredPreorder>,
}

impl ProprietyCertificate {
    pub fn is_proper(&self) -> bool {
        self.verdict == Verdict::ProperHere
    }

    pub fn to_json(&self) -> String {
        let dto = CertificateDto::from(self);
        serde_json::to_string_pretty(&dto).expect("DTO serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: CertificateDto = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("certificate JSON: {e}")))?;
        dto.try_into()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CertificateDto {
    kernel: String,
    distribution: serde_json::Value,
    verdict: String,
    witness: ScoredPreorderDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    beating: Option<ScoredPreorderDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScoredPreorderDto {
    preorder: String,
    score: String,
}

impl From<&ProprietyCertificate> for CertificateDto {
    fn from(cert: &ProprietyCertificate) -> Self {
        let spec = crate::dist::DistributionSpec::Joint(cert.distribution.clone());
        let side = |s: &ScoredPreorder| ScoredPreorderDto {
            preorder: s.preorder.to_string(),
            score: format_rational(&s.score),
        };
        CertificateDto {
            kernel: cert.kernel.clone(),
            distribution: serde_json::from_str(&spec.to_json()).expect("valid JSON"),
            verdict: match cert.verdict {
                Verdict::ProperHere => "proper-here".into(),
                Verdict::Improper => "improper".into(),
            },
            witness: side(&cert.witness),
            beating: cert.beating.as_ref().map(side),
        }
    }
}

impl TryFrom<CertificateDto> for ProprietyCertificate {
    type Error = Error;

    fn try_from(dto: CertificateDto) -> Result<Self> {
        let spec = crate::dist::DistributionSpec::from_json(&dto.distribution.to_string())?;
        let crate::dist::DistributionSpec::Joint(distribution) = spec else {
            return Err(Error::Parse(
                "certificate distribution must be the joint form".into(),
            ));
        };
        let verdict = match dto.verdict.as_str() {
            "proper-here" => Verdict::ProperHere,
            "improper" => Verdict::Improper,
            other => return Err(Error::Parse(format!("unknown verdict {other:?}"))),
        };
        let side = |s: &ScoredPreorderDto| -> Result<ScoredPreorder> {
            Ok(ScoredPreorder {
                preorder: TotalPreorder::parse(&s.preorder)?,
                score: parse_rational(&s.score)?,
            })
        };
        Ok(ProprietyCertificate {
            kernel: dto.kernel,
            distribution,
            verdict,
            witness: side(&dto.witness)?,
            beating: dto.beating.as_ref().map(side).transpose()?,
        })
    }
}

/// Fast-path propriety check: proper exactly when the preorder induced by
/// `E[σ(Y)]` is contained in the exact rank. Never enumerates the preorder
/// space.
pub fn check_propriety(
    distribution: &JointDistribution,
    kernel: &dyn RankSumKernel,
) -> ProprietyCertificate {
    let induced = TotalPreorder::induced_by(&distribution.expected_weights(kernel))
        .expect("distribution has n >= 1");
    let exact = distribution.exact_rank();
    let proper = induced.is_contained_in(&exact).expect("matching sizes");
    let score_of = |p: &TotalPreorder| {
        distribution
            .expected_score(kernel, p)
            .expect("matching sizes")
    };
    if proper {
        ProprietyCertificate {
            kernel: kernel.name().to_string(),
            distribution: distribution.clone(),
            verdict: Verdict::ProperHere,
            witness: ScoredPreorder {
                score: score_of(&induced),
                preorder: induced,
            },
            beating: None,
        }
    } else {
        ProprietyCertificate {
            kernel: kernel.name().to_string(),
            distribution: distribution.clone(),
            verdict: Verdict::Improper,
            witness: ScoredPreorder {
                score: score_of(&exact),
                preorder: exact,
            },
            beating: Some(ScoredPreorder {
                score: score_of(&induced),
                preorder: induced,
            }),
        }
    }
}

/// The exact set of expected-score maximizers, found by scoring every
/// preorder on `n` indices through direct support enumeration.
pub fn brute_force_optimal_set(
    distribution: &JointDistribution,
    kernel: &dyn RankSumKernel,
    cap: usize,
) -> Result<Vec<TotalPreorder>> {
    // Per-atom (g, σ) pairs are fixed across candidates; only ρ varies.
    let atoms: Vec<(BigRational, Vec<BigRational>, BigRational)> = distribution
        .support()
        .iter()
        .map(|(y, p)| (kernel.offset(y) * p, kernel.weights(y), p.clone()))
        .collect();
    let mut best: Option<BigRational> = None;
    let mut argmax: Vec<(TotalPreorder, BigRational)> = Vec::new();
    for candidate in preorder::enumerate_preorders_capped(distribution.n(), cap)? {
        let rho = candidate.rank_vector();
        let mut score = BigRational::zero();
        for (offset_term, weights, probability) in &atoms {
            let mut inner = BigRational::zero();
            for (w, &r) in weights.iter().zip(rho.values()) {
                inner += w * BigRational::from_integer(BigInt::from(r));
            }
            score += offset_term + inner * probability;
        }
        match &best {
            Some(b) if score < *b => {}
            Some(b) if score == *b => argmax.push((candidate, score)),
            _ => {
                best = Some(score.clone());
                argmax.retain(|(_, s)| *s == score);
                argmax.push((candidate, score));
            }
        }
    }
    Ok(argmax.into_iter().map(|(p, _)| p).collect())
}

/// Brute-force propriety check over the whole preorder space: the verdict is
/// proper exactly when every maximizer is contained in the exact rank. Used
/// to cross-check [`check_propriety`].
pub fn check_propriety_brute(
    distribution: &JointDistribution,
    kernel: &dyn RankSumKernel,
    cap: usize,
) -> Result<ProprietyCertificate> {
    let maximizers = brute_force_optimal_set(distribution, kernel, cap)?;
    let exact = distribution.exact_rank();
    let dishonest = maximizers
        .iter()
        .find(|m| !m.is_contained_in(&exact).expect("matching sizes"))
        .cloned();
    let score_of = |p: &TotalPreorder| {
        distribution
            .expected_score_direct(kernel, p)
            .expect("matching sizes")
    };
    Ok(match dishonest {
        None => ProprietyCertificate {
            kernel: kernel.name().to_string(),
            distribution: distribution.clone(),
            verdict: Verdict::ProperHere,
            witness: ScoredPreorder {
                score: score_of(&maximizers[0]),
                preorder: maximizers[0].clone(),
            },
            beating: None,
        },
        Some(beat) => ProprietyCertificate {
            kernel: kernel.name().to_string(),
            distribution: distribution.clone(),
            verdict: Verdict::Improper,
            witness: ScoredPreorder {
                score: score_of(&exact),
                preorder: exact,
            },
            beating: Some(ScoredPreorder {
                score: score_of(&beat),
                preorder: beat,
            }),
        },
    })
}

/// Checks AUC propriety on a distribution whose positive count is almost
/// surely constant; the count must actually be constant over the support or
/// the call fails with a precondition error.
pub fn verify_known_count(distribution: &JointDistribution, kernel: &AucKernel) -> Result<bool> {
    let mut counts = distribution.support().iter().map(|(y, _)| y.positives());
    let first = counts.next().expect("non-empty support");
    if let Some(other) = counts.find(|&c| c != first) {
        return Err(Error::Precondition(format!(
            "positive count varies over the support ({first} vs {other})"
        )));
    }
    Ok(check_propriety(distribution, kernel).is_proper())
}

/// Checks AUC propriety for mutually independent coordinates: the preorder
/// induced by `E[α(Y)]` must equal the exact rank, and the pairwise identity
/// `E[α_i] − E[α_j] = (E[Y_i] − E[Y_j]) · E[1/((1+n₀^¬ij)(1+n₁^¬ij))]`
/// must hold exactly for every pair.
pub fn verify_independence(
    product: &ProductDistribution,
    kernel: &AucKernel,
    expansion_cap: usize,
) -> Result<bool> {
    let joint = product.expand_capped(expansion_cap)?;
    let sigma_order = TotalPreorder::induced_by(&joint.expected_weights(kernel))?;
    if sigma_order != joint.exact_rank() {
        return Ok(false);
    }

    let n = joint.n();
    let expected_alpha: Vec<BigRational> = {
        let mut out = vec![BigRational::zero(); n];
        for (y, p) in joint.support() {
            for (slot, a) in out.iter_mut().zip(alpha(y)) {
                *slot += a * p;
            }
        }
        out
    };
    let marginals = joint.marginals();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut pair_factor = BigRational::zero();
            for (y, p) in joint.support() {
                let others_pos = y
                    .bits()
                    .iter()
                    .enumerate()
                    .filter(|&(k, &b)| k != i && k != j && b)
                    .count() as i64;
                let others_neg = (n as i64 - 2) - others_pos;
                pair_factor += p * ratio(1, (1 + others_neg) * (1 + others_pos));
            }
            let lhs = &expected_alpha[i] - &expected_alpha[j];
            let rhs = (&marginals[i] - &marginals[j]) * pair_factor;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-component alignment report for a latent mixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatentReport {
    /// Condition (i): within each component, `E[Y]` and `E[α(Y)]` induce the
    /// same preorder.
    pub component_alignment: bool,
    /// Condition (ii): that preorder is the same across components.
    pub shared_ordering: bool,
    /// Verdict of the full mixture under the kernel.
    pub proper_here: bool,
}

impl LatentReport {
    pub fn conditions_hold(&self) -> bool {
        self.component_alignment && self.shared_ordering
    }
}

/// Evaluates the latent-variable sufficient conditions on a finite mixture
/// of product components and the actual propriety of the mixture.
pub fn verify_latent(
    mixture: &MixtureDistribution,
    kernel: &AucKernel,
    expansion_cap: usize,
) -> Result<LatentReport> {
    let mut component_alignment = true;
    let mut shared_ordering = true;
    let mut first_order: Option<TotalPreorder> = None;
    for (_, component) in mixture.components() {
        let joint = component.expand_capped(expansion_cap)?;
        let by_marginals = TotalPreorder::induced_by(component.marginals())?;
        let by_alpha = TotalPreorder::induced_by(&joint.expected_weights(kernel))?;
        if by_marginals != by_alpha {
            component_alignment = false;
        }
        match &first_order {
            None => first_order = Some(by_marginals),
            Some(seen) => {
                if *seen != by_marginals {
                    shared_ordering = false;
                }
            }
        }
    }
    let proper_here = check_propriety(&mixture.expand_capped(expansion_cap)?, kernel).is_proper();
    Ok(LatentReport {
        component_alignment,
        shared_ordering,
        proper_here,
    })
}

/// Groups of exchangeable elements under a finite set of candidate models:
/// within a component, outcomes are independent with one success probability
/// per group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedMixtureSpec {
    groups: Vec<(usize, String)>,
    components: Vec<(BigRational, Vec<BigRational>)>,
}

impl GroupedMixtureSpec {
    pub fn new(
        groups: Vec<(usize, String)>,
        components: Vec<(BigRational, Vec<BigRational>)>,
    ) -> Result<Self> {
        if groups.is_empty() || components.is_empty() {
            return Err(Error::InvalidInput(
                "grouped spec needs groups and components".into(),
            ));
        }
        for (size, label) in &groups {
            if *size == 0 {
                return Err(Error::InvalidInput(format!("group {label:?} is empty")));
            }
        }
        let mut total = BigRational::zero();
        for (weight, probs) in &components {
            if *weight <= BigRational::zero() {
                return Err(Error::InvalidInput(
                    "component weight must be positive".into(),
                ));
            }
            if probs.len() != groups.len() {
                return Err(Error::InvalidInput(format!(
                    "component has {} probabilities for {} groups",
                    probs.len(),
                    groups.len()
                )));
            }
            for p in probs {
                if !crate::rational::is_probability(p) {
                    return Err(Error::InvalidInput(format!(
                        "group probability {} is outside [0, 1]",
                        format_rational(p)
                    )));
                }
            }
            total += weight;
        }
        if total != BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "component weights sum to {} instead of 1",
                format_rational(&total)
            )));
        }
        Ok(GroupedMixtureSpec { groups, components })
    }

    pub fn groups(&self) -> &[(usize, String)] {
        &self.groups
    }

    pub fn components(&self) -> &[(BigRational, Vec<BigRational>)] {
        &self.components
    }

    pub fn total_n(&self) -> usize {
        self.groups.iter().map(|(size, _)| size).sum()
    }

    /// Mixture marginal success probability per group.
    pub fn group_marginals(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.groups.len()];
        for (weight, probs) in &self.components {
            for (slot, p) in out.iter_mut().zip(probs) {
                *slot += weight * p;
            }
        }
        out
    }

    /// The element-level preorder realizing a group ranking: members of a
    /// group are tied, groups ordered (or tied) as in `group_order`.
    pub fn member_preorder(&self, group_order: &TotalPreorder) -> Result<TotalPreorder> {
        if group_order.n() != self.groups.len() {
            return Err(Error::InvalidInput(format!(
                "group order ranks {} groups but the spec has {}",
                group_order.n(),
                self.groups.len()
            )));
        }
        let mut starts = Vec::with_capacity(self.groups.len());
        let mut next = 0usize;
        for (size, _) in &self.groups {
            starts.push(next);
            next += size;
        }
        let classes: Vec<Vec<usize>> = group_order
            .classes()
            .iter()
            .map(|group_class| {
                group_class
                    .iter()
                    .flat_map(|&g| {
                        let (size, _) = self.groups[g];
                        starts[g]..starts[g] + size
                    })
                    .collect()
            })
            .collect();
        TotalPreorder::from_classes(self.total_n(), classes)
    }

    /// Exact expected AUC of a group ranking, by conditioning on the
    /// component and then on the per-group positive counts: given counts,
    /// the AUC of a group-tied preorder depends only on the counts, so the
    /// expectation reduces to a product of binomial sums instead of a 2^n
    /// enumeration.
    pub fn expected_auc(
        &self,
        group_order: &TotalPreorder,
        degenerate: &BigRational,
    ) -> Result<BigRational> {
        if group_order.n() != self.groups.len() {
            return Err(Error::InvalidInput(format!(
                "group order ranks {} groups but the spec has {}",
                group_order.n(),
                self.groups.len()
            )));
        }
        let sizes: Vec<usize> = self.groups.iter().map(|(size, _)| *size).collect();
        let total: usize = sizes.iter().sum();
        let g = sizes.len();

        // Pair weight between a negative in group a and a positive in group b.
        let pair_weight = |a: usize, b: usize| -> BigRational {
            if group_order.lt(a, b) {
                BigRational::one()
            } else if group_order.tied(a, b) {
                half()
            } else {
                BigRational::zero()
            }
        };

        let mut expectation = BigRational::zero();
        for (weight, probs) in &self.components {
            let pmfs: Vec<Vec<BigRational>> = sizes
                .iter()
                .zip(probs)
                .map(|(&m, q)| binomial_pmf(m, q))
                .collect();
            // Odometer over per-group positive counts.
            let mut counts = vec![0usize; g];
            loop {
                let mut probability = weight.clone();
                for (pmf, &k) in pmfs.iter().zip(&counts) {
                    probability *= &pmf[k];
                }
                if !probability.is_zero() {
                    let positives: usize = counts.iter().sum();
                    let value = if positives == 0 || positives == total {
                        degenerate.clone()
                    } else {
                        let mut u = BigRational::zero();
                        for a in 0..g {
                            let negs_a = (sizes[a] - counts[a]) as i64;
                            if negs_a == 0 {
                                continue;
                            }
                            for (b, &count_b) in counts.iter().enumerate() {
                                let pos_b = count_b as i64;
                                if pos_b == 0 {
                                    continue;
                                }
                                u += pair_weight(a, b) * ratio(negs_a * pos_b, 1);
                            }
                        }
                        u / ratio((total - positives) as i64 * positives as i64, 1)
                    };
                    expectation += probability * value;
                }
                // advance counts
                let mut slot = 0usize;
                loop {
                    if slot == g {
                        break;
                    }
                    counts[slot] += 1;
                    if counts[slot] <= sizes[slot] {
                        break;
                    }
                    counts[slot] = 0;
                    slot += 1;
                }
                if slot == g {
                    break;
                }
            }
        }
        Ok(expectation)
    }

    /// The spec as an explicit mixture of per-element products, for
    /// brute-force cross-checking at small sizes.
    pub fn to_mixture(&self) -> Result<MixtureDistribution> {
        let components = self
            .components
            .iter()
            .map(|(weight, probs)| {
                let element_probs: Vec<BigRational> = self
                    .groups
                    .iter()
                    .zip(probs)
                    .flat_map(|((size, _), q)| std::iter::repeat_n(q.clone(), *size))
                    .collect();
                Ok((weight.clone(), ProductDistribution::new(element_probs)?))
            })
            .collect::<Result<Vec<_>>>()?;
        MixtureDistribution::new(components)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: GroupedSpecDto = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("grouped spec JSON: {e}")))?;
        let groups = dto.groups.into_iter().map(|g| (g.size, g.label)).collect();
        let components = dto
            .components
            .into_iter()
            .map(|c| {
                let weight = parse_rational(&c.w)?;
                let probs =
                    c.p.iter()
                        .map(|s| parse_rational(s))
                        .collect::<Result<Vec<_>>>()?;
                Ok((weight, probs))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups, components)
    }

    pub fn to_json(&self) -> String {
        let dto = GroupedSpecDto {
            groups: self
                .groups
                .iter()
                .map(|(size, label)| GroupDto {
                    size: *size,
                    label: label.clone(),
                })
                .collect(),
            components: self
                .components
                .iter()
                .map(|(w, p)| ComponentDto {
                    w: format_rational(w),
                    p: p.iter().map(format_rational).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("DTO serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupedSpecDto {
    groups: Vec<GroupDto>,
    components: Vec<ComponentDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupDto {
    size: usize,
    label: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComponentDto {
    w: String,
    p: Vec<String>,
}

/// Binomial(m, q) probabilities for k = 0..=m, exact.
fn binomial_pmf(m: usize, q: &BigRational) -> Vec<BigRational> {
    let complement = BigRational::one() - q;
    let mut choose = BigInt::one();
    let mut out = Vec::with_capacity(m + 1);
    for k in 0..=m {
        if k > 0 {
            choose = &choose * BigInt::from(m - k + 1) / BigInt::from(k);
        }
        let term = BigRational::from_integer(choose.clone())
            * num::pow::pow(q.clone(), k)
            * num::pow::pow(complement.clone(), m - k);
        out.push(term);
    }
    out
}

/// Draws a sparse random distribution biased toward small supports with
/// heterogeneous positive counts, the regime where AUC improperness arises.
pub fn random_sparse_joint(n: usize, rng: &mut impl Rng) -> JointDistribution {
    let max_size = (1usize << n).min(5);
    let size = (2 + rng.gen_range(0..=1) + rng.gen_range(0..=1)).min(max_size);
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    let mut used_counts = std::collections::HashSet::new();
    while chosen.len() < size {
        let mut mask = rng.gen_range(0..(1usize << n));
        // Prefer outcomes whose positive count is new to this support.
        for _ in 0..8 {
            if !chosen.contains(&mask) && !used_counts.contains(&mask.count_ones()) {
                break;
            }
            mask = rng.gen_range(0..(1usize << n));
        }
        if chosen.contains(&mask) {
            continue;
        }
        used_counts.insert(mask.count_ones());
        chosen.push(mask);
    }
    let weights: Vec<i64> = (0..size).map(|_| rng.gen_range(1..=16)).collect();
    let total: i64 = weights.iter().sum();
    let support = chosen
        .into_iter()
        .zip(weights)
        .map(|(mask, w)| {
            let bits: Vec<bool> = (0..n).map(|i| (mask >> i) & 1 == 1).collect();
            (OutcomeVector::new(bits).expect("n >= 1"), ratio(w, total))
        })
        .collect();
    JointDistribution::new(n, support).expect("weights sum to one")
}

/// Runs [`check_propriety`] over a pool of distributions and keeps only the
/// improper certificates.
pub fn scan_pool<'k, I>(
    kernel: &'k dyn RankSumKernel,
    pool: I,
) -> impl Iterator<Item = ProprietyCertificate> + 'k
where
    I: IntoIterator<Item = JointDistribution>,
    I::IntoIter: 'k,
{
    pool.into_iter().filter_map(move |distribution| {
        let certificate = check_propriety(&distribution, kernel);
        (!certificate.is_proper()).then_some(certificate)
    })
}

/// The random distribution pool behind the counterexample search: `budget`
/// sparse joints on `n` indices, each trial drawn from its own seed-derived
/// stream so results are reproducible and trials can run in any order.
pub fn random_pool(n: usize, budget: u64, seed: u64) -> impl Iterator<Item = JointDistribution> {
    (0..budget).map(move |trial| random_trial_distribution(n, seed, trial))
}

/// The distribution examined by one search trial.
pub fn random_trial_distribution(n: usize, seed: u64, trial: u64) -> JointDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    random_sparse_joint(n, &mut rng)
}

/// Seeded random search for distributions on which the kernel is improper;
/// yields one certificate per improper trial and nothing else.
pub fn search_counterexamples<'k>(
    kernel: &'k dyn RankSumKernel,
    n: usize,
    budget: u64,
    seed: u64,
) -> Result<impl Iterator<Item = ProprietyCertificate> + 'k> {
    search_counterexamples_capped(kernel, n, budget, seed, DEFAULT_ENUMERATION_CAP)
}

/// As [`search_counterexamples`] with an explicit cap on `n`.
pub fn search_counterexamples_capped<'k>(
    kernel: &'k dyn RankSumKernel,
    n: usize,
    budget: u64,
    seed: u64,
    cap: usize,
) -> Result<impl Iterator<Item = ProprietyCertificate> + 'k> {
    if n > cap {
        return Err(Error::ResourceLimit { requested: n, cap });
    }
    if n == 0 {
        return Err(Error::InvalidInput("search needs n >= 1".into()));
    }
    Ok(scan_pool(kernel, random_pool(n, budget, seed)))
}

/// One search trial, for callers that parallelize over trial indices and
/// merge results by index.
pub fn search_trial(
    kernel: &dyn RankSumKernel,
    n: usize,
    seed: u64,
    trial: u64,
) -> Option<ProprietyCertificate> {
    let certificate = check_propriety(&random_trial_distribution(n, seed, trial), kernel);
    (!certificate.is_proper()).then_some(certificate)
}

/// Convenience RNG for deterministic test fixtures.
pub fn seeded_rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
