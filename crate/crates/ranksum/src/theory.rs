//! Theoretical AUC of a covariate/response sampling model and its exact
//! relation to the expected empirical AUC of i.i.d. draws:
//! `E[auc] = (1 − π₀ⁿ − π₁ⁿ)·tauc + c·(π₀ⁿ + π₁ⁿ)` with convention
//! constant `c` for the degenerate outcomes.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{auc_with_constant, OutcomeVector};
use crate::preorder::TotalPreorder;
use crate::rational::{format_rational, half, parse_rational};

/// Cap on the number of i.i.d. configurations enumerated when computing an
/// expected empirical AUC exactly.
pub const DEFAULT_CONFIGURATION_CAP: usize = 1_000_000;

/// A finite joint distribution for one covariate/response pair `(X, Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairModel {
    support: Vec<(String, bool, BigRational)>,
}

impl PairModel {
    pub fn new(support: Vec<(String, bool, BigRational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidInput(
                "pair model needs a non-empty support".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        let mut total = BigRational::zero();
        for (x, y, p) in &support {
            if *p <= BigRational::zero() {
                return Err(Error::InvalidInput(format!(
                    "probability {} of atom ({x:?}, {}) is not positive",
                    format_rational(p),
                    u8::from(*y)
                )));
            }
            if !seen.insert((x.clone(), *y)) {
                return Err(Error::InvalidInput(format!(
                    "atom ({x:?}, {}) listed twice",
                    u8::from(*y)
                )));
            }
            total += p;
        }
        if total != BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "pair probabilities sum to {} instead of 1",
                format_rational(&total)
            )));
        }
        Ok(PairModel { support })
    }

    pub fn support(&self) -> &[(String, bool, BigRational)] {
        &self.support
    }

    /// `π_c = θ(Y = c)`.
    pub fn class_probability(&self, class: bool) -> BigRational {
        self.support
            .iter()
            .filter(|(_, y, _)| *y == class)
            .map(|(_, _, p)| p.clone())
            .sum()
    }

    /// Probability a random positive outranks a random negative under `f`,
    /// ties counting half:
    /// `E[1_{f(X₁)>f(X₂)} + ½·1_{f(X₁)=f(X₂)} | Y₁=1, Y₂=0]`.
    pub fn theoretical_auc(&self, f: &ScalarMap) -> Result<BigRational> {
        let pi1 = self.class_probability(true);
        let pi0 = self.class_probability(false);
        if pi0.is_zero() || pi1.is_zero() {
            return Err(Error::UndefinedConditional(
                "theoretical AUC conditions on both classes having positive probability".into(),
            ));
        }
        let mut total = BigRational::zero();
        for (x1, y1, p1) in &self.support {
            if !*y1 {
                continue;
            }
            let f1 = f.value(x1)?;
            for (x2, y2, p2) in &self.support {
                if *y2 {
                    continue;
                }
                let f2 = f.value(x2)?;
                let weight = if f1 > f2 {
                    BigRational::one()
                } else if f1 == f2 {
                    half()
                } else {
                    continue;
                };
                total += p1 * p2 * weight;
            }
        }
        Ok(total / (pi1 * pi0))
    }

    /// Exact expected empirical AUC of `n` i.i.d. draws ranked by `f`, by
    /// enumeration over all `|support|^n` configurations; degenerate outcome
    /// vectors contribute the convention constant.
    pub fn expected_empirical_auc(
        &self,
        f: &ScalarMap,
        n: usize,
        degenerate: &BigRational,
    ) -> Result<BigRational> {
        self.expected_empirical_auc_capped(f, n, degenerate, DEFAULT_CONFIGURATION_CAP)
    }

    pub fn expected_empirical_auc_capped(
        &self,
        f: &ScalarMap,
        n: usize,
        degenerate: &BigRational,
        cap: usize,
    ) -> Result<BigRational> {
        if n == 0 {
            return Err(Error::InvalidInput("need n >= 1 draws".into()));
        }
        let configurations = self.support.len().checked_pow(n as u32);
        match configurations {
            Some(count) if count <= cap => {}
            _ => {
                return Err(Error::ResourceLimit {
                    requested: configurations.unwrap_or(usize::MAX),
                    cap,
                })
            }
        }
        let values: Vec<BigRational> = self
            .support
            .iter()
            .map(|(x, _, _)| f.value(x).cloned())
            .collect::<Result<_>>()?;

        let mut expectation = BigRational::zero();
        let mut choice = vec![0usize; n];
        loop {
            let mut probability = BigRational::one();
            let mut bits = Vec::with_capacity(n);
            let mut mapped = Vec::with_capacity(n);
            for &atom in &choice {
                let (_, y, p) = &self.support[atom];
                probability *= p;
                bits.push(*y);
                mapped.push(values[atom].clone());
            }
            let outcome = OutcomeVector::new(bits).expect("n >= 1");
            let ranking = TotalPreorder::induced_by(&mapped).expect("n >= 1");
            expectation += probability * auc_with_constant(&outcome, &ranking, degenerate)?;

            let mut slot = 0usize;
            loop {
                if slot == n {
                    break;
                }
                choice[slot] += 1;
                if choice[slot] < self.support.len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
            if slot == n {
                break;
            }
        }
        Ok(expectation)
    }

    /// Both sides of the expected-AUC identity as exact rationals:
    /// enumeration on the left, the closed form
    /// `(1 − π₀ⁿ − π₁ⁿ)·tauc + c·(π₀ⁿ + π₁ⁿ)` on the right.
    pub fn expected_auc_identity(
        &self,
        f: &ScalarMap,
        n: usize,
        degenerate: &BigRational,
    ) -> Result<(BigRational, BigRational)> {
        let lhs = self.expected_empirical_auc(f, n, degenerate)?;
        let tauc = self.theoretical_auc(f)?;
        let pi0 = self.class_probability(false);
        let pi1 = self.class_probability(true);
        let degenerate_mass = num::pow::pow(pi0, n) + num::pow::pow(pi1, n);
        let rhs = (BigRational::one() - &degenerate_mass) * tauc + degenerate * degenerate_mass;
        Ok((lhs, rhs))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: PairModelDto = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("pair model JSON: {e}")))?;
        let support = dto
            .support
            .into_iter()
            .map(|atom| {
                let y = match atom.y {
                    0 => false,
                    1 => true,
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "response {other} is not 0 or 1"
                        )))
                    }
                };
                Ok((atom.x, y, parse_rational(&atom.p)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(support)
    }

    pub fn to_json(&self) -> String {
        let dto = PairModelDto {
            support: self
                .support
                .iter()
                .map(|(x, y, p)| PairAtomDto {
                    x: x.clone(),
                    y: u8::from(*y),
                    p: format_rational(p),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("DTO serialization cannot fail")
    }
}

/// A map from covariate values to rationals, total on the model's support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMap {
    map: BTreeMap<String, BigRational>,
}

impl ScalarMap {
    pub fn new(entries: impl IntoIterator<Item = (String, BigRational)>) -> Self {
        ScalarMap {
            map: entries.into_iter().collect(),
        }
    }

    pub fn constant(value: BigRational, covariates: impl IntoIterator<Item = String>) -> Self {
        ScalarMap {
            map: covariates.into_iter().map(|x| (x, value.clone())).collect(),
        }
    }

    pub fn value(&self, covariate: &str) -> Result<&BigRational> {
        self.map
            .get(covariate)
            .ok_or_else(|| Error::InvalidInput(format!("covariate {covariate:?} is unmapped")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: ScalarMapDto = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("scalar map JSON: {e}")))?;
        let map = dto
            .f
            .into_iter()
            .map(|(x, v)| Ok((x, parse_rational(&v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ScalarMap { map })
    }

    pub fn to_json(&self) -> String {
        let dto = ScalarMapDto {
            f: self
                .map
                .iter()
                .map(|(x, v)| (x.clone(), format_rational(v)))
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("DTO serialization cannot fail")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct PairModelDto {
    support: Vec<PairAtomDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PairAtomDto {
    x: String,
    y: u8,
    p: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScalarMapDto {
    f: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::ratio;

    fn identity_map() -> ScalarMap {
        ScalarMap::new([("0".into(), ratio(0, 1)), ("1".into(), ratio(1, 1))])
    }

    #[test]
    fn perfect_discriminator_scores_one() {
        let model = PairModel::new(vec![
            ("1".into(), true, half()),
            ("0".into(), false, half()),
        ])
        .unwrap();
        assert_eq!(model.theoretical_auc(&identity_map()).unwrap(), ratio(1, 1));
    }

    #[test]
    fn constant_map_scores_half() {
        let model = presets::binary_pair_model();
        let constant = ScalarMap::constant(ratio(3, 1), ["0".into(), "1".into()]);
        assert_eq!(model.theoretical_auc(&constant).unwrap(), half());
    }

    #[test]
    fn reference_model_scores_seven_tenths() {
        let model = presets::binary_pair_model();
        assert_eq!(
            model.theoretical_auc(&identity_map()).unwrap(),
            ratio(7, 10)
        );
    }

    #[test]
    fn one_class_models_are_rejected() {
        let model =
            PairModel::new(vec![("1".into(), true, half()), ("0".into(), true, half())]).unwrap();
        assert!(matches!(
            model.theoretical_auc(&identity_map()).unwrap_err(),
            Error::UndefinedConditional(_)
        ));
    }

    #[test]
    fn identity_on_perfect_model() {
        let model = PairModel::new(vec![
            ("1".into(), true, half()),
            ("0".into(), false, half()),
        ])
        .unwrap();
        let (lhs, rhs) = model
            .expected_auc_identity(&identity_map(), 2, &half())
            .unwrap();
        assert_eq!(lhs, ratio(3, 4));
        assert_eq!(rhs, ratio(3, 4));
    }

    #[test]
    fn identity_with_constant_map_is_half() {
        let model = presets::binary_pair_model();
        let constant = ScalarMap::constant(ratio(1, 1), ["0".into(), "1".into()]);
        let (lhs, rhs) = model.expected_auc_identity(&constant, 3, &half()).unwrap();
        assert_eq!(lhs, half());
        assert_eq!(rhs, half());
    }

    #[test]
    fn identity_on_reference_model() {
        let model = presets::binary_pair_model();
        for n in [2, 3] {
            let (lhs, rhs) = model
                .expected_auc_identity(&identity_map(), n, &half())
                .unwrap();
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn identity_tracks_the_degenerate_constant() {
        let model = presets::binary_pair_model();
        for c in [ratio(0, 1), ratio(1, 1), ratio(2, 7)] {
            let (lhs, rhs) = model.expected_auc_identity(&identity_map(), 3, &c).unwrap();
            assert_eq!(lhs, rhs, "constant {c}");
        }
    }

    #[test]
    fn theoretical_auc_invariant_under_increasing_transform() {
        let model = presets::binary_pair_model();
        let scaled = ScalarMap::new([("0".into(), ratio(-7, 3)), ("1".into(), ratio(11, 2))]);
        assert_eq!(
            model.theoretical_auc(&identity_map()).unwrap(),
            model.theoretical_auc(&scaled).unwrap()
        );
    }

    #[test]
    fn configuration_cap_is_enforced() {
        let model = presets::binary_pair_model();
        let err = model
            .expected_empirical_auc_capped(&identity_map(), 4, &half(), 100)
            .unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                requested: 256,
                cap: 100
            }
        );
    }

    #[test]
    fn json_round_trips() {
        let model = presets::binary_pair_model();
        assert_eq!(PairModel::from_json(&model.to_json()).unwrap(), model);
        let f = identity_map();
        assert_eq!(ScalarMap::from_json(&f.to_json()).unwrap(), f);
        let explicit = r#"{"f":{"a":"1","b":"0"}}"#;
        let parsed = ScalarMap::from_json(explicit).unwrap();
        assert_eq!(parsed.value("a").unwrap(), &ratio(1, 1));
        assert!(parsed.value("c").is_err());
    }
}
