//! Scoring of covariate-to-prediction mappings on finite models: a mapping
//! is rewarded by applying an ordinary scoring function to the prediction it
//! produces from the realized covariates. The optimal mapping sends each
//! covariate tuple to the optimal prediction under the conditional outcome
//! distribution; on finite models that claim is checked exhaustively against
//! grid- or preorder-valued candidate pools.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::kernels::{OutcomeVector, RankSumKernel};
use crate::preorder::{self, TotalPreorder};
use crate::rational::{format_rational, parse_rational};

/// Cap on the candidate-pool size enumerated by the optimality checks.
pub const DEFAULT_POOL_CAP: usize = 1_000_000;

/// A prediction for the outcome vector: either per-element numbers or a
/// ranking directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    Vector(Vec<BigRational>),
    Order(TotalPreorder),
}

/// A mapping from covariate tuples to predictions: either an explicit table
/// on the model's covariate support, or one shared per-coordinate table
/// applied element-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredictionMapping {
    Full(BTreeMap<Vec<String>, Prediction>),
    CoordinateWise(BTreeMap<String, BigRational>),
}

impl PredictionMapping {
    pub fn apply(&self, x: &[String]) -> Result<Prediction> {
        match self {
            PredictionMapping::Full(table) => table
                .get(x)
                .cloned()
                .ok_or_else(|| Error::InvalidInput(format!("covariate tuple {x:?} is unmapped"))),
            PredictionMapping::CoordinateWise(table) => {
                let values = x
                    .iter()
                    .map(|v| {
                        table.get(v).cloned().ok_or_else(|| {
                            Error::InvalidInput(format!("covariate value {v:?} is unmapped"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Prediction::Vector(values))
            }
        }
    }
}

/// A scoring function on predictions, together with the functional it
/// elicits: `optimal_prediction` maps a conditional outcome distribution to
/// the prediction that maximizes the expected score under it.
pub trait PredictionScore {
    fn name(&self) -> &str;
    fn score(&self, y: &OutcomeVector, prediction: &Prediction) -> Result<BigRational>;
    fn optimal_prediction(&self, conditional: &JointDistribution) -> Prediction;
}

/// Sum of per-element Brier scores `Σ −(y_i − m_i)²`; elicits the marginal
/// mean vector.
#[derive(Debug, Clone, Copy, Default)]
pub struct BrierSum;

impl PredictionScore for BrierSum {
    fn name(&self) -> &str {
        "brier-sum"
    }

    fn score(&self, y: &OutcomeVector, prediction: &Prediction) -> Result<BigRational> {
        let Prediction::Vector(values) = prediction else {
            return Err(Error::InvalidInput(
                "sum-of-Brier scoring needs a numeric prediction vector".into(),
            ));
        };
        if values.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "prediction length {} does not match outcome length {}",
                values.len(),
                y.len()
            )));
        }
        let mut total = BigRational::zero();
        for (m, &bit) in values.iter().zip(y.bits()) {
            let target = if bit {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            let gap = target - m;
            total -= &gap * &gap;
        }
        Ok(total)
    }

    fn optimal_prediction(&self, conditional: &JointDistribution) -> Prediction {
        Prediction::Vector(conditional.marginals())
    }
}

/// A rank-sum kernel applied to the prediction's induced ranking; elicits
/// the marginal-induced preorder of the conditional distribution.
pub struct RankScore<K: RankSumKernel>(pub K);

impl<K: RankSumKernel> PredictionScore for RankScore<K> {
    fn name(&self) -> &str {
        self.0.name()
    }

    fn score(&self, y: &OutcomeVector, prediction: &Prediction) -> Result<BigRational> {
        match prediction {
            Prediction::Order(p) => self.0.score(y, p),
            Prediction::Vector(values) => self.0.score(y, &TotalPreorder::induced_by(values)?),
        }
    }

    fn optimal_prediction(&self, conditional: &JointDistribution) -> Prediction {
        Prediction::Order(conditional.exact_rank())
    }
}

/// Score of one realized sample under a mapping: `s(y, f(x))`.
pub fn mapping_score(
    x: &[String],
    y: &OutcomeVector,
    f: &PredictionMapping,
    s: &dyn PredictionScore,
) -> Result<BigRational> {
    s.score(y, &f.apply(x)?)
}

/// A finite joint distribution over covariate tuples and outcome vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovariateModel {
    n: usize,
    support: Vec<(Vec<String>, OutcomeVector, BigRational)>,
}

impl CovariateModel {
    pub fn new(n: usize, support: Vec<(Vec<String>, OutcomeVector, BigRational)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("covariate model needs n >= 1".into()));
        }
        if support.is_empty() {
            return Err(Error::InvalidInput(
                "covariate model needs a non-empty support".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        let mut total = BigRational::zero();
        for (x, y, p) in &support {
            if x.len() != n || y.len() != n {
                return Err(Error::InvalidInput(format!(
                    "atom arity mismatch: |x|={}, |y|={}, n={n}",
                    x.len(),
                    y.len()
                )));
            }
            if *p <= BigRational::zero() {
                return Err(Error::InvalidInput(
                    "atom probability must be positive".into(),
                ));
            }
            if !seen.insert((x.clone(), y.clone())) {
                return Err(Error::InvalidInput(format!(
                    "atom ({x:?}, {:?}) listed twice",
                    y.to_ints()
                )));
            }
            total += p;
        }
        if total != BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {} instead of 1",
                format_rational(&total)
            )));
        }
        Ok(CovariateModel { n, support })
    }

    /// The model of `n` i.i.d. covariate/response pairs drawn from one
    /// finite pair distribution; satisfies both coordinate-wise conditions
    /// by construction.
    pub fn iid_from_pairs(pair: &crate::theory::PairModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("need n >= 1 coordinates".into()));
        }
        let atoms = pair.support();
        let mut support = Vec::new();
        let mut choice = vec![0usize; n];
        loop {
            let mut x = Vec::with_capacity(n);
            let mut bits = Vec::with_capacity(n);
            let mut probability = BigRational::one();
            for &a in &choice {
                let (cov, y, p) = &atoms[a];
                x.push(cov.clone());
                bits.push(*y);
                probability *= p;
            }
            support.push((x, OutcomeVector::new(bits)?, probability));
            let mut slot = 0usize;
            loop {
                if slot == n {
                    break;
                }
                choice[slot] += 1;
                if choice[slot] < atoms.len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
            if slot == n {
                break;
            }
        }
        // Distinct (x, y) atoms never collide for i.i.d. products because
        // each configuration determines its own tuple pair.
        Self::new(n, support)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(Vec<String>, OutcomeVector, BigRational)] {
        &self.support
    }

    /// Distinct covariate tuples with positive probability, first-seen order.
    pub fn x_support(&self) -> Vec<Vec<String>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (x, _, _) in &self.support {
            if seen.insert(x.clone()) {
                out.push(x.clone());
            }
        }
        out
    }

    /// The conditional outcome distribution `P(Y | X = x)`.
    pub fn conditional(&self, x: &[String]) -> Result<JointDistribution> {
        let mut mass = BigRational::zero();
        let mut atoms = Vec::new();
        for (cov, y, p) in &self.support {
            if cov == x {
                mass += p;
                atoms.push((y.clone(), p.clone()));
            }
        }
        if mass.is_zero() {
            return Err(Error::UndefinedConditional(format!(
                "covariate tuple {x:?} has probability zero"
            )));
        }
        let support = atoms.into_iter().map(|(y, p)| (y, p / &mass)).collect();
        JointDistribution::new(self.n, support)
    }

    /// Expected mapping score by direct joint enumeration
    /// `Σ p(x, y) · s(y, f(x))`.
    pub fn expected_mapping_score(
        &self,
        f: &PredictionMapping,
        s: &dyn PredictionScore,
    ) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (x, y, p) in &self.support {
            total += mapping_score(x, y, f, s)? * p;
        }
        Ok(total)
    }

    /// Expected mapping score by iterated conditioning: the inner
    /// conditional expectation for each covariate tuple, then the outer
    /// average. Same value as the direct route by a different computation.
    pub fn expected_mapping_score_conditioned(
        &self,
        f: &PredictionMapping,
        s: &dyn PredictionScore,
    ) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for x in self.x_support() {
            let x_mass: BigRational = self
                .support
                .iter()
                .filter(|(cov, _, _)| *cov == x)
                .map(|(_, _, p)| p.clone())
                .sum();
            let conditional = self.conditional(&x)?;
            let prediction = f.apply(&x)?;
            let mut inner = BigRational::zero();
            for (y, p) in conditional.support() {
                inner += s.score(y, &prediction)? * p;
            }
            total += x_mass * inner;
        }
        Ok(total)
    }

    /// The mapping that quotes the score's elicited functional of every
    /// conditional distribution.
    pub fn conditional_functional_mapping(
        &self,
        s: &dyn PredictionScore,
    ) -> Result<PredictionMapping> {
        let mut table = BTreeMap::new();
        for x in self.x_support() {
            let conditional = self.conditional(&x)?;
            table.insert(x, s.optimal_prediction(&conditional));
        }
        Ok(PredictionMapping::Full(table))
    }

    /// Checks that the conditional-functional mapping scores at least as
    /// well as every candidate in the pool.
    pub fn verify_map_opt(
        &self,
        s: &dyn PredictionScore,
        pool: &[PredictionMapping],
    ) -> Result<bool> {
        let optimal = self.conditional_functional_mapping(s)?;
        let benchmark = self.expected_mapping_score(&optimal, s)?;
        for candidate in pool {
            if self.expected_mapping_score(candidate, s)? > benchmark {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every full mapping from the covariate support into `grid`-valued
    /// prediction vectors.
    pub fn grid_mappings(&self, grid: &[BigRational]) -> Result<Vec<PredictionMapping>> {
        self.grid_mappings_capped(grid, DEFAULT_POOL_CAP)
    }

    pub fn grid_mappings_capped(
        &self,
        grid: &[BigRational],
        cap: usize,
    ) -> Result<Vec<PredictionMapping>> {
        if grid.is_empty() {
            return Err(Error::InvalidInput("prediction grid is empty".into()));
        }
        let mut vectors: Vec<Vec<BigRational>> = vec![Vec::new()];
        for _ in 0..self.n {
            let mut next = Vec::with_capacity(vectors.len() * grid.len());
            for v in &vectors {
                for g in grid {
                    let mut extended = v.clone();
                    extended.push(g.clone());
                    next.push(extended);
                }
            }
            vectors = next;
        }
        let predictions: Vec<Prediction> = vectors.into_iter().map(Prediction::Vector).collect();
        self.assemble_mappings(predictions, cap)
    }

    /// Every full mapping from the covariate support into rankings.
    pub fn preorder_mappings(&self, cap: usize) -> Result<Vec<PredictionMapping>> {
        let predictions: Vec<Prediction> = preorder::enumerate_preorders(self.n)?
            .map(Prediction::Order)
            .collect();
        self.assemble_mappings(predictions, cap)
    }

    fn assemble_mappings(
        &self,
        predictions: Vec<Prediction>,
        cap: usize,
    ) -> Result<Vec<PredictionMapping>> {
        let xs = self.x_support();
        let pool_size = predictions.len().checked_pow(xs.len() as u32);
        match pool_size {
            Some(size) if size <= cap => {}
            _ => {
                return Err(Error::ResourceLimit {
                    requested: pool_size.unwrap_or(usize::MAX),
                    cap,
                })
            }
        }
        let mut out = Vec::with_capacity(pool_size.unwrap());
        let mut choice = vec![0usize; xs.len()];
        loop {
            let table: BTreeMap<Vec<String>, Prediction> = xs
                .iter()
                .zip(&choice)
                .map(|(x, &c)| (x.clone(), predictions[c].clone()))
                .collect();
            out.push(PredictionMapping::Full(table));
            let mut slot = 0usize;
            loop {
                if slot == xs.len() {
                    break;
                }
                choice[slot] += 1;
                if choice[slot] < predictions.len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
            if slot == xs.len() {
                break;
            }
        }
        Ok(out)
    }

    fn coordinate_conditional(&self, coordinate: usize, value: &str) -> Option<BigRational> {
        let mut mass = BigRational::zero();
        let mut hits = BigRational::zero();
        for (x, y, p) in &self.support {
            if x[coordinate] == value {
                mass += p;
                if y.get(coordinate) {
                    hits += p;
                }
            }
        }
        (!mass.is_zero()).then(|| hits / mass)
    }

    /// Checks the two coordinate-wise conditions by exact conditional
    /// probability comparison and, when both hold, that the conditional
    /// functional mapping really is expressible through one shared
    /// per-coordinate table.
    pub fn verify_map_coord(&self, s: &dyn PredictionScore) -> Result<MapCoordReport> {
        // (i): each Y_i depends on X only through X_i.
        let mut conditionally_independent = true;
        'outer: for i in 0..self.n {
            for x in self.x_support() {
                let conditional = self.conditional(&x)?;
                let through_tuple = &conditional.marginals()[i];
                let through_value = self
                    .coordinate_conditional(i, &x[i])
                    .expect("value occurs in the support");
                if *through_tuple != through_value {
                    conditionally_independent = false;
                    break 'outer;
                }
            }
        }

        // (ii): the conditional law given the own covariate is shared
        // across coordinates, compared on common covariate values.
        let mut shared_conditional_law = true;
        let mut values: Vec<String> = Vec::new();
        for (x, _, _) in &self.support {
            for v in x {
                if !values.contains(v) {
                    values.push(v.clone());
                }
            }
        }
        'values: for v in &values {
            let mut seen: Option<BigRational> = None;
            for i in 0..self.n {
                if let Some(conditional) = self.coordinate_conditional(i, v) {
                    match &seen {
                        None => seen = Some(conditional),
                        Some(previous) if *previous != conditional => {
                            shared_conditional_law = false;
                            break 'values;
                        }
                        _ => {}
                    }
                }
            }
        }

        let coordinatewise_optimal = if conditionally_independent && shared_conditional_law {
            let mut table = BTreeMap::new();
            for v in &values {
                for i in 0..self.n {
                    if let Some(conditional) = self.coordinate_conditional(i, v) {
                        table.insert(v.clone(), conditional);
                        break;
                    }
                }
            }
            let coordinatewise = PredictionMapping::CoordinateWise(table);
            let functional = self.conditional_functional_mapping(s)?;
            let mut matches = true;
            for x in self.x_support() {
                let from_table = coordinatewise.apply(&x)?;
                let from_functional = functional.apply(&x)?;
                let agree = match (&from_table, &from_functional) {
                    (Prediction::Vector(a), Prediction::Vector(b)) => a == b,
                    // Rank functionals compare through the induced ranking.
                    (Prediction::Vector(a), Prediction::Order(b)) => {
                        TotalPreorder::induced_by(a)? == *b
                    }
                    _ => false,
                };
                if !agree {
                    matches = false;
                    break;
                }
            }
            Some(matches)
        } else {
            None
        };

        Ok(MapCoordReport {
            conditionally_independent,
            shared_conditional_law,
            coordinatewise_optimal,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: CovariateModelDto = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("covariate model JSON: {e}")))?;
        let support = dto
            .support
            .into_iter()
            .map(|atom| {
                Ok((
                    atom.x,
                    OutcomeVector::from_ints(&atom.y)?,
                    parse_rational(&atom.p)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dto.n, support)
    }

    pub fn to_json(&self) -> String {
        let dto = CovariateModelDto {
            n: self.n,
            support: self
                .support
                .iter()
                .map(|(x, y, p)| CovariateAtomDto {
                    x: x.clone(),
                    y: y.to_ints(),
                    p: format_rational(p),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("DTO serialization cannot fail")
    }
}

/// Result of the coordinate-wise mapping check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapCoordReport {
    /// Condition (i): `Y_i` is conditionally independent of `X` given `X_i`.
    pub conditionally_independent: bool,
    /// Condition (ii): the law of `Y_i | X_i` is the same for every `i`.
    pub shared_conditional_law: bool,
    /// When both conditions hold: whether the optimal mapping coincides with
    /// a single shared per-coordinate table. `None` when a condition fails,
    /// in which case no coordinate-wise claim is made.
    pub coordinatewise_optimal: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CovariateModelDto {
    n: usize,
    support: Vec<CovariateAtomDto>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CovariateAtomDto {
    x: Vec<String>,
    y: Vec<u8>,
    p: String,
}
