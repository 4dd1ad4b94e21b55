//! Rank-sum scoring of realized binary outcomes: the Wilcoxon–Mann–Whitney
//! count `u`, the empirical AUC and Gini, ROC curves, and per-element
//! marginal scoring rules (Brier, logarithmic, spherical).
//!
//! Every rank-sum score decomposes as `s(y, ≼) = g(y) + Σ σ_i(y) ρ_i(≼)`;
//! the [`RankSumKernel`] trait exposes that `(g, σ)` pair, which is what the
//! expectation machinery in [`crate::dist`] consumes.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::preorder::TotalPreorder;
use crate::rational::{self, half, ratio};

/// A realized vector of binary outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeVector {
    bits: Vec<bool>,
}

impl OutcomeVector {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidInput(
                "outcome vector must be non-empty".into(),
            ));
        }
        Ok(OutcomeVector { bits })
    }

    /// Builds from 0/1 integers, rejecting anything else.
    pub fn from_ints(values: &[u8]) -> Result<Self> {
        let bits = values
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidInput(format!(
                    "outcome {other} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Self::new(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    /// Number of positive outcomes `n₁`.
    pub fn positives(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of negative outcomes `n₀`.
    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }

    /// All-zero or all-one vectors, for which ROC and AUC are undefined and a
    /// convention constant is used instead.
    pub fn is_degenerate(&self) -> bool {
        let pos = self.positives();
        pos == 0 || pos == self.len()
    }

    pub fn to_ints(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| u8::from(b)).collect()
    }
}

fn check_lengths(y: &OutcomeVector, p: &TotalPreorder) -> Result<()> {
    if y.len() != p.n() {
        return Err(Error::InvalidInput(format!(
            "outcome length {} does not match preorder size {}",
            y.len(),
            p.n()
        )));
    }
    Ok(())
}

/// Wilcoxon–Mann–Whitney `u`: the number of (negative, positive) index pairs
/// ranked concordantly, ties counting half. Computed as the literal double
/// sum over pairs; the `(g, σ)` closed form lives in [`WmwKernel`].
pub fn wmw_u(y: &OutcomeVector, p: &TotalPreorder) -> Result<BigRational> {
    check_lengths(y, p)?;
    let mut strict = 0i64;
    let mut tied = 0i64;
    for i in 0..y.len() {
        if y.get(i) {
            continue;
        }
        for j in 0..y.len() {
            if !y.get(j) {
                continue;
            }
            if p.lt(i, j) {
                strict += 1;
            } else if p.tied(i, j) {
                tied += 1;
            }
        }
    }
    Ok(ratio(2 * strict + tied, 2))
}

/// Standardised positive-indicator weights `α_i(y) = y_i / (n₀ n₁)`, or the
/// zero vector on degenerate outcomes.
pub fn alpha(y: &OutcomeVector) -> Vec<BigRational> {
    if y.is_degenerate() {
        return vec![BigRational::zero(); y.len()];
    }
    let denom = (y.negatives() * y.positives()) as i64;
    y.bits()
        .iter()
        .map(|&b| {
            if b {
                ratio(1, denom)
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// Empirical AUC via the rank-sum form `½ + ½ Σ α_i(y) ρ_i(≼)`, with the
/// default convention value ½ on degenerate outcomes.
pub fn auc(y: &OutcomeVector, p: &TotalPreorder) -> Result<BigRational> {
    auc_with_constant(y, p, &half())
}

/// As [`auc`] with an explicit degenerate-outcome constant.
pub fn auc_with_constant(
    y: &OutcomeVector,
    p: &TotalPreorder,
    degenerate: &BigRational,
) -> Result<BigRational> {
    check_lengths(y, p)?;
    if y.is_degenerate() {
        return Ok(degenerate.clone());
    }
    let rho = p.rank_vector();
    let mut total = BigRational::zero();
    for (a, &r) in alpha(y).iter().zip(rho.values()) {
        total += a * BigRational::from_integer(BigInt::from(r));
    }
    Ok(half() + half() * total)
}

/// Gini coefficient `2·auc − 1`, twice the net ROC area above the diagonal.
pub fn gini(y: &OutcomeVector, p: &TotalPreorder) -> Result<BigRational> {
    gini_with_constant(y, p, &half())
}

/// As [`gini`] with an explicit degenerate-AUC constant.
pub fn gini_with_constant(
    y: &OutcomeVector,
    p: &TotalPreorder,
    degenerate: &BigRational,
) -> Result<BigRational> {
    Ok(auc_with_constant(y, p, degenerate)? * ratio(2, 1) - BigRational::one())
}

/// The empirical ROC polyline, parametrised from (1,1) down to (0,0); one
/// interior point per tie class in ascending rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RocCurve {
    points: Vec<(BigRational, BigRational)>,
}

impl RocCurve {
    /// `(false positive rate, true positive rate)` pairs, both coordinates
    /// non-increasing along the sequence.
    pub fn points(&self) -> &[(BigRational, BigRational)] {
        &self.points
    }

    /// Exact trapezoid area under the polyline; equals the rank-sum AUC.
    pub fn area(&self) -> BigRational {
        let mut total = BigRational::zero();
        for pair in self.points.windows(2) {
            let (ref x0, ref y0) = pair[0];
            let (ref x1, ref y1) = pair[1];
            total += (x0 - x1) * (y0 + y1);
        }
        total / ratio(2, 1)
    }

    /// CSV rendering with header `fpr,tpr`; exact `a/b` by default, decimal
    /// when requested.
    pub fn to_csv(&self, decimal: bool) -> String {
        let mut out = String::from("fpr,tpr\n");
        for (fpr, tpr) in &self.points {
            if decimal {
                out.push_str(&format!(
                    "{},{}\n",
                    rational::to_f64(fpr),
                    rational::to_f64(tpr)
                ));
            } else {
                out.push_str(&format!(
                    "{},{}\n",
                    rational::format_rational(fpr),
                    rational::format_rational(tpr)
                ));
            }
        }
        out
    }
}

/// Builds the ROC curve of a preorder against realized outcomes. Degenerate
/// outcomes have no curve and yield [`Error::DegenerateOutcome`].
pub fn roc_curve(y: &OutcomeVector, p: &TotalPreorder) -> Result<RocCurve> {
    check_lengths(y, p)?;
    if y.is_degenerate() {
        return Err(Error::DegenerateOutcome {
            positives: y.positives(),
            n: y.len(),
        });
    }
    let n0 = y.negatives() as i64;
    let n1 = y.positives() as i64;
    let mut points = vec![(BigRational::one(), BigRational::one())];
    // Counts of outcomes ranked strictly above each class, scanned top-down.
    let mut above0 = 0i64;
    let mut above1 = 0i64;
    let mut per_class: Vec<(BigRational, BigRational)> = Vec::with_capacity(p.class_count());
    for class in p.classes().iter().rev() {
        per_class.push((ratio(above0, n0), ratio(above1, n1)));
        for &member in class {
            if y.get(member) {
                above1 += 1;
            } else {
                above0 += 1;
            }
        }
    }
    per_class.reverse();
    points.extend(per_class);
    Ok(RocCurve { points })
}

/// All-`f64` ROC area for large instances; the exact path stays rational.
pub fn roc_area_f64(y: &OutcomeVector, p: &TotalPreorder) -> Result<f64> {
    check_lengths(y, p)?;
    if y.is_degenerate() {
        return Err(Error::DegenerateOutcome {
            positives: y.positives(),
            n: y.len(),
        });
    }
    let n0 = y.negatives() as f64;
    let n1 = y.positives() as f64;
    let mut above0 = 0.0f64;
    let mut above1 = 0.0f64;
    let mut pts = vec![(1.0f64, 1.0f64)];
    let mut per_class = Vec::with_capacity(p.class_count());
    for class in p.classes().iter().rev() {
        per_class.push((above0 / n0, above1 / n1));
        for &member in class {
            if y.get(member) {
                above1 += 1.0;
            } else {
                above0 += 1.0;
            }
        }
    }
    per_class.reverse();
    pts.extend(per_class);
    let mut area = 0.0f64;
    for pair in pts.windows(2) {
        area += (pair[0].0 - pair[1].0) * (pair[0].1 + pair[1].1) / 2.0;
    }
    Ok(area)
}

/// A rank-sum scoring function given by its `(g, σ)` decomposition.
pub trait RankSumKernel {
    fn name(&self) -> &str;

    /// The outcome-only offset `g(y)`.
    fn offset(&self, y: &OutcomeVector) -> BigRational;

    /// The per-element weights `σ(y)` multiplying the rank vector.
    fn weights(&self, y: &OutcomeVector) -> Vec<BigRational>;

    /// `s(y, ≼) = g(y) + Σ σ_i(y) ρ_i(≼)`.
    fn score(&self, y: &OutcomeVector, p: &TotalPreorder) -> Result<BigRational> {
        check_lengths(y, p)?;
        let rho = p.rank_vector();
        let mut total = self.offset(y);
        for (w, &r) in self.weights(y).iter().zip(rho.values()) {
            total += w * BigRational::from_integer(BigInt::from(r));
        }
        Ok(total)
    }
}

/// `u(y,≼) = ½ n₀ n₁ + ½ Σ y_i ρ_i(≼)`.
#[derive(Debug, Clone, Default)]
pub struct WmwKernel;

impl RankSumKernel for WmwKernel {
    fn name(&self) -> &str {
        "u"
    }

    fn offset(&self, y: &OutcomeVector) -> BigRational {
        ratio((y.negatives() * y.positives()) as i64, 2)
    }

    fn weights(&self, y: &OutcomeVector) -> Vec<BigRational> {
        y.bits()
            .iter()
            .map(|&b| if b { half() } else { BigRational::zero() })
            .collect()
    }
}

/// `auc(y,≼) = ½ + ½ Σ α_i(y) ρ_i(≼)`, with a configurable constant on
/// degenerate outcomes (default ½).
#[derive(Debug, Clone)]
pub struct AucKernel {
    degenerate: BigRational,
}

impl Default for AucKernel {
    fn default() -> Self {
        AucKernel { degenerate: half() }
    }
}

impl AucKernel {
    pub fn with_constant(degenerate: BigRational) -> Self {
        AucKernel { degenerate }
    }

    pub fn degenerate_constant(&self) -> &BigRational {
        &self.degenerate
    }
}

impl RankSumKernel for AucKernel {
    fn name(&self) -> &str {
        "auc"
    }

    fn offset(&self, y: &OutcomeVector) -> BigRational {
        if y.is_degenerate() {
            self.degenerate.clone()
        } else {
            half()
        }
    }

    fn weights(&self, y: &OutcomeVector) -> Vec<BigRational> {
        alpha(y).into_iter().map(|a| a * half()).collect()
    }
}

/// `gini = 2·auc − 1`: offset 0 on non-degenerate outcomes, weights `α(y)`.
#[derive(Debug, Clone)]
pub struct GiniKernel {
    auc_degenerate: BigRational,
}

impl Default for GiniKernel {
    fn default() -> Self {
        GiniKernel {
            auc_degenerate: half(),
        }
    }
}

impl GiniKernel {
    pub fn with_constant(auc_degenerate: BigRational) -> Self {
        GiniKernel { auc_degenerate }
    }
}

impl RankSumKernel for GiniKernel {
    fn name(&self) -> &str {
        "gini"
    }

    fn offset(&self, y: &OutcomeVector) -> BigRational {
        if y.is_degenerate() {
            &self.auc_degenerate * ratio(2, 1) - BigRational::one()
        } else {
            BigRational::zero()
        }
    }

    fn weights(&self, y: &OutcomeVector) -> Vec<BigRational> {
        alpha(y)
    }
}

type OffsetFn = Box<dyn Fn(&OutcomeVector) -> BigRational + Send + Sync>;
type WeightsFn = Box<dyn Fn(&OutcomeVector) -> Vec<BigRational> + Send + Sync>;

/// A user-supplied `(g, σ)` pair.
pub struct CustomKernel {
    name: String,
    offset_fn: OffsetFn,
    weights_fn: WeightsFn,
}

impl CustomKernel {
    pub fn new(
        name: impl Into<String>,
        offset_fn: impl Fn(&OutcomeVector) -> BigRational + Send + Sync + 'static,
        weights_fn: impl Fn(&OutcomeVector) -> Vec<BigRational> + Send + Sync + 'static,
    ) -> Self {
        CustomKernel {
            name: name.into(),
            offset_fn: Box::new(offset_fn),
            weights_fn: Box::new(weights_fn),
        }
    }
}

impl RankSumKernel for CustomKernel {
    fn name(&self) -> &str {
        &self.name
    }

    fn offset(&self, y: &OutcomeVector) -> BigRational {
        (self.offset_fn)(y)
    }

    fn weights(&self, y: &OutcomeVector) -> Vec<BigRational> {
        (self.weights_fn)(y)
    }
}

/// Built-in kernel selector used by the CLI and serialized certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    U,
    Auc,
    Gini,
}

impl KernelKind {
    pub fn build(self, degenerate: BigRational) -> Box<dyn RankSumKernel + Send + Sync> {
        match self {
            KernelKind::U => Box::new(WmwKernel),
            KernelKind::Auc => Box::new(AucKernel::with_constant(degenerate)),
            KernelKind::Gini => Box::new(GiniKernel::with_constant(degenerate)),
        }
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u" | "wmw" => Ok(KernelKind::U),
            "auc" => Ok(KernelKind::Auc),
            "gini" => Ok(KernelKind::Gini),
            other => Err(Error::InvalidInput(format!(
                "unknown kernel {other:?} (expected u, auc, or gini)"
            ))),
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::U => "u",
            KernelKind::Auc => "auc",
            KernelKind::Gini => "gini",
        })
    }
}

/// Per-element proper scoring rules for marginal probability forecasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoringRule {
    Brier,
    Log,
    Spherical,
}

/// Sum of per-element scores `Σ S(y_i, m_i)`. The logarithmic rule returns
/// an explicit `-inf` when a boundary forecast meets the wrong outcome.
pub fn marginal_score_sum(
    y: &OutcomeVector,
    forecast: &[BigRational],
    rule: ScoringRule,
) -> Result<f64> {
    if forecast.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "forecast length {} does not match outcome length {}",
            forecast.len(),
            y.len()
        )));
    }
    let mut total = 0.0f64;
    for (i, q) in forecast.iter().enumerate() {
        if !rational::is_probability(q) {
            return Err(Error::InvalidInput(format!(
                "forecast entry {i} = {q} is outside [0, 1]"
            )));
        }
        let q = rational::to_f64(q);
        let outcome = y.get(i);
        total += match rule {
            ScoringRule::Brier => {
                let target = if outcome { 1.0 } else { 0.0 };
                -(target - q) * (target - q)
            }
            // Only the realized branch contributes, so ln(0) = -inf surfaces
            // exactly when the wrong boundary forecast was made.
            ScoringRule::Log => {
                if outcome {
                    q.ln()
                } else {
                    (1.0 - q).ln()
                }
            }
            ScoringRule::Spherical => {
                let aligned = if outcome { q } else { 1.0 - q };
                aligned / (q * q + (1.0 - q) * (1.0 - q)).sqrt()
            }
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::enumerate_preorders;
    use proptest::prelude::*;

    fn y(bits: &[u8]) -> OutcomeVector {
        OutcomeVector::from_ints(bits).unwrap()
    }

    fn preorder(text: &str) -> TotalPreorder {
        TotalPreorder::parse(text).unwrap()
    }

    #[test]
    fn wmw_examples() {
        assert_eq!(
            wmw_u(&y(&[0, 1]), &preorder("[1][2]")).unwrap(),
            ratio(1, 1)
        );
        assert_eq!(wmw_u(&y(&[0, 1]), &preorder("[1,2]")).unwrap(), ratio(1, 2));
        assert_eq!(
            wmw_u(&y(&[1, 1, 0, 0]), &preorder("[4][3][1,2]")).unwrap(),
            ratio(4, 1)
        );
        assert!(wmw_u(&y(&[0, 1]), &preorder("[1][2][3]")).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(
            alpha(&y(&[1, 1, 0, 0])),
            vec![ratio(1, 4), ratio(1, 4), ratio(0, 1), ratio(0, 1)]
        );
        assert_eq!(
            alpha(&y(&[0, 0, 1, 0])),
            vec![ratio(0, 1), ratio(0, 1), ratio(1, 3), ratio(0, 1)]
        );
        assert_eq!(alpha(&y(&[0, 0, 0, 0])), vec![BigRational::zero(); 4]);
    }

    #[test]
    fn auc_examples() {
        assert_eq!(
            auc(&y(&[0, 0, 1, 0]), &preorder("[4][3][1,2]")).unwrap(),
            ratio(1, 3)
        );
        assert_eq!(auc(&y(&[1, 0]), &preorder("[2][1]")).unwrap(), ratio(1, 1));
        for p in enumerate_preorders(3).unwrap() {
            assert_eq!(auc(&y(&[1, 1, 1]), &p).unwrap(), ratio(1, 2));
            assert_eq!(
                auc_with_constant(&y(&[1, 1, 1]), &p, &ratio(1, 4)).unwrap(),
                ratio(1, 4)
            );
        }
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&y(&[1, 0]), &preorder("[2][1]")).unwrap(), ratio(1, 1));
        assert_eq!(gini(&y(&[0, 1]), &preorder("[1,2]")).unwrap(), ratio(0, 1));
        assert_eq!(
            gini(&y(&[0, 0, 1, 0]), &preorder("[4][3][1,2]")).unwrap(),
            ratio(-1, 3)
        );
    }

    #[test]
    fn roc_examples() {
        let curve = roc_curve(&y(&[0, 1]), &preorder("[1][2]")).unwrap();
        assert_eq!(
            curve.points(),
            &[
                (ratio(1, 1), ratio(1, 1)),
                (ratio(0, 1), ratio(1, 1)),
                (ratio(0, 1), ratio(0, 1))
            ]
        );
        assert_eq!(curve.area(), ratio(1, 1));

        let diag = roc_curve(&y(&[0, 1]), &preorder("[1,2]")).unwrap();
        assert_eq!(
            diag.points(),
            &[(ratio(1, 1), ratio(1, 1)), (ratio(0, 1), ratio(0, 1))]
        );
        assert_eq!(diag.area(), ratio(1, 2));

        let wide = roc_curve(&y(&[1, 1, 0, 0]), &preorder("[4][3][1,2]")).unwrap();
        assert_eq!(
            wide.points(),
            &[
                (ratio(1, 1), ratio(1, 1)),
                (ratio(1, 2), ratio(1, 1)),
                (ratio(0, 1), ratio(1, 1)),
                (ratio(0, 1), ratio(0, 1))
            ]
        );
        assert_eq!(wide.area(), ratio(1, 1));

        let err = roc_curve(&y(&[1, 1]), &preorder("[1][2]")).unwrap_err();
        assert_eq!(err, Error::DegenerateOutcome { positives: 2, n: 2 });
    }

    #[test]
    fn roc_monotone_and_consistent_exhaustively() {
        for n in 2..=5usize {
            for p in enumerate_preorders(n).unwrap() {
                for mask in 1..(1u32 << n) - 1 {
                    let bits: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                    let outcome = y(&bits);
                    let curve = roc_curve(&outcome, &p).unwrap();
                    let pts = curve.points();
                    assert_eq!(pts.first().unwrap(), &(ratio(1, 1), ratio(1, 1)));
                    assert_eq!(pts.last().unwrap(), &(ratio(0, 1), ratio(0, 1)));
                    for pair in pts.windows(2) {
                        assert!(pair[0].0 >= pair[1].0 && pair[0].1 >= pair[1].1);
                    }
                    assert_eq!(curve.area(), auc(&outcome, &p).unwrap());
                }
            }
        }
    }

    #[test]
    fn pair_count_equals_closed_form_exhaustively() {
        // u by literal pair counting vs the (g, σ) form, all y and ≼, n ≤ 6.
        let kernel = WmwKernel;
        for n in 1..=6usize {
            for p in enumerate_preorders(n).unwrap() {
                for mask in 0..(1u32 << n) {
                    let bits: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                    let outcome = y(&bits);
                    assert_eq!(
                        wmw_u(&outcome, &p).unwrap(),
                        kernel.score(&outcome, &p).unwrap(),
                        "n={n} y={bits:?} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn auc_matches_normalised_u_exhaustively() {
        for n in 1..=6usize {
            for p in enumerate_preorders(n).unwrap() {
                for mask in 1..(1u32 << n) - 1 {
                    let bits: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
                    let outcome = y(&bits);
                    let denom = (outcome.negatives() * outcome.positives()) as i64;
                    assert_eq!(
                        auc(&outcome, &p).unwrap(),
                        wmw_u(&outcome, &p).unwrap() / ratio(denom, 1)
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_decompositions_match_direct_formulas() {
        let outcome = y(&[1, 0, 0, 1, 0]);
        let u = WmwKernel;
        assert_eq!(u.offset(&outcome), ratio(3 * 2, 2));
        assert_eq!(
            u.weights(&outcome),
            vec![half(), ratio(0, 1), ratio(0, 1), half(), ratio(0, 1)]
        );
        let a = AucKernel::default();
        assert_eq!(a.offset(&outcome), half());
        let expected: Vec<BigRational> = alpha(&outcome).into_iter().map(|v| v * half()).collect();
        assert_eq!(a.weights(&outcome), expected);
        for p in enumerate_preorders(5).unwrap().take(50) {
            assert_eq!(a.score(&outcome, &p).unwrap(), auc(&outcome, &p).unwrap());
            assert_eq!(u.score(&outcome, &p).unwrap(), wmw_u(&outcome, &p).unwrap());
            assert_eq!(
                GiniKernel::default().score(&outcome, &p).unwrap(),
                gini(&outcome, &p).unwrap()
            );
        }
    }

    #[test]
    fn custom_kernel_matches_its_closed_form() {
        // u rebuilt from closures scores identically to the built-in
        let rebuilt = CustomKernel::new(
            "u-rebuilt",
            |y: &OutcomeVector| ratio((y.negatives() * y.positives()) as i64, 2),
            |y: &OutcomeVector| {
                y.bits()
                    .iter()
                    .map(|&b| if b { half() } else { BigRational::zero() })
                    .collect()
            },
        );
        let outcome = y(&[0, 1, 1, 0, 1]);
        for p in enumerate_preorders(5).unwrap().take(80) {
            assert_eq!(
                rebuilt.score(&outcome, &p).unwrap(),
                wmw_u(&outcome, &p).unwrap()
            );
        }
        assert_eq!(rebuilt.name(), "u-rebuilt");
    }

    #[test]
    fn kernel_kind_parses_and_builds() {
        assert_eq!("u".parse::<KernelKind>().unwrap(), KernelKind::U);
        assert_eq!("AUC".parse::<KernelKind>().unwrap(), KernelKind::Auc);
        assert_eq!("gini".parse::<KernelKind>().unwrap(), KernelKind::Gini);
        assert!("brier".parse::<KernelKind>().is_err());
        let kernel = KernelKind::Auc.build(ratio(1, 4));
        assert_eq!(kernel.offset(&y(&[1, 1])), ratio(1, 4));
    }

    #[test]
    fn marginal_scores() {
        let perfect =
            marginal_score_sum(&y(&[1, 0]), &[ratio(1, 1), ratio(0, 1)], ScoringRule::Brier)
                .unwrap();
        assert_eq!(perfect, 0.0);

        let hedged =
            marginal_score_sum(&y(&[1, 0]), &[ratio(1, 2), ratio(1, 2)], ScoringRule::Brier)
                .unwrap();
        assert_eq!(hedged, -0.5);

        let log = marginal_score_sum(&y(&[1]), &[ratio(3, 4)], ScoringRule::Log).unwrap();
        assert!((log - 0.75f64.ln()).abs() < 1e-15);

        let wrong_boundary =
            marginal_score_sum(&y(&[1]), &[ratio(0, 1)], ScoringRule::Log).unwrap();
        assert_eq!(wrong_boundary, f64::NEG_INFINITY);

        let right_boundary =
            marginal_score_sum(&y(&[1]), &[ratio(1, 1)], ScoringRule::Log).unwrap();
        assert_eq!(right_boundary, 0.0);

        let spherical =
            marginal_score_sum(&y(&[1]), &[ratio(1, 1)], ScoringRule::Spherical).unwrap();
        assert_eq!(spherical, 1.0);

        assert!(marginal_score_sum(&y(&[1]), &[ratio(3, 2)], ScoringRule::Brier).is_err());
        assert!(marginal_score_sum(&y(&[1, 0]), &[ratio(1, 2)], ScoringRule::Brier).is_err());
    }

    #[test]
    fn csv_rendering() {
        let curve = roc_curve(&y(&[1, 1, 0, 0]), &preorder("[4][3][1,2]")).unwrap();
        assert_eq!(curve.to_csv(false), "fpr,tpr\n1,1\n1/2,1\n0,1\n0,0\n");
        assert!(curve.to_csv(true).starts_with("fpr,tpr\n1,1\n0.5,1\n"));
    }

    proptest! {
        #[test]
        fn u_in_range_and_reversal_flips_auc(
            bits in proptest::collection::vec(0u8..2, 2..7),
            pick in 0usize..500,
        ) {
            let outcome = y(&bits);
            let n = outcome.len();
            let all: Vec<TotalPreorder> = enumerate_preorders(n).unwrap().collect();
            let p = &all[pick % all.len()];
            let u = wmw_u(&outcome, p).unwrap();
            let bound = ratio((outcome.negatives() * outcome.positives()) as i64, 1);
            prop_assert!(u >= BigRational::zero() && u <= bound);
            // half-integer grid
            prop_assert!((u * ratio(2, 1)).is_integer());

            if !outcome.is_degenerate() {
                let a = auc(&outcome, p).unwrap();
                prop_assert!(a >= BigRational::zero() && a <= BigRational::one());
                let flipped = auc(&outcome, &p.reversed()).unwrap();
                prop_assert_eq!(a + flipped, ratio(1, 1));
            }
        }

        #[test]
        fn auc_invariant_under_increasing_transform(
            raw in proptest::collection::vec((-30i64..30, 1i64..10), 2..6),
            bits_seed in 0u32..1024,
        ) {
            let values: Vec<BigRational> = raw.iter().map(|&(a, b)| ratio(a, b)).collect();
            let n = values.len();
            let bits: Vec<u8> = (0..n).map(|i| ((bits_seed >> i) & 1) as u8).collect();
            let outcome = y(&bits);
            let mapped: Vec<BigRational> =
                values.iter().map(|v| v * v * v + v * ratio(5, 2)).collect(); // x³ + 5x/2 increasing
            let base = auc(&outcome, &TotalPreorder::induced_by(&values).unwrap()).unwrap();
            let same = auc(&outcome, &TotalPreorder::induced_by(&mapped).unwrap()).unwrap();
            prop_assert_eq!(base, same);
        }
    }
}
