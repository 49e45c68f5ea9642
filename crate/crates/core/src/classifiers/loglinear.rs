//! Loglinear disclosure models over four factor scores.
//!
//! The log-odds of disclosure is modelled as an intercept plus either the
//! four main effects of tendency, sensitivity, trustworthiness and
//! appropriateness (additive) or all fifteen products of those factors
//! (full factorial). Coefficients are the L2-penalized maximum-likelihood
//! estimates, found by damped Newton ascent.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::{ColumnKind, FactorGroup, FeatureMatrix, Value};
use crate::error::{Error, Result};

/// The factor groups feeding the four scores, in model order.
pub const FACTOR_ORDER: [FactorGroup; 4] = [
    FactorGroup::Tendency,
    FactorGroup::Sensitivity,
    FactorGroup::Trustworthiness,
    FactorGroup::Appropriateness,
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FactorScores {
    pub tendency: f64,
    pub sensitivity: f64,
    pub trustworthiness: f64,
    pub appropriateness: f64,
}

impl FactorScores {
    pub fn new(values: [f64; 4]) -> Self {
        let [tendency, sensitivity, trustworthiness, appropriateness] = values;
        FactorScores {
            tendency,
            sensitivity,
            trustworthiness,
            appropriateness,
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [
            self.tendency,
            self.sensitivity,
            self.trustworthiness,
            self.appropriateness,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoglinearVariant {
    Additive,
    FullFactorial,
}

/// Factor index sets of the full-factorial terms: mains, then pairs,
/// triples and the four-way product, each in lexicographic order.
const TERMS: [&[usize]; 15] = [
    &[0],
    &[1],
    &[2],
    &[3],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[1, 2],
    &[1, 3],
    &[2, 3],
    &[0, 1, 2],
    &[0, 1, 3],
    &[0, 2, 3],
    &[1, 2, 3],
    &[0, 1, 2, 3],
];

impl LoglinearVariant {
    pub fn n_coefficients(self) -> usize {
        match self {
            LoglinearVariant::Additive => 4,
            LoglinearVariant::FullFactorial => 15,
        }
    }

    /// Design row without the intercept.
    pub fn design(self, scores: &FactorScores) -> Vec<f64> {
        let f = scores.to_array();
        TERMS[..self.n_coefficients()]
            .iter()
            .map(|term| term.iter().map(|&i| f[i]).product())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoglinearModel {
    pub variant: LoglinearVariant,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl LoglinearModel {
    pub fn zero(variant: LoglinearVariant) -> Self {
        LoglinearModel {
            variant,
            intercept: 0.0,
            coefficients: vec![0.0; variant.n_coefficients()],
        }
    }

    pub fn log_odds(&self, scores: &FactorScores) -> f64 {
        self.intercept
            + self
                .variant
                .design(scores)
                .iter()
                .zip(&self.coefficients)
                .map(|(x, b)| x * b)
                .sum::<f64>()
    }

    pub fn probability(&self, scores: &FactorScores) -> f64 {
        sigmoid(self.log_odds(scores))
    }

    fn from_theta(variant: LoglinearVariant, theta: &[f64]) -> Self {
        LoglinearModel {
            variant,
            intercept: theta[0],
            coefficients: theta[1..].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// L2 penalty on the non-intercept coefficients.
    pub l2: f64,
    /// Convergence threshold on the largest coefficient update.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            l2: 1e-4,
            tolerance: 1e-8,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub iterations: usize,
    pub gradient_norm: f64,
    pub objective: f64,
}

/// Design matrix rows with a leading 1 for the intercept.
pub fn design_matrix(scores: &[FactorScores], variant: LoglinearVariant) -> Vec<Vec<f64>> {
    scores
        .iter()
        .map(|s| {
            let mut row = Vec::with_capacity(variant.n_coefficients() + 1);
            row.push(1.0);
            row.extend(variant.design(s));
            row
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean log-likelihood minus `l2 / 2 * |beta|^2` (intercept unpenalized).
pub fn penalized_objective(theta: &[f64], design: &[Vec<f64>], labels: &[bool], l2: f64) -> f64 {
    let n = design.len() as f64;
    let ll: f64 = design
        .iter()
        .zip(labels)
        .map(|(x, &y)| {
            let z = dot(theta, x);
            if y {
                -softplus(-z)
            } else {
                -softplus(z)
            }
        })
        .sum();
    ll / n - 0.5 * l2 * theta[1..].iter().map(|b| b * b).sum::<f64>()
}

pub fn penalized_gradient(
    theta: &[f64],
    design: &[Vec<f64>],
    labels: &[bool],
    l2: f64,
) -> Vec<f64> {
    let n = design.len() as f64;
    let mut g = vec![0.0; theta.len()];
    for (x, &y) in design.iter().zip(labels) {
        let r = f64::from(u8::from(y)) - sigmoid(dot(theta, x));
        for (gj, xj) in g.iter_mut().zip(x) {
            *gj += r * xj;
        }
    }
    for (j, gj) in g.iter_mut().enumerate() {
        *gj /= n;
        if j > 0 {
            *gj -= l2 * theta[j];
        }
    }
    g
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn train_loglinear(
    scores: &[FactorScores],
    labels: &[bool],
    variant: LoglinearVariant,
    options: FitOptions,
) -> Result<(LoglinearModel, FitReport)> {
    if scores.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if scores.len() != labels.len() {
        return Err(Error::SchemaMismatch(format!(
            "{} score rows for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores
        .iter()
        .flat_map(|s| s.to_array())
        .any(|x| !x.is_finite())
    {
        return Err(Error::invalid("factor scores must be finite"));
    }
    let design = design_matrix(scores, variant);
    let k = variant.n_coefficients() + 1;
    let n = design.len() as f64;
    let mut theta = vec![0.0; k];
    let mut objective = penalized_objective(&theta, &design, labels, options.l2);

    for iteration in 1..=options.max_iterations {
        let grad = penalized_gradient(&theta, &design, labels, options.l2);
        // Negative Hessian of the penalized objective.
        let mut info = DMatrix::<f64>::zeros(k, k);
        for x in &design {
            let p = sigmoid(dot(&theta, x));
            let w = p * (1.0 - p) / n;
            for a in 0..k {
                let wa = w * x[a];
                for b in a..k {
                    info[(a, b)] += wa * x[b];
                }
            }
        }
        for a in 0..k {
            if a > 0 {
                info[(a, a)] += options.l2;
            }
            for b in 0..a {
                info[(a, b)] = info[(b, a)];
            }
        }
        let g = DVector::from_column_slice(&grad);
        let direction = match info.clone().cholesky() {
            Some(chol) => chol.solve(&g),
            None => {
                // Singular information matrix: fall back to a regularized solve.
                let ridge = info + DMatrix::identity(k, k) * 1e-8;
                ridge
                    .cholesky()
                    .map(|c| c.solve(&g))
                    .unwrap_or_else(|| g.clone())
            }
        };

        let mut step = 1.0;
        let mut candidate;
        let mut cand_obj;
        loop {
            candidate = theta
                .iter()
                .zip(direction.iter())
                .map(|(t, d)| t + step * d)
                .collect::<Vec<_>>();
            cand_obj = penalized_objective(&candidate, &design, labels, options.l2);
            if cand_obj >= objective || step < 1e-12 {
                break;
            }
            step *= 0.5;
        }
        let max_delta = candidate
            .iter()
            .zip(&theta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if cand_obj >= objective {
            theta = candidate;
            objective = cand_obj;
        }
        if max_delta < options.tolerance || step < 1e-12 {
            let gradient_norm = norm(&penalized_gradient(&theta, &design, labels, options.l2));
            return Ok((
                LoglinearModel::from_theta(variant, &theta),
                FitReport {
                    iterations: iteration,
                    gradient_norm,
                    objective,
                },
            ));
        }
    }
    Err(Error::NotConverged {
        iterations: options.max_iterations,
        gradient_norm: norm(&penalized_gradient(&theta, &design, labels, options.l2)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ColumnScale {
    column: usize,
    log: bool,
    mean: f64,
    sd: f64,
}

/// Collapses each factor group's numeric columns into one score: columns
/// are z-scored with training statistics (sensitivity columns on a log
/// scale) and averaged. A factor with no columns scores 0 and is reported
/// as absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorAggregator {
    n_columns: usize,
    factors: Vec<Vec<ColumnScale>>,
}

fn transform(x: f64, log: bool) -> f64 {
    if log {
        x.max(1e-12).ln()
    } else {
        x
    }
}

impl FactorAggregator {
    pub fn fit(train: &FeatureMatrix) -> Result<Self> {
        let mut factors = Vec::with_capacity(4);
        for group in FACTOR_ORDER {
            let log = group == FactorGroup::Sensitivity;
            let mut scales = Vec::new();
            for (c, col) in train.columns().iter().enumerate() {
                if col.group != group || !matches!(col.kind, ColumnKind::Numeric) {
                    continue;
                }
                let xs: Vec<f64> = train
                    .rows()
                    .iter()
                    .filter_map(|r| r[c].as_num())
                    .map(|x| transform(x, log))
                    .collect();
                if xs.is_empty() {
                    return Err(Error::AllMissing(col.name.clone()));
                }
                let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
                scales.push(ColumnScale {
                    column: c,
                    log,
                    mean,
                    sd: var.sqrt(),
                });
            }
            factors.push(scales);
        }
        Ok(FactorAggregator {
            n_columns: train.n_cols(),
            factors,
        })
    }

    pub fn present(&self) -> [bool; 4] {
        [0, 1, 2, 3].map(|i| !self.factors[i].is_empty())
    }

    pub fn scores(&self, row: &[Value]) -> Result<FactorScores> {
        if row.len() != self.n_columns {
            return Err(Error::SchemaMismatch(format!(
                "row has {} values, aggregator expects {}",
                row.len(),
                self.n_columns
            )));
        }
        let mut out = [0.0; 4];
        for (slot, scales) in out.iter_mut().zip(&self.factors) {
            if scales.is_empty() {
                continue;
            }
            let mut sum = 0.0;
            for s in scales {
                let x = match row[s.column] {
                    Value::Num(x) => transform(x, s.log),
                    _ => s.mean,
                };
                if s.sd > 0.0 {
                    sum += (x - s.mean) / s.sd;
                }
            }
            *slot = sum / scales.len() as f64;
        }
        Ok(FactorScores::new(out))
    }
}

/// Factor scores for every row of a matrix, with the aggregator fit on it.
pub fn aggregate_factors(matrix: &FeatureMatrix) -> Result<(FactorAggregator, Vec<FactorScores>)> {
    let agg = FactorAggregator::fit(matrix)?;
    let scores = matrix
        .rows()
        .iter()
        .map(|r| agg.scores(r))
        .collect::<Result<Vec<_>>>()?;
    Ok((agg, scores))
}

/// A loglinear model together with the aggregation that feeds it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoglinearClassifier {
    pub aggregator: FactorAggregator,
    pub model: LoglinearModel,
    pub fit: FitReport,
}

impl LoglinearClassifier {
    pub fn train(
        matrix: &FeatureMatrix,
        variant: LoglinearVariant,
        options: FitOptions,
    ) -> Result<Self> {
        let positives = matrix.labels().iter().filter(|&&l| l).count();
        if matrix.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if positives == 0 || positives == matrix.n_rows() {
            return Err(Error::SingleClass(matrix.n_rows()));
        }
        let (aggregator, scores) = aggregate_factors(matrix)?;
        let (model, fit) = train_loglinear(&scores, matrix.labels(), variant, options)?;
        Ok(LoglinearClassifier {
            aggregator,
            model,
            fit,
        })
    }

    pub fn score(&self, row: &[Value]) -> Result<f64> {
        Ok(self.model.probability(&self.aggregator.scores(row)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Column;

    #[test]
    fn zero_model_gives_half() {
        for variant in [LoglinearVariant::Additive, LoglinearVariant::FullFactorial] {
            let m = LoglinearModel::zero(variant);
            assert_eq!(
                m.probability(&FactorScores::new([0.3, -2.0, 5.0, 1.0])),
                0.5
            );
            assert_eq!(m.probability(&FactorScores::default()), 0.5);
        }
    }

    #[test]
    fn full_factorial_terms() {
        let s = FactorScores::new([2.0, 3.0, 5.0, 7.0]);
        let d = LoglinearVariant::FullFactorial.design(&s);
        assert_eq!(d.len(), 15);
        assert_eq!(
            d,
            vec![
                2.0, 3.0, 5.0, 7.0, 6.0, 10.0, 14.0, 15.0, 21.0, 35.0, 30.0, 42.0, 70.0, 105.0,
                210.0
            ]
        );
        assert_eq!(
            LoglinearVariant::Additive.design(&s),
            vec![2.0, 3.0, 5.0, 7.0]
        );
    }

    #[test]
    fn monotone_in_trust_with_positive_coefficient() {
        let m = LoglinearModel {
            variant: LoglinearVariant::Additive,
            intercept: 0.1,
            coefficients: vec![1.0, -1.0, 2.0, 0.5],
        };
        let mut prev = 0.0;
        for i in 0..50 {
            let t = -5.0 + i as f64 * 0.2;
            let p = m.probability(&FactorScores::new([0.3, 0.2, t, -0.4]));
            assert!(p >= prev);
            prev = p;
        }
    }

    #[test]
    fn separable_data_converges_with_penalty() {
        let scores: Vec<_> = (0..40)
            .map(|i| FactorScores::new([i as f64 / 10.0 - 2.0, 0.0, 0.0, 0.0]))
            .collect();
        let labels: Vec<bool> = (0..40).map(|i| i >= 20).collect();
        let (model, report) = train_loglinear(
            &scores,
            &labels,
            LoglinearVariant::Additive,
            FitOptions::default(),
        )
        .unwrap();
        assert!(model.coefficients[0] > 10.0);
        assert!(model.coefficients.iter().all(|b| b.is_finite()));
        assert!(report.gradient_norm < 1e-6);
    }

    #[test]
    fn aggregation_z_scores_and_averages() {
        let mut m = FeatureMatrix::new(vec![
            Column::numeric("a", FactorGroup::Tendency),
            Column::numeric("b", FactorGroup::Tendency),
            Column::numeric("s", FactorGroup::Sensitivity),
            Column::categorical("ctx", &["x"], FactorGroup::Context),
        ]);
        let e = std::f64::consts::E;
        m.push_row(
            vec![
                Value::Num(0.0),
                Value::Num(10.0),
                Value::Num(1.0),
                Value::Cat(0),
            ],
            true,
        )
        .unwrap();
        m.push_row(
            vec![
                Value::Num(2.0),
                Value::Num(10.0),
                Value::Num(e * e),
                Value::Cat(0),
            ],
            false,
        )
        .unwrap();
        let (agg, scores) = aggregate_factors(&m).unwrap();
        assert_eq!(agg.present(), [true, true, false, false]);
        // a: mean 1, sd 1 -> z = -1, +1; b constant -> 0. Average of two columns.
        assert!((scores[0].tendency + 0.5).abs() < 1e-12);
        assert!((scores[1].tendency - 0.5).abs() < 1e-12);
        // s on log scale: 0 and 2 -> z = -1, +1.
        assert!((scores[0].sensitivity + 1.0).abs() < 1e-12);
        assert!((scores[1].sensitivity - 1.0).abs() < 1e-12);
        assert_eq!(scores[0].trustworthiness, 0.0);
    }
}
