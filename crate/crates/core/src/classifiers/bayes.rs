//! Naive Bayes with Gaussian numeric likelihoods and Laplace-smoothed
//! categorical tables.

use serde::{Deserialize, Serialize};

use crate::data::{ColumnKind, FeatureMatrix, Value};
use crate::error::{Error, Result};

pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Per-class parameters of one feature; index 0 is the negative class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureLikelihood {
    Gaussian { mean: [f64; 2], variance: [f64; 2] },
    Categorical { probabilities: [Vec<f64>; 2] },
}

impl FeatureLikelihood {
    fn log_likelihood(&self, class: usize, value: Value) -> f64 {
        match (self, value) {
            (FeatureLikelihood::Gaussian { mean, variance }, Value::Num(x)) => {
                let var = variance[class];
                let d = x - mean[class];
                -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var)
            }
            (FeatureLikelihood::Categorical { probabilities }, Value::Cat(level)) => probabilities
                [class]
                .get(level as usize)
                .map_or(0.0, |p| p.ln()),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    pub priors: [f64; 2],
    pub features: Vec<FeatureLikelihood>,
}

pub fn train_naive_bayes(matrix: &FeatureMatrix) -> Result<NaiveBayesModel> {
    if matrix.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut class_n = [0usize; 2];
    for &l in matrix.labels() {
        class_n[usize::from(l)] += 1;
    }
    if class_n[0] == 0 || class_n[1] == 0 {
        return Err(Error::SingleClass(matrix.n_rows()));
    }
    let n = matrix.n_rows() as f64;
    let priors = [class_n[0] as f64 / n, class_n[1] as f64 / n];

    let mut features = Vec::with_capacity(matrix.n_cols());
    for (c, col) in matrix.columns().iter().enumerate() {
        let feature = match &col.kind {
            ColumnKind::Numeric => {
                let mut sum = [0.0; 2];
                let mut count = [0.0; 2];
                for (row, &l) in matrix.rows().iter().zip(matrix.labels()) {
                    if let Value::Num(x) = row[c] {
                        sum[usize::from(l)] += x;
                        count[usize::from(l)] += 1.0;
                    }
                }
                let mean = [0, 1].map(|k| {
                    if count[k] > 0.0 {
                        sum[k] / count[k]
                    } else {
                        0.0
                    }
                });
                let mut ss = [0.0; 2];
                for (row, &l) in matrix.rows().iter().zip(matrix.labels()) {
                    if let Value::Num(x) = row[c] {
                        let k = usize::from(l);
                        ss[k] += (x - mean[k]).powi(2);
                    }
                }
                let variance = [0, 1].map(|k| {
                    let v = if count[k] > 0.0 {
                        ss[k] / count[k]
                    } else {
                        0.0
                    };
                    v.max(VARIANCE_FLOOR)
                });
                FeatureLikelihood::Gaussian { mean, variance }
            }
            ColumnKind::Categorical { levels } => {
                let mut counts = [vec![0.0; levels.len()], vec![0.0; levels.len()]];
                for (row, &l) in matrix.rows().iter().zip(matrix.labels()) {
                    if let Value::Cat(level) = row[c] {
                        counts[usize::from(l)][level as usize] += 1.0;
                    }
                }
                let probabilities = counts.map(|cs| {
                    let total: f64 = cs.iter().sum();
                    let denom = total + levels.len() as f64;
                    cs.iter().map(|x| (x + 1.0) / denom).collect()
                });
                FeatureLikelihood::Categorical { probabilities }
            }
        };
        features.push(feature);
    }
    Ok(NaiveBayesModel { priors, features })
}

impl NaiveBayesModel {
    /// Posterior class probabilities `[negative, positive]`. Missing values
    /// contribute nothing.
    pub fn posterior(&self, row: &[Value]) -> Result<[f64; 2]> {
        if row.len() != self.features.len() {
            return Err(Error::SchemaMismatch(format!(
                "row has {} values, model expects {}",
                row.len(),
                self.features.len()
            )));
        }
        let log = [0, 1].map(|k| {
            self.priors[k].ln()
                + self
                    .features
                    .iter()
                    .zip(row)
                    .map(|(f, &v)| f.log_likelihood(k, v))
                    .sum::<f64>()
        });
        let max = log[0].max(log[1]);
        let e = log.map(|l| (l - max).exp());
        let z = e[0] + e[1];
        Ok([e[0] / z, e[1] / z])
    }

    pub fn score(&self, row: &[Value]) -> Result<f64> {
        Ok(self.posterior(row)?[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, FactorGroup};

    #[test]
    fn uninformative_features_give_half() {
        let mut m = FeatureMatrix::new(vec![Column::numeric("x", FactorGroup::Tendency)]);
        for i in 0..10 {
            let x = (i % 5) as f64;
            m.push_row(vec![Value::Num(x)], false).unwrap();
            m.push_row(vec![Value::Num(x)], true).unwrap();
        }
        let nb = train_naive_bayes(&m).unwrap();
        for x in [0.0, 2.0, 3.5] {
            assert!((nb.score(&[Value::Num(x)]).unwrap() - 0.5).abs() < 0.01);
        }
        let post = nb.posterior(&[Value::Num(1.0)]).unwrap();
        assert!((post[0] + post[1] - 1.0).abs() < 1e-12);
    }

    /// Rows: (a, +), (a, +), (b, -), (a, -). Levels [a, b].
    /// P(+) = 1/2, P(a|+) = (2+1)/(2+2) = 3/4, P(a|-) = (1+1)/(2+2) = 1/2.
    /// P(+|a) = (1/2 * 3/4) / (1/2 * 3/4 + 1/2 * 1/2) = 3/5.
    /// P(b|+) = 1/4, P(b|-) = 1/2, so P(+|b) = 1/3.
    #[test]
    fn categorical_posterior_matches_hand_computation() {
        let mut m = FeatureMatrix::new(vec![Column::categorical(
            "c",
            &["a", "b"],
            FactorGroup::Context,
        )]);
        for (level, label) in [(0, true), (0, true), (1, false), (0, false)] {
            m.push_row(vec![Value::Cat(level)], label).unwrap();
        }
        let nb = train_naive_bayes(&m).unwrap();
        assert!((nb.score(&[Value::Cat(0)]).unwrap() - 0.6).abs() < 1e-12);
        assert!((nb.score(&[Value::Cat(1)]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((nb.score(&[Value::Missing]).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_column_within_class_uses_floor() {
        let mut m = FeatureMatrix::new(vec![Column::numeric("x", FactorGroup::Tendency)]);
        m.push_row(vec![Value::Num(1.0)], true).unwrap();
        m.push_row(vec![Value::Num(1.0)], true).unwrap();
        m.push_row(vec![Value::Num(0.0)], false).unwrap();
        let nb = train_naive_bayes(&m).unwrap();
        match &nb.features[0] {
            FeatureLikelihood::Gaussian { variance, .. } => {
                assert_eq!(*variance, [VARIANCE_FLOOR, VARIANCE_FLOOR])
            }
            _ => unreachable!(),
        }
        assert!(nb.score(&[Value::Num(1.0)]).unwrap() > 0.999);
        assert!(nb.score(&[Value::Num(1.0)]).unwrap().is_finite());
    }

    #[test]
    fn single_class_rejected() {
        let mut m = FeatureMatrix::new(vec![Column::numeric("x", FactorGroup::Tendency)]);
        m.push_row(vec![Value::Num(1.0)], true).unwrap();
        assert!(matches!(train_naive_bayes(&m), Err(Error::SingleClass(1))));
    }
}
