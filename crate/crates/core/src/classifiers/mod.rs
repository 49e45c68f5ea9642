//! Binary disclosure classifiers and a uniform prediction surface.

pub mod bayes;
pub mod loglinear;
pub mod missing;
pub mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{Column, FeatureMatrix, Value};
use crate::error::{Error, Result};

pub use bayes::{train_naive_bayes, FeatureLikelihood, NaiveBayesModel};
pub use loglinear::{
    aggregate_factors, train_loglinear, FactorAggregator, FactorScores, FitOptions, FitReport,
    LoglinearClassifier, LoglinearModel, LoglinearVariant,
};
pub use missing::{replace_missing, MissingFilter};
pub use tree::{train_decision_tree, Node, TreeModel, TreeParams};

/// A learning algorithm with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "kebab-case")]
pub enum Learner {
    Tree(TreeParams),
    #[serde(rename = "nb")]
    NaiveBayes,
    LoglinearAdditive,
    LoglinearFull,
}

impl Default for Learner {
    fn default() -> Self {
        Learner::Tree(TreeParams::default())
    }
}

impl Learner {
    pub fn name(&self) -> &'static str {
        match self {
            Learner::Tree(_) => "tree",
            Learner::NaiveBayes => "nb",
            Learner::LoglinearAdditive => "loglinear-additive",
            Learner::LoglinearFull => "loglinear-full",
        }
    }

    /// Fits the missing-value filter on `train`, then the model on the
    /// filtered rows.
    pub fn fit(&self, train: &FeatureMatrix) -> Result<TrainedModel> {
        if train.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let positives = train.labels().iter().filter(|&&l| l).count();
        if positives == 0 || positives == train.n_rows() {
            return Err(Error::SingleClass(train.n_rows()));
        }
        let filter = MissingFilter::fit(train)?;
        let filled = filter.apply(train)?;
        let model = match self {
            Learner::Tree(params) => Model::Tree(train_decision_tree(&filled, *params)?),
            Learner::NaiveBayes => Model::NaiveBayes(train_naive_bayes(&filled)?),
            Learner::LoglinearAdditive => Model::Loglinear(LoglinearClassifier::train(
                &filled,
                LoglinearVariant::Additive,
                FitOptions::default(),
            )?),
            Learner::LoglinearFull => Model::Loglinear(LoglinearClassifier::train(
                &filled,
                LoglinearVariant::FullFactorial,
                FitOptions::default(),
            )?),
        };
        Ok(TrainedModel {
            columns: train.columns().to_vec(),
            filter,
            model,
        })
    }
}

impl fmt::Display for Learner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Learner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(Learner::Tree(TreeParams::default())),
            "nb" => Ok(Learner::NaiveBayes),
            "loglinear-additive" => Ok(Learner::LoglinearAdditive),
            "loglinear-full" => Ok(Learner::LoglinearFull),
            other => Err(Error::invalid(format!(
                "unknown learner '{other}' (expected tree, nb, loglinear-additive or loglinear-full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Tree(TreeModel),
    NaiveBayes(NaiveBayesModel),
    Loglinear(LoglinearClassifier),
}

/// A fitted model together with the schema and missing-value filter it was
/// trained with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub columns: Vec<Column>,
    pub filter: MissingFilter,
    pub model: Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: bool,
    /// Positive-class probability.
    pub score: f64,
}

impl TrainedModel {
    pub fn score(&self, row: &[Value]) -> Result<f64> {
        if row.len() != self.columns.len() {
            return Err(Error::SchemaMismatch(format!(
                "row has {} values, model expects {}",
                row.len(),
                self.columns.len()
            )));
        }
        let mut filled = row.to_vec();
        self.filter.apply_row(&mut filled);
        match &self.model {
            Model::Tree(m) => m.score(&filled),
            Model::NaiveBayes(m) => m.score(&filled),
            Model::Loglinear(m) => m.score(&filled),
        }
    }

    pub fn predict(&self, row: &[Value]) -> Result<Prediction> {
        let score = self.score(row)?;
        Ok(Prediction {
            label: score >= 0.5,
            score,
        })
    }

    /// Checks that `matrix` has the columns this model was trained on.
    pub fn check_schema(&self, matrix: &FeatureMatrix) -> Result<()> {
        if matrix.columns() != self.columns.as_slice() {
            return Err(Error::SchemaMismatch(
                "matrix columns differ from the model's training schema".into(),
            ));
        }
        Ok(())
    }
}

pub fn predict(model: &TrainedModel, row: &[Value]) -> Result<Prediction> {
    model.predict(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FactorGroup;

    fn separable() -> FeatureMatrix {
        let mut m = FeatureMatrix::new(vec![
            Column::numeric("t", FactorGroup::Trustworthiness),
            Column::numeric("a", FactorGroup::Appropriateness),
        ]);
        for i in 0..40 {
            let x = i as f64 / 40.0;
            let v = if i % 7 == 0 {
                Value::Missing
            } else {
                Value::Num(x)
            };
            m.push_row(vec![Value::Num(x), v], i >= 20).unwrap();
        }
        m
    }

    #[test]
    fn learner_names_round_trip() {
        for name in ["tree", "nb", "loglinear-additive", "loglinear-full"] {
            assert_eq!(name.parse::<Learner>().unwrap().name(), name);
        }
        assert!("svm".parse::<Learner>().is_err());
    }

    #[test]
    fn every_learner_fits_and_predicts() {
        let m = separable();
        for name in ["tree", "nb", "loglinear-additive", "loglinear-full"] {
            let model = name.parse::<Learner>().unwrap().fit(&m).unwrap();
            let hi = model.predict(&[Value::Num(0.95), Value::Missing]).unwrap();
            let lo = model
                .predict(&[Value::Num(0.05), Value::Num(0.05)])
                .unwrap();
            assert!(hi.label && !lo.label, "{name}");
            assert!((0.0..=1.0).contains(&hi.score));
        }
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let model = Learner::NaiveBayes.fit(&separable()).unwrap();
        assert!(matches!(
            model.predict(&[Value::Num(1.0)]),
            Err(Error::SchemaMismatch(_))
        ));
    }
}
