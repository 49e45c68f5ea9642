//! Adapted cross-validation: `repeats` independently undersampled balanced
//! datasets, each split into stratified folds, every fold trained and
//! scored once.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use super::metrics::{auc, Confusion};
use super::sampling::{stratified_folds, undersample_indices};
use crate::classifiers::{Learner, TrainedModel};
use crate::data::{Audience, Column, FactorGroup, FeatureMatrix, LocationRecord, Value};
use crate::error::{Error, Result};
use crate::location_features::{location_columns, LocationTables};

/// A dataset that can produce train/test matrices for any split of its
/// records. Anything fit on data (probability tables, for instance) must be
/// fit on the training records only.
pub trait FoldSource: Sync {
    fn labels(&self) -> &[bool];

    fn columns(&self) -> Vec<Column>;

    fn materialize(
        &self,
        train: &[usize],
        test: &[usize],
    ) -> Result<(FeatureMatrix, FeatureMatrix)>;
}

/// A precomputed matrix whose features involve no labels (OSN mode).
#[derive(Debug, Clone)]
pub struct MatrixSource {
    matrix: FeatureMatrix,
}

impl MatrixSource {
    pub fn new(matrix: FeatureMatrix) -> Self {
        MatrixSource { matrix }
    }

    pub fn matrix(&self) -> &FeatureMatrix {
        &self.matrix
    }
}

impl FoldSource for MatrixSource {
    fn labels(&self) -> &[bool] {
        self.matrix.labels()
    }

    fn columns(&self) -> Vec<Column> {
        self.matrix.columns().to_vec()
    }

    fn materialize(
        &self,
        train: &[usize],
        test: &[usize],
    ) -> Result<(FeatureMatrix, FeatureMatrix)> {
        Ok((
            self.matrix.select_rows(train),
            self.matrix.select_rows(test),
        ))
    }
}

/// Location records for one audience; share-rate tables are refit on each
/// training partition.
#[derive(Debug, Clone)]
pub struct LocationSource {
    records: Vec<LocationRecord>,
    labels: Vec<bool>,
}

impl LocationSource {
    pub fn new(records: &[LocationRecord], audience: Audience) -> Self {
        let records: Vec<LocationRecord> = records
            .iter()
            .filter(|r| r.audience == audience)
            .cloned()
            .collect();
        let labels = records.iter().map(|r| r.label).collect();
        LocationSource { records, labels }
    }

    pub fn records(&self) -> &[LocationRecord] {
        &self.records
    }
}

impl FoldSource for LocationSource {
    fn labels(&self) -> &[bool] {
        &self.labels
    }

    fn columns(&self) -> Vec<Column> {
        location_columns()
    }

    fn materialize(
        &self,
        train: &[usize],
        test: &[usize],
    ) -> Result<(FeatureMatrix, FeatureMatrix)> {
        if train.is_empty() {
            return Err(Error::invalid("training partition is empty"));
        }
        let tables = LocationTables::fit(train.iter().map(|&i| &self.records[i]));
        let build = |idx: &[usize]| -> Result<FeatureMatrix> {
            let mut m = FeatureMatrix::new(location_columns());
            for &i in idx {
                let r = &self.records[i];
                m.push_row(tables.row(r), r.label)?;
            }
            Ok(m)
        };
        Ok((build(train)?, build(test)?))
    }
}

/// Drops the columns of the given factor groups from another source.
pub struct Ablated<'a, S: ?Sized> {
    inner: &'a S,
    groups: Vec<FactorGroup>,
}

impl<'a, S: FoldSource + ?Sized> Ablated<'a, S> {
    pub fn new(inner: &'a S, groups: &[FactorGroup]) -> Result<Self> {
        if inner.columns().iter().all(|c| groups.contains(&c.group)) {
            return Err(Error::invalid(format!(
                "removing {groups:?} leaves no feature columns"
            )));
        }
        Ok(Ablated {
            inner,
            groups: groups.to_vec(),
        })
    }
}

impl<S: FoldSource + ?Sized> FoldSource for Ablated<'_, S> {
    fn labels(&self) -> &[bool] {
        self.inner.labels()
    }

    fn columns(&self) -> Vec<Column> {
        self.inner
            .columns()
            .into_iter()
            .filter(|c| !self.groups.contains(&c.group))
            .collect()
    }

    fn materialize(
        &self,
        train: &[usize],
        test: &[usize],
    ) -> Result<(FeatureMatrix, FeatureMatrix)> {
        let (a, b) = self.inner.materialize(train, test)?;
        Ok((
            a.without_groups(&self.groups)?,
            b.without_groups(&self.groups)?,
        ))
    }
}

/// Appends one fixed per-record column to another source.
pub struct ExtraColumn<'a, S: ?Sized> {
    inner: &'a S,
    column: Column,
    values: Vec<Value>,
}

impl<'a, S: FoldSource + ?Sized> ExtraColumn<'a, S> {
    pub fn new(inner: &'a S, column: Column, values: Vec<Value>) -> Result<Self> {
        if values.len() != inner.labels().len() {
            return Err(Error::SchemaMismatch(format!(
                "{} values for {} records",
                values.len(),
                inner.labels().len()
            )));
        }
        Ok(ExtraColumn {
            inner,
            column,
            values,
        })
    }
}

impl<S: FoldSource + ?Sized> FoldSource for ExtraColumn<'_, S> {
    fn labels(&self) -> &[bool] {
        self.inner.labels()
    }

    fn columns(&self) -> Vec<Column> {
        let mut cols = self.inner.columns();
        cols.push(self.column.clone());
        cols
    }

    fn materialize(
        &self,
        train: &[usize],
        test: &[usize],
    ) -> Result<(FeatureMatrix, FeatureMatrix)> {
        let (a, b) = self.inner.materialize(train, test)?;
        let pick = |idx: &[usize]| idx.iter().map(|&i| self.values[i]).collect::<Vec<_>>();
        Ok((
            a.with_column(self.column.clone(), &pick(train))?,
            b.with_column(self.column.clone(), &pick(test))?,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvConfig {
    pub repeats: usize,
    pub folds: usize,
    pub seed: u64,
    /// Worker threads for the independent runs.
    pub jobs: usize,
}

impl CvConfig {
    pub fn new(seed: u64) -> Self {
        CvConfig {
            repeats: 10,
            folds: 10,
            seed,
            jobs: 1,
        }
    }
}

/// One (train, test) evaluation. Indices refer to the source's records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub repeat: usize,
    pub fold: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// All splits of the protocol, ordered by (repeat, fold). Repeat `r` uses
/// run seed `seed ^ r` for both its undersample and its fold shuffle.
pub fn cv_splits(labels: &[bool], config: &CvConfig) -> Result<Vec<Split>> {
    if config.repeats == 0 {
        return Err(Error::invalid("repeats must be at least 1"));
    }
    let mut out = Vec::with_capacity(config.repeats * config.folds);
    for repeat in 0..config.repeats {
        let run_seed = config.seed ^ repeat as u64;
        let balanced = undersample_indices(labels, run_seed)?;
        let sub: Vec<bool> = balanced.iter().map(|&i| labels[i]).collect();
        let folds = stratified_folds(&sub, config.folds, run_seed)?;
        for (fold, test_pos) in folds.iter().enumerate() {
            let mut in_test = vec![false; balanced.len()];
            for &p in test_pos {
                in_test[p] = true;
            }
            let test = test_pos.iter().map(|&p| balanced[p]).collect();
            let train = (0..balanced.len())
                .filter(|&p| !in_test[p])
                .map(|p| balanced[p])
                .collect();
            out.push(Split {
                repeat,
                fold,
                train,
                test,
            });
        }
    }
    Ok(out)
}

/// Trains the model for one split.
pub fn train_split<S: FoldSource + ?Sized>(
    source: &S,
    learner: &Learner,
    split: &Split,
) -> Result<TrainedModel> {
    let (train, _) = source.materialize(&split.train, &[])?;
    learner.fit(&train)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub repeat: usize,
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub confusion: Confusion,
    pub f1: f64,
    pub f1_positive: f64,
    pub f1_negative: f64,
    pub auc: f64,
}

pub fn evaluate_split<S: FoldSource + ?Sized>(
    source: &S,
    learner: &Learner,
    split: &Split,
) -> Result<RunMetrics> {
    let (train, test) = source.materialize(&split.train, &split.test)?;
    let model = learner.fit(&train)?;
    let scores = test
        .rows()
        .iter()
        .map(|r| model.score(r))
        .collect::<Result<Vec<f64>>>()?;
    let predicted: Vec<bool> = scores.iter().map(|&s| s >= 0.5).collect();
    let confusion = Confusion::from_predictions(&predicted, test.labels())?;
    Ok(RunMetrics {
        repeat: split.repeat,
        fold: split.fold,
        train_size: split.train.len(),
        test_size: split.test.len(),
        confusion,
        f1: confusion.macro_f1(),
        f1_positive: confusion.positive_f1(),
        f1_negative: confusion.negative_f1(),
        auc: auc(&scores, test.labels())?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub learner: String,
    pub seed: u64,
    pub repeats: usize,
    pub folds: usize,
    /// Size of each balanced dataset.
    pub tuples: usize,
    pub mean_f1: f64,
    pub sd_f1: f64,
    pub mean_auc: f64,
    pub sd_auc: f64,
    pub runs: Vec<RunMetrics>,
}

impl EvalResult {
    pub fn run_count(&self) -> usize {
        self.runs.len()
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let mean = xs.mean();
    let sd = if xs.len() > 1 { xs.std_dev() } else { 0.0 };
    (mean, sd)
}

pub fn adapted_cv<S: FoldSource + ?Sized>(
    source: &S,
    learner: &Learner,
    config: &CvConfig,
) -> Result<EvalResult> {
    let splits = cv_splits(source.labels(), config)?;
    let tuples = splits[0].train.len() + splits[0].test.len();
    let runs: Vec<RunMetrics> = if config.jobs <= 1 {
        splits
            .iter()
            .map(|s| evaluate_split(source, learner, s))
            .collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
        pool.install(|| {
            splits
                .par_iter()
                .map(|s| evaluate_split(source, learner, s))
                .collect::<Result<_>>()
        })?
    };
    let f1s: Vec<f64> = runs.iter().map(|r| r.f1).collect();
    let aucs: Vec<f64> = runs.iter().map(|r| r.auc).collect();
    let (mean_f1, sd_f1) = mean_sd(&f1s);
    let (mean_auc, sd_auc) = mean_sd(&aucs);
    Ok(EvalResult {
        learner: learner.name().to_string(),
        seed: config.seed,
        repeats: config.repeats,
        folds: config.folds,
        tuples,
        mean_f1,
        sd_f1,
        mean_auc,
        sd_auc,
        runs,
    })
}
