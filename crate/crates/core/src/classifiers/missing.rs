//! Missing-value replacement fit on a training partition.

use serde::{Deserialize, Serialize};

use crate::data::{FeatureMatrix, Value};
use crate::error::{Error, Result};

/// Per-column fill values: the training mean for numeric columns, the
/// training mode for categorical ones (ties go to the lexicographically
/// smallest level name).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingFilter {
    fill: Vec<Value>,
}

impl MissingFilter {
    pub fn fit(train: &FeatureMatrix) -> Result<Self> {
        let mut fill = Vec::with_capacity(train.n_cols());
        for (c, col) in train.columns().iter().enumerate() {
            let present = train
                .rows()
                .iter()
                .map(|r| r[c])
                .filter(|v| !v.is_missing());
            let value = if col.is_numeric() {
                let (sum, n) = present.fold((0.0, 0usize), |(s, n), v| {
                    (s + v.as_num().unwrap_or(0.0), n + 1)
                });
                (n > 0).then(|| Value::Num(sum / n as f64))
            } else {
                let levels = col.levels();
                let mut counts = vec![0usize; levels.len()];
                for v in present {
                    if let Value::Cat(i) = v {
                        counts[i as usize] += 1;
                    }
                }
                (0..levels.len())
                    .filter(|&i| counts[i] > 0)
                    .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(levels[b].cmp(&levels[a])))
                    .map(|i| Value::Cat(i as u32))
            };
            fill.push(value.ok_or_else(|| Error::AllMissing(col.name.clone()))?);
        }
        Ok(MissingFilter { fill })
    }

    pub fn fill_values(&self) -> &[Value] {
        &self.fill
    }

    pub fn apply_row(&self, row: &mut [Value]) {
        for (v, f) in row.iter_mut().zip(&self.fill) {
            if v.is_missing() {
                *v = *f;
            }
        }
    }

    pub fn apply(&self, matrix: &FeatureMatrix) -> Result<FeatureMatrix> {
        if matrix.n_cols() != self.fill.len() {
            return Err(Error::SchemaMismatch(format!(
                "filter fit on {} columns applied to {}",
                self.fill.len(),
                matrix.n_cols()
            )));
        }
        let mut out = matrix.clone();
        for row in out.rows_mut() {
            self.apply_row(row);
        }
        Ok(out)
    }
}

/// Fits the filter on `matrix` and applies it to the same rows.
pub fn replace_missing(matrix: &FeatureMatrix) -> Result<FeatureMatrix> {
    MissingFilter::fit(matrix)?.apply(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Column, FactorGroup};

    fn matrix(col: Column, values: Vec<Value>) -> FeatureMatrix {
        let mut m = FeatureMatrix::new(vec![col]);
        for v in values {
            m.push_row(vec![v], false).unwrap();
        }
        m
    }

    #[test]
    fn numeric_mean() {
        let m = matrix(
            Column::numeric("x", FactorGroup::Tendency),
            vec![
                Value::Num(1.0),
                Value::Num(2.0),
                Value::Missing,
                Value::Num(3.0),
            ],
        );
        let out = replace_missing(&m).unwrap();
        assert_eq!(out.row(2), &[Value::Num(2.0)]);
    }

    #[test]
    fn categorical_mode() {
        let m = matrix(
            Column::categorical("c", &["a", "b"], FactorGroup::Context),
            vec![Value::Cat(0), Value::Cat(0), Value::Cat(1), Value::Missing],
        );
        assert_eq!(replace_missing(&m).unwrap().row(3), &[Value::Cat(0)]);

        // Tie goes to the lexicographically smaller level name.
        let m = matrix(
            Column::categorical("c", &["zeta", "alpha"], FactorGroup::Context),
            vec![Value::Cat(0), Value::Cat(1), Value::Missing],
        );
        assert_eq!(replace_missing(&m).unwrap().row(2), &[Value::Cat(1)]);
    }

    #[test]
    fn complete_matrix_is_unchanged() {
        let m = matrix(
            Column::numeric("x", FactorGroup::Tendency),
            vec![Value::Num(1.0), Value::Num(5.0)],
        );
        assert_eq!(replace_missing(&m).unwrap(), m);
    }

    #[test]
    fn all_missing_column_is_named() {
        let m = matrix(
            Column::numeric("p_loc(emotion)", FactorGroup::Appropriateness),
            vec![Value::Missing, Value::Missing],
        );
        match replace_missing(&m) {
            Err(Error::AllMissing(name)) => assert_eq!(name, "p_loc(emotion)"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn statistics_come_from_training_rows_only() {
        let train = matrix(
            Column::numeric("x", FactorGroup::Tendency),
            vec![Value::Num(10.0), Value::Num(20.0)],
        );
        let test = matrix(
            Column::numeric("x", FactorGroup::Tendency),
            vec![Value::Num(1000.0), Value::Missing],
        );
        let f = MissingFilter::fit(&train).unwrap();
        assert_eq!(f.apply(&test).unwrap().row(1), &[Value::Num(15.0)]);
    }
}
