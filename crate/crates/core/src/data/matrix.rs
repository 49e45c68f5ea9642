//! Feature matrices whose columns are tagged with the factor they measure.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five factor groups a feature column can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorGroup {
    Trustworthiness,
    Tendency,
    Sensitivity,
    Appropriateness,
    Context,
}

impl FactorGroup {
    pub const ALL: [FactorGroup; 5] = [
        FactorGroup::Trustworthiness,
        FactorGroup::Tendency,
        FactorGroup::Sensitivity,
        FactorGroup::Appropriateness,
        FactorGroup::Context,
    ];

    /// Position of the group in ablation tables, 1 through 5.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FactorGroup::Trustworthiness => "trustworthiness",
            FactorGroup::Tendency => "tendency",
            FactorGroup::Sensitivity => "sensitivity",
            FactorGroup::Appropriateness => "appropriateness",
            FactorGroup::Context => "context",
        }
    }
}

impl fmt::Display for FactorGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FactorGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FactorGroup::ALL
            .into_iter()
            .find(|g| g.as_str() == s || g.number().to_string() == s)
            .ok_or_else(|| Error::Vocabulary {
                field: "factor group".into(),
                value: s.into(),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical { levels: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(flatten)]
    pub kind: ColumnKind,
    pub group: FactorGroup,
}

impl Column {
    pub fn numeric(name: impl Into<String>, group: FactorGroup) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Numeric,
            group,
        }
    }

    pub fn categorical(name: impl Into<String>, levels: &[&str], group: FactorGroup) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Categorical {
                levels: levels.iter().map(|s| s.to_string()).collect(),
            },
            group,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.kind, ColumnKind::Numeric)
    }

    pub fn levels(&self) -> &[String] {
        match &self.kind {
            ColumnKind::Numeric => &[],
            ColumnKind::Categorical { levels } => levels,
        }
    }
}

/// A single cell. `Missing` is the explicit missing marker and never
/// compares equal to a present value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Num(f64),
    /// Index into the column's level list.
    Cat(u32),
    Missing,
}

impl Value {
    pub fn is_missing(self) -> bool {
        matches!(self, Value::Missing)
    }

    pub fn as_num(self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    columns: Vec<Column>,
    rows: Vec<Vec<Value>>,
    labels: Vec<bool>,
}

impl FeatureMatrix {
    pub fn new(columns: Vec<Column>) -> Self {
        FeatureMatrix {
            columns,
            rows: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.rows[i]
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Checks a row against the column schema.
    pub fn check_row(&self, row: &[Value]) -> Result<()> {
        check_row(&self.columns, row)
    }

    pub fn push_row(&mut self, row: Vec<Value>, label: bool) -> Result<()> {
        self.check_row(&row)?;
        self.rows.push(row);
        self.labels.push(label);
        Ok(())
    }

    pub fn set_labels(&mut self, labels: Vec<bool>) -> Result<()> {
        if labels.len() != self.rows.len() {
            return Err(Error::SchemaMismatch(format!(
                "{} labels for {} rows",
                labels.len(),
                self.rows.len()
            )));
        }
        self.labels = labels;
        Ok(())
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [Vec<Value>] {
        &mut self.rows
    }

    /// Rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn groups_present(&self) -> Vec<FactorGroup> {
        FactorGroup::ALL
            .into_iter()
            .filter(|g| self.columns.iter().any(|c| c.group == *g))
            .collect()
    }

    /// Drops every column whose group is in `groups`.
    pub fn without_groups(&self, groups: &[FactorGroup]) -> Result<FeatureMatrix> {
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&c| !groups.contains(&self.columns[c].group))
            .collect();
        if keep.is_empty() {
            return Err(Error::invalid(format!(
                "removing {groups:?} leaves no feature columns"
            )));
        }
        Ok(FeatureMatrix {
            columns: keep.iter().map(|&c| self.columns[c].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| keep.iter().map(|&c| r[c]).collect())
                .collect(),
            labels: self.labels.clone(),
        })
    }

    /// Appends a column with the given per-row values.
    pub fn with_column(&self, column: Column, values: &[Value]) -> Result<FeatureMatrix> {
        if values.len() != self.rows.len() {
            return Err(Error::SchemaMismatch(format!(
                "{} values for {} rows",
                values.len(),
                self.rows.len()
            )));
        }
        let mut columns = self.columns.clone();
        columns.push(column);
        let rows = self
            .rows
            .iter()
            .zip(values)
            .map(|(r, v)| {
                let mut r = r.clone();
                r.push(*v);
                r
            })
            .collect::<Vec<_>>();
        for r in &rows {
            check_row(&columns, r)?;
        }
        Ok(FeatureMatrix {
            columns,
            rows,
            labels: self.labels.clone(),
        })
    }

    /// CSV with a header row of column names plus `label`; missing cells are
    /// empty fields.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        header.push("label");
        w.write_record(&header)?;
        for (row, &label) in self.rows.iter().zip(&self.labels) {
            let mut fields: Vec<String> = row
                .iter()
                .zip(&self.columns)
                .map(|(v, c)| match v {
                    Value::Num(x) => x.to_string(),
                    Value::Cat(i) => c.levels()[*i as usize].clone(),
                    Value::Missing => String::new(),
                })
                .collect();
            fields.push(if label { "1" } else { "0" }.to_string());
            w.write_record(&fields)?;
        }
        w.flush().map_err(|e| Error::io("<matrix output>", e))?;
        Ok(())
    }

    pub fn write_schema(&self, out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(out, &MatrixSchema::new(self.columns.clone()))?;
        Ok(())
    }

    pub fn read_csv(reader: impl Read, schema: &MatrixSchema) -> Result<FeatureMatrix> {
        let columns = schema.columns.clone();
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let header = csv.headers()?.clone();
        let expected: Vec<&str> = columns
            .iter()
            .map(|c| c.name.as_str())
            .chain(std::iter::once("label"))
            .collect();
        if header.iter().ne(expected.iter().copied()) {
            return Err(Error::Schema {
                line: 1,
                message: "CSV header does not match the column schema".into(),
            });
        }
        let mut m = FeatureMatrix::new(columns);
        for rec in csv.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let mut row = Vec::with_capacity(m.columns.len());
            for (field, col) in rec.iter().zip(&m.columns) {
                let v = if field.is_empty() {
                    Value::Missing
                } else if col.is_numeric() {
                    Value::Num(field.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("'{field}' is not a number in column '{}'", col.name),
                    })?)
                } else {
                    let idx = col
                        .levels()
                        .iter()
                        .position(|l| l == field)
                        .ok_or_else(|| Error::Vocabulary {
                            field: col.name.clone(),
                            value: field.to_string(),
                        })?;
                    Value::Cat(idx as u32)
                };
                row.push(v);
            }
            let label = match rec.get(m.columns.len()) {
                Some("1") => true,
                Some("0") => false,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("bad label {other:?}"),
                    })
                }
            };
            m.push_row(row, label)?;
        }
        Ok(m)
    }
}

fn check_row(columns: &[Column], row: &[Value]) -> Result<()> {
    if row.len() != columns.len() {
        return Err(Error::SchemaMismatch(format!(
            "row has {} values, schema has {} columns",
            row.len(),
            columns.len()
        )));
    }
    for (v, c) in row.iter().zip(columns) {
        let ok = match (v, &c.kind) {
            (Value::Missing, _) => true,
            (Value::Num(x), ColumnKind::Numeric) => x.is_finite(),
            (Value::Cat(i), ColumnKind::Categorical { levels }) => (*i as usize) < levels.len(),
            _ => false,
        };
        if !ok {
            return Err(Error::SchemaMismatch(format!(
                "value {v:?} does not fit column '{}'",
                c.name
            )));
        }
    }
    Ok(())
}

/// Sidecar describing each column's kind and factor group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSchema {
    pub format_version: u64,
    pub columns: Vec<Column>,
}

impl MatrixSchema {
    pub const FORMAT_VERSION: u64 = 1;

    pub fn new(columns: Vec<Column>) -> Self {
        MatrixSchema {
            format_version: Self::FORMAT_VERSION,
            columns,
        }
    }

    pub fn read(reader: impl Read) -> Result<Self> {
        let schema: MatrixSchema = serde_json::from_reader(reader)?;
        if schema.format_version != Self::FORMAT_VERSION {
            return Err(Error::IncompatibleVersion {
                found: schema.format_version,
                expected: Self::FORMAT_VERSION,
            });
        }
        Ok(schema)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FeatureMatrix {
        let mut m = FeatureMatrix::new(vec![
            Column::numeric("trust", FactorGroup::Trustworthiness),
            Column::numeric("s_url", FactorGroup::Sensitivity),
            Column::numeric("s_geo", FactorGroup::Sensitivity),
            Column::categorical("loc", &["Bar", "Spa"], FactorGroup::Context),
        ]);
        m.push_row(
            vec![
                Value::Num(0.25),
                Value::Num(4.0),
                Value::Missing,
                Value::Cat(1),
            ],
            true,
        )
        .unwrap();
        m.push_row(
            vec![
                Value::Num(0.1),
                Value::Num(1.5),
                Value::Num(2.0),
                Value::Missing,
            ],
            false,
        )
        .unwrap();
        m
    }

    #[test]
    fn arity_is_enforced() {
        let mut m = sample();
        assert!(m.push_row(vec![Value::Num(1.0)], true).is_err());
        assert!(m
            .push_row(
                vec![
                    Value::Num(1.0),
                    Value::Num(1.0),
                    Value::Num(1.0),
                    Value::Cat(7)
                ],
                true
            )
            .is_err());
    }

    #[test]
    fn dropping_a_group_removes_exactly_its_columns() {
        let m = sample()
            .without_groups(&[FactorGroup::Sensitivity])
            .unwrap();
        let names: Vec<_> = m.columns().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["trust", "loc"]);
        assert_eq!(m.row(0), &[Value::Num(0.25), Value::Cat(1)]);
        assert!(sample().without_groups(&FactorGroup::ALL).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let m = sample();
        let mut csv = Vec::new();
        m.write_csv(&mut csv).unwrap();
        let mut schema = Vec::new();
        m.write_schema(&mut schema).unwrap();
        let schema = MatrixSchema::read(schema.as_slice()).unwrap();
        let back = FeatureMatrix::read_csv(csv.as_slice(), &schema).unwrap();
        assert_eq!(back, m);
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().next().unwrap(), "trust,s_url,s_geo,loc,label");
        assert_eq!(text.lines().nth(1).unwrap(), "0.25,4,,Spa,1");
    }
}
