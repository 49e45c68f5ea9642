//! Sharing-probability features for location-sharing decisions.
//!
//! Every estimate is a Laplace-smoothed share rate `(shared + 1) / (n + 2)`
//! over the records of a training partition that match some attribute
//! values. Tables are only ever built from training rows, so held-out
//! labels never reach the features.

use std::collections::BTreeMap;
use std::fmt;

use crate::data::{
    AgeBucket, Audience, Column, Companion, Emotion, FactorGroup, FeatureMatrix, Gender,
    LocationRecord, LocationSemantic, Marriage, PrivacyLevel, TimeOfDay, Value,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attribute {
    Age,
    Gender,
    Marriage,
    PrivacyLevel,
    Location,
    Audience,
    Time,
    Companion,
    Emotion,
}

impl Attribute {
    pub const DEMOGRAPHIC: [Attribute; 4] = [
        Attribute::Age,
        Attribute::Gender,
        Attribute::Marriage,
        Attribute::PrivacyLevel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Age => AgeBucket::FIELD,
            Attribute::Gender => Gender::FIELD,
            Attribute::Marriage => Marriage::FIELD,
            Attribute::PrivacyLevel => PrivacyLevel::FIELD,
            Attribute::Location => LocationSemantic::FIELD,
            Attribute::Audience => Audience::FIELD,
            Attribute::Time => TimeOfDay::FIELD,
            Attribute::Companion => Companion::FIELD,
            Attribute::Emotion => Emotion::FIELD,
        }
    }

    /// Short form used in column names (`p_loc(time)`).
    fn short(self) -> &'static str {
        match self {
            Attribute::Location => "loc",
            Attribute::Audience => "V",
            other => other.name(),
        }
    }

    pub fn vocabulary(self) -> &'static [&'static str] {
        match self {
            Attribute::Age => AgeBucket::NAMES,
            Attribute::Gender => Gender::NAMES,
            Attribute::Marriage => Marriage::NAMES,
            Attribute::PrivacyLevel => PrivacyLevel::NAMES,
            Attribute::Location => LocationSemantic::NAMES,
            Attribute::Audience => Audience::NAMES,
            Attribute::Time => TimeOfDay::NAMES,
            Attribute::Companion => Companion::NAMES,
            Attribute::Emotion => Emotion::NAMES,
        }
    }

    /// The record's value, or `None` when its study design lacks the field.
    pub fn value(self, r: &LocationRecord) -> Option<&'static str> {
        match self {
            Attribute::Age => Some(r.age.as_str()),
            Attribute::Gender => Some(r.gender.as_str()),
            Attribute::Marriage => Some(r.marriage.as_str()),
            Attribute::PrivacyLevel => Some(r.privacy_level.as_str()),
            Attribute::Location => Some(r.location.as_str()),
            Attribute::Audience => Some(r.audience.as_str()),
            Attribute::Time => r.time.map(TimeOfDay::as_str),
            Attribute::Companion => r.companion.map(Companion::as_str),
            Attribute::Emotion => r.emotion.map(Emotion::as_str),
        }
    }

    fn check(self, value: &str) -> Result<&'static str> {
        self.vocabulary()
            .iter()
            .copied()
            .find(|v| *v == value)
            .ok_or_else(|| Error::Vocabulary {
                field: self.name().to_string(),
                value: value.to_string(),
            })
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const ANY: &str = "·";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Support {
    pub shared: usize,
    pub total: usize,
}

impl Support {
    pub fn probability(self) -> f64 {
        (self.shared + 1) as f64 / (self.total + 2) as f64
    }
}

/// Share counts keyed by (conditioner value, attribute value). Either side
/// may be absent, in which case its key is `·`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityTable {
    conditioner: Option<Attribute>,
    attribute: Option<Attribute>,
    counts: BTreeMap<(&'static str, &'static str), Support>,
}

impl ProbabilityTable {
    pub fn build<'a>(
        train: impl IntoIterator<Item = &'a LocationRecord>,
        conditioner: Option<Attribute>,
        attribute: Option<Attribute>,
    ) -> Self {
        let mut counts: BTreeMap<(&'static str, &'static str), Support> = BTreeMap::new();
        for r in train {
            let a = match conditioner {
                None => Some(ANY),
                Some(attr) => attr.value(r),
            };
            let q = match attribute {
                None => Some(ANY),
                Some(attr) => attr.value(r),
            };
            if let (Some(a), Some(q)) = (a, q) {
                let s = counts.entry((a, q)).or_default();
                s.total += 1;
                s.shared += usize::from(r.label);
            }
        }
        ProbabilityTable {
            conditioner,
            attribute,
            counts,
        }
    }

    pub fn conditioner(&self) -> Option<Attribute> {
        self.conditioner
    }

    pub fn attribute(&self) -> Option<Attribute> {
        self.attribute
    }

    fn key(&self, a: Option<&str>, q: Option<&str>) -> Result<(&'static str, &'static str)> {
        let side = |attr: Option<Attribute>, v: Option<&str>| -> Result<&'static str> {
            match (attr, v) {
                (None, _) => Ok(ANY),
                (Some(attr), Some(v)) => attr.check(v),
                (Some(attr), None) => {
                    Err(Error::invalid(format!("a value for {attr} is required")))
                }
            }
        };
        Ok((side(self.conditioner, a)?, side(self.attribute, q)?))
    }

    pub fn support(&self, a: Option<&str>, q: Option<&str>) -> Result<Support> {
        let key = self.key(a, q)?;
        Ok(self.counts.get(&key).copied().unwrap_or_default())
    }

    /// Smoothed share probability; 0.5 for unseen combinations.
    pub fn probability(&self, a: Option<&str>, q: Option<&str>) -> Result<f64> {
        Ok(self.support(a, q)?.probability())
    }

    /// Lookup for a record; `None` if the record lacks either field.
    fn lookup(&self, r: &LocationRecord) -> Option<f64> {
        let a = match self.conditioner {
            None => ANY,
            Some(attr) => attr.value(r)?,
        };
        let q = match self.attribute {
            None => ANY,
            Some(attr) => attr.value(r)?,
        };
        Some(
            self.counts
                .get(&(a, q))
                .copied()
                .unwrap_or_default()
                .probability(),
        )
    }
}

/// Share rate of training records with `attribute = value`, regardless of
/// audience, location or context.
pub fn overall_sharing_probability(
    train: &[LocationRecord],
    attribute: Attribute,
    value: &str,
) -> Result<f64> {
    if !Attribute::DEMOGRAPHIC.contains(&attribute) {
        return Err(Error::invalid(format!(
            "overall sharing probability is defined for age, gender, marriage and privacy_level, not {attribute}"
        )));
    }
    ProbabilityTable::build(train, None, Some(attribute)).probability(None, Some(value))
}

/// Share rate of training records with `conditioner = a` and
/// `attribute = q`.
pub fn conditional_sharing_probability(
    train: &[LocationRecord],
    conditioner: Attribute,
    a: &str,
    attribute: Attribute,
    q: &str,
) -> Result<f64> {
    if !matches!(conditioner, Attribute::Location | Attribute::Audience) {
        return Err(Error::invalid(format!(
            "{conditioner} cannot condition a share rate"
        )));
    }
    if !matches!(
        attribute,
        Attribute::Companion
            | Attribute::Emotion
            | Attribute::Time
            | Attribute::Location
            | Attribute::Audience
    ) || attribute == conditioner
    {
        return Err(Error::invalid(format!(
            "{attribute} is not a contextual attribute under {conditioner}"
        )));
    }
    ProbabilityTable::build(train, Some(conditioner), Some(attribute)).probability(Some(a), Some(q))
}

/// Share rate towards an audience across all training records.
pub fn audience_trustworthiness(train: &[LocationRecord], audience: Audience) -> f64 {
    ProbabilityTable::build(train, Some(Attribute::Audience), None)
        .probability(Some(audience.as_str()), None)
        .expect("audience names are always in vocabulary")
}

/// Share rate of a location across all training records. Higher means the
/// location is shared more readily, i.e. is less sensitive.
pub fn location_sensitivity(train: &[LocationRecord], location: &str) -> Result<f64> {
    ProbabilityTable::build(train, Some(Attribute::Location), None)
        .probability(Some(location), None)
}

/// The eight conditioner/attribute pairs used as contextual share rates.
pub const CONDITIONAL_PAIRS: [(Attribute, Attribute); 8] = [
    (Attribute::Location, Attribute::Companion),
    (Attribute::Location, Attribute::Emotion),
    (Attribute::Location, Attribute::Time),
    (Attribute::Audience, Attribute::Companion),
    (Attribute::Audience, Attribute::Emotion),
    (Attribute::Audience, Attribute::Time),
    (Attribute::Location, Attribute::Audience),
    (Attribute::Audience, Attribute::Location),
];

const CONTEXT_COLUMNS: [Attribute; 4] = [
    Attribute::Location,
    Attribute::Time,
    Attribute::Companion,
    Attribute::Emotion,
];

pub fn location_columns() -> Vec<Column> {
    let mut cols: Vec<Column> = Attribute::DEMOGRAPHIC
        .iter()
        .map(|a| Column::numeric(format!("p({a})"), FactorGroup::Tendency))
        .collect();
    cols.push(Column::numeric(
        "sensitivity(loc)",
        FactorGroup::Sensitivity,
    ));
    cols.extend(CONDITIONAL_PAIRS.iter().map(|(alpha, q)| {
        Column::numeric(
            format!("p_{}({})", alpha.short(), q.short()),
            FactorGroup::Appropriateness,
        )
    }));
    cols.extend(
        CONTEXT_COLUMNS
            .iter()
            .map(|a| Column::categorical(a.name(), a.vocabulary(), FactorGroup::Context)),
    );
    cols
}

/// All probability tables needed for one feature matrix, fit on a training
/// partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocationTables {
    overall: Vec<ProbabilityTable>,
    sensitivity: ProbabilityTable,
    conditional: Vec<ProbabilityTable>,
}

impl LocationTables {
    pub fn fit<'a>(train: impl IntoIterator<Item = &'a LocationRecord> + Clone) -> Self {
        LocationTables {
            overall: Attribute::DEMOGRAPHIC
                .iter()
                .map(|&a| ProbabilityTable::build(train.clone(), None, Some(a)))
                .collect(),
            sensitivity: ProbabilityTable::build(train.clone(), Some(Attribute::Location), None),
            conditional: CONDITIONAL_PAIRS
                .iter()
                .map(|&(alpha, q)| ProbabilityTable::build(train.clone(), Some(alpha), Some(q)))
                .collect(),
        }
    }

    pub fn tables(&self) -> impl Iterator<Item = &ProbabilityTable> {
        self.overall
            .iter()
            .chain(std::iter::once(&self.sensitivity))
            .chain(&self.conditional)
    }

    pub fn row(&self, r: &LocationRecord) -> Vec<Value> {
        let num = |p: Option<f64>| p.map_or(Value::Missing, Value::Num);
        let mut row: Vec<Value> = self.tables().map(|t| num(t.lookup(r))).collect();
        for attr in CONTEXT_COLUMNS {
            row.push(match attr.value(r) {
                None => Value::Missing,
                Some(v) => Value::Cat(
                    attr.vocabulary()
                        .iter()
                        .position(|x| *x == v)
                        .expect("record values come from the vocabulary")
                        as u32,
                ),
            });
        }
        row
    }
}

/// Feature matrix over `records` (all for `audience`), with every share
/// rate estimated from the rows listed in `train`.
pub fn build_location_features(
    records: &[LocationRecord],
    audience: Audience,
    train: &[usize],
) -> Result<FeatureMatrix> {
    if let Some(r) = records.iter().find(|r| r.audience != audience) {
        return Err(Error::invalid(format!(
            "record for audience {} in a {audience} dataset",
            r.audience
        )));
    }
    if train.is_empty() {
        return Err(Error::invalid("training partition is empty"));
    }
    if let Some(&i) = train.iter().find(|&&i| i >= records.len()) {
        return Err(Error::invalid(format!("training index {i} out of range")));
    }
    let tables = LocationTables::fit(train.iter().map(|&i| &records[i]));
    let mut m = FeatureMatrix::new(location_columns());
    for r in records {
        m.push_row(tables.row(r), r.label)?;
    }
    Ok(m)
}
