//! Location-sharing survey records and their CSV form.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::vocab::*;
use crate::error::{Error, Result};

pub const LOCATION_CSV_HEADER: [&str; 11] = [
    "participant",
    "age",
    "gender",
    "marriage",
    "privacy_level",
    "location",
    "time",
    "companion",
    "emotion",
    "audience",
    "label",
];

/// The five survey designs, identified by which contextual fields accompany
/// the location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StudyDesign {
    /// Study 1: location only.
    Location,
    /// Study 2: location + time.
    LocationTime,
    /// Study 3: location + companion.
    LocationCompanion,
    /// Study 4: location + time + companion.
    LocationTimeCompanion,
    /// Study 5: location + emotion.
    LocationEmotion,
}

impl StudyDesign {
    pub const ALL: [StudyDesign; 5] = [
        StudyDesign::Location,
        StudyDesign::LocationTime,
        StudyDesign::LocationCompanion,
        StudyDesign::LocationTimeCompanion,
        StudyDesign::LocationEmotion,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_context(time: bool, companion: bool, emotion: bool) -> Option<Self> {
        match (time, companion, emotion) {
            (false, false, false) => Some(StudyDesign::Location),
            (true, false, false) => Some(StudyDesign::LocationTime),
            (false, true, false) => Some(StudyDesign::LocationCompanion),
            (true, true, false) => Some(StudyDesign::LocationTimeCompanion),
            (false, false, true) => Some(StudyDesign::LocationEmotion),
            _ => None,
        }
    }

    pub fn has_time(self) -> bool {
        matches!(
            self,
            StudyDesign::LocationTime | StudyDesign::LocationTimeCompanion
        )
    }

    pub fn has_companion(self) -> bool {
        matches!(
            self,
            StudyDesign::LocationCompanion | StudyDesign::LocationTimeCompanion
        )
    }

    pub fn has_emotion(self) -> bool {
        self == StudyDesign::LocationEmotion
    }
}

/// One participant's decision to share a location scenario with one audience.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationRecord {
    pub participant_id: String,
    pub age: AgeBucket,
    pub gender: Gender,
    pub marriage: Marriage,
    pub privacy_level: PrivacyLevel,
    pub location: LocationSemantic,
    pub time: Option<TimeOfDay>,
    pub companion: Option<Companion>,
    pub emotion: Option<Emotion>,
    pub audience: Audience,
    pub label: bool,
}

impl LocationRecord {
    pub fn study(&self) -> StudyDesign {
        StudyDesign::from_context(
            self.time.is_some(),
            self.companion.is_some(),
            self.emotion.is_some(),
        )
        .expect("records are validated against the study designs on construction")
    }

    /// Checks the contextual-field pattern against the five designs.
    pub fn validate(&self) -> Result<StudyDesign> {
        StudyDesign::from_context(
            self.time.is_some(),
            self.companion.is_some(),
            self.emotion.is_some(),
        )
        .ok_or_else(|| Error::Schema {
            line: 0,
            message: "contextual fields match no study design".into(),
        })
    }
}

pub fn load_location_records(path: impl AsRef<Path>) -> Result<Vec<LocationRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_location_records(file)
}

pub fn read_location_records(reader: impl Read) -> Result<Vec<LocationRecord>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = csv.records();
    let header = match rows.next() {
        None => return Ok(Vec::new()),
        Some(h) => h?,
    };
    if header.iter().ne(LOCATION_CSV_HEADER.iter().copied()) {
        return Err(Error::Schema {
            line: 1,
            message: format!("expected header '{}'", LOCATION_CSV_HEADER.join(",")),
        });
    }

    let mut out = Vec::new();
    for row in rows {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() != LOCATION_CSV_HEADER.len() {
            return Err(Error::Schema {
                line,
                message: format!(
                    "expected {} fields, found {}",
                    LOCATION_CSV_HEADER.len(),
                    row.len()
                ),
            });
        }
        let opt = |i: usize| -> Option<&str> { Some(&row[i]).filter(|s| !s.is_empty()) };
        let record = LocationRecord {
            participant_id: row[0].to_string(),
            age: row[1].parse()?,
            gender: row[2].parse()?,
            marriage: row[3].parse()?,
            privacy_level: row[4].parse()?,
            location: row[5].parse()?,
            time: opt(6).map(str::parse).transpose()?,
            companion: opt(7).map(str::parse).transpose()?,
            emotion: opt(8).map(str::parse).transpose()?,
            audience: row[9].parse()?,
            label: match &row[10] {
                "1" => true,
                "0" => false,
                other => {
                    return Err(Error::Vocabulary {
                        field: "label".into(),
                        value: other.into(),
                    })
                }
            },
        };
        record.validate().map_err(|_| Error::Schema {
            line,
            message: "contextual fields match no study design".into(),
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_location_records(records: &[LocationRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(LOCATION_CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.participant_id.as_str(),
            r.age.as_str(),
            r.gender.as_str(),
            r.marriage.as_str(),
            r.privacy_level.as_str(),
            r.location.as_str(),
            r.time.map_or("", TimeOfDay::as_str),
            r.companion.map_or("", Companion::as_str),
            r.emotion.map_or("", Emotion::as_str),
            r.audience.as_str(),
            if r.label { "1" } else { "0" },
        ])?;
    }
    w.flush().map_err(|e| Error::io("<location output>", e))?;
    Ok(())
}
