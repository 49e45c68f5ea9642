//! Synthetic location-sharing surveys.
//!
//! Each participant answers ten scenarios of their study design; every
//! scenario yields one sharing decision per audience.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{standardize, PlantedRule};
use crate::data::{
    AgeBucket, Audience, Companion, Emotion, Gender, LocationRecord, LocationSemantic, Marriage,
    PrivacyLevel, StudyDesign, TimeOfDay,
};
use crate::error::{Error, Result};

pub const SCENARIOS_PER_PARTICIPANT: usize = 10;

// Participant marginals of the original survey (percent).
const AGE_WEIGHTS: [f64; 5] = [21.42, 45.23, 20.23, 5.95, 7.14];
const GENDER_WEIGHTS: [f64; 2] = [57.14, 42.85];
const MARRIAGE_WEIGHTS: [f64; 2] = [40.47, 59.52];
const PRIVACY_WEIGHTS: [f64; 4] = [39.0, 41.0, 15.0, 5.0];

/// Participants per study design 1..=5.
pub type StudyMix = [usize; 5];

/// Participant counts of the original five studies.
pub const ORIGINAL_STUDY_MIX: StudyMix = [84, 133, 244, 510, 117];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demographics {
    pub age: AgeBucket,
    pub gender: Gender,
    pub marriage: Marriage,
    pub privacy_level: PrivacyLevel,
}

pub fn sample_demographics(rng: &mut impl Rng) -> Demographics {
    let pick = |w: &[f64], rng: &mut _| WeightedIndex::new(w).expect("fixed weights").sample(rng);
    Demographics {
        age: AgeBucket::ALL[pick(&AGE_WEIGHTS, rng)],
        gender: Gender::ALL[pick(&GENDER_WEIGHTS, rng)],
        marriage: Marriage::ALL[pick(&MARRIAGE_WEIGHTS, rng)],
        privacy_level: PrivacyLevel::ALL[pick(&PRIVACY_WEIGHTS, rng)],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationTruth {
    pub seed: u64,
    pub rule: PlantedRule,
    pub study_mix: StudyMix,
    /// True sharing probability of each record, in record order.
    pub probabilities: Vec<f64>,
}

fn tendency(d: &Demographics) -> f64 {
    let privacy = match d.privacy_level {
        PrivacyLevel::Very => -1.0,
        PrivacyLevel::Moderately => -0.2,
        PrivacyLevel::Slightly => 0.6,
        PrivacyLevel::NotCare => 1.2,
    };
    let age = match d.age {
        AgeBucket::From18To24 => 0.3,
        AgeBucket::From25To34 => 0.1,
        AgeBucket::From35To44 => 0.0,
        AgeBucket::From45To54 => -0.2,
        AgeBucket::From55To64 => -0.3,
    };
    privacy + age
}

fn sensitivity(loc: LocationSemantic) -> f64 {
    use LocationSemantic::*;
    match loc {
        Hospital | PoliceStation | LawFirm | Casino | Cemetery => 1.0,
        Bar | Bank | Hotel | Spa | Church => 0.5,
        Workplace | CompanyBuilding | BusStation | Airport => 0.0,
        ConventionCenter | Library | ArtGallery => -0.5,
        Restaurant | MovieTheater | ShoppingMall => -1.0,
    }
}

fn trust(audience: Audience) -> f64 {
    match audience {
        Audience::Family => 1.0,
        Audience::Friend => 0.6,
        Audience::Colleague => -0.4,
    }
}

fn appropriateness(
    loc: LocationSemantic,
    time: Option<TimeOfDay>,
    companion: Option<Companion>,
    emotion: Option<Emotion>,
    audience: Audience,
) -> f64 {
    use LocationSemantic::*;
    let mut a = match (loc, audience) {
        (Workplace | CompanyBuilding | ConventionCenter | LawFirm, Audience::Colleague) => 1.0,
        (Bar | Casino, Audience::Colleague | Audience::Family) => -1.0,
        (Bar | MovieTheater | Restaurant | ShoppingMall, Audience::Friend) => 0.5,
        (Hospital | Church | Cemetery, Audience::Family) => 0.5,
        _ => 0.0,
    };
    a += match (companion, audience) {
        (Some(Companion::Family), Audience::Family)
        | (Some(Companion::Friends), Audience::Friend)
        | (Some(Companion::Colleagues), Audience::Colleague) => 1.0,
        (Some(Companion::Alone), _) | (None, _) => 0.0,
        _ => -0.5,
    };
    a += match (time, audience) {
        (Some(TimeOfDay::WeekdayDay), Audience::Colleague) => 0.5,
        (Some(TimeOfDay::WeekdayNight), Audience::Colleague) => -0.5,
        (Some(TimeOfDay::Weekend), Audience::Friend) => 0.5,
        _ => 0.0,
    };
    a += match emotion {
        Some(Emotion::Positive) => 0.5,
        Some(Emotion::Negative) => -0.5,
        None => 0.0,
    };
    a
}

/// Records for `n_participants` split across the five designs by
/// `study_mix`, each scenario answered for all three audiences (so a study
/// of `p` participants yields `10 p` records per audience).
pub fn generate_location_survey(
    n_participants: usize,
    study_mix: &StudyMix,
    rule: &PlantedRule,
    seed: u64,
) -> Result<(Vec<LocationRecord>, LocationTruth)> {
    rule.validate()?;
    let total: usize = study_mix.iter().sum();
    if total != n_participants {
        return Err(Error::invalid(format!(
            "study mix assigns {total} participants, expected {n_participants}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n_participants * SCENARIOS_PER_PARTICIPANT * 3);
    let mut raw = Vec::with_capacity(records.capacity());
    for (design, &count) in StudyDesign::ALL.iter().zip(study_mix) {
        for p in 0..count {
            let participant_id = format!("s{}-{p:04}", design.number());
            let d = sample_demographics(&mut rng);
            for _ in 0..SCENARIOS_PER_PARTICIPANT {
                let location = *LocationSemantic::ALL.choose(&mut rng).expect("nonempty");
                let time = design
                    .has_time()
                    .then(|| *TimeOfDay::ALL.choose(&mut rng).expect("nonempty"));
                let companion = design
                    .has_companion()
                    .then(|| *Companion::ALL.choose(&mut rng).expect("nonempty"));
                let emotion = design
                    .has_emotion()
                    .then(|| *Emotion::ALL.choose(&mut rng).expect("nonempty"));
                for &audience in Audience::ALL {
                    raw.push([
                        tendency(&d),
                        sensitivity(location),
                        trust(audience),
                        appropriateness(location, time, companion, emotion, audience),
                    ]);
                    records.push(LocationRecord {
                        participant_id: participant_id.clone(),
                        age: d.age,
                        gender: d.gender,
                        marriage: d.marriage,
                        privacy_level: d.privacy_level,
                        location,
                        time,
                        companion,
                        emotion,
                        audience,
                        label: false,
                    });
                }
            }
        }
    }
    let z = standardize(&raw);
    let mut probabilities = Vec::with_capacity(records.len());
    for (r, zi) in records.iter_mut().zip(&z) {
        let p = rule.probability(*zi);
        let decision = rng.random::<f64>() < p;
        let flipped = rng.random::<f64>() < rule.noise;
        r.label = decision != flipped;
        probabilities.push(p);
    }
    Ok((
        records,
        LocationTruth {
            seed,
            rule: *rule,
            study_mix: *study_mix,
            probabilities,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_one_record_counts() {
        let rule = PlantedRule::new(0.0, [1.0; 4], 0.1);
        let (records, truth) = generate_location_survey(84, &[84, 0, 0, 0, 0], &rule, 1).unwrap();
        for a in Audience::ALL {
            assert_eq!(records.iter().filter(|r| r.audience == *a).count(), 840);
        }
        assert_eq!(truth.probabilities.len(), records.len());
        assert!(records
            .iter()
            .all(|r| r.validate().unwrap() == StudyDesign::Location));
    }

    #[test]
    fn every_record_matches_its_design() {
        let rule = PlantedRule::new(0.0, [1.0; 4], 0.0);
        let (records, _) = generate_location_survey(10, &[2, 2, 2, 2, 2], &rule, 5).unwrap();
        for r in &records {
            let design = r.validate().unwrap();
            assert!(r
                .participant_id
                .starts_with(&format!("s{}-", design.number())));
        }
    }

    #[test]
    fn mix_must_sum_to_participants() {
        let rule = PlantedRule::new(0.0, [1.0; 4], 0.0);
        assert!(generate_location_survey(10, &[1, 2, 3, 0, 0], &rule, 1).is_err());
    }

    #[test]
    fn deterministic() {
        let rule = PlantedRule::new(0.3, [1.0, -1.0, 1.0, 2.0], 0.1);
        let a = generate_location_survey(20, &[4; 5], &rule, 8).unwrap();
        let b = generate_location_survey(20, &[4; 5], &rule, 8).unwrap();
        assert_eq!(a, b);
    }
}
