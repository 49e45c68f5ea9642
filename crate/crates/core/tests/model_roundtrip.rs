use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ppm::classifiers::{Learner, TreeParams};
use ppm::data::{load_model, read_model, save_model, write_model, Audience, MODEL_FORMAT_VERSION};
use ppm::location_features::build_location_features;
use ppm::synth::{generate_location_survey, PlantedRule};
use ppm::Error;

fn matrix() -> ppm::data::FeatureMatrix {
    let rule = PlantedRule::new(0.0, [1.0, -1.0, 1.5, 2.0], 0.1);
    let (records, _) = generate_location_survey(60, &[12; 5], &rule, 21).unwrap();
    let friend: Vec<_> = records
        .into_iter()
        .filter(|r| r.audience == Audience::Friend)
        .collect();
    let all: Vec<usize> = (0..friend.len()).collect();
    build_location_features(&friend, Audience::Friend, &all).unwrap()
}

#[test]
fn saved_models_predict_identically() {
    let m = matrix();
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let rows: Vec<usize> = (0..100).map(|_| rng.random_range(0..m.n_rows())).collect();
    for learner in [
        Learner::Tree(TreeParams::default()),
        Learner::NaiveBayes,
        Learner::LoglinearAdditive,
        Learner::LoglinearFull,
    ] {
        let model = learner.fit(&m).unwrap();
        let path = dir.path().join(format!("{learner}.json"));
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded, model, "{learner}");
        for &i in &rows {
            let a = model.predict(m.row(i)).unwrap();
            let b = loaded.predict(m.row(i)).unwrap();
            assert_eq!(a.score.to_bits(), b.score.to_bits(), "{learner} row {i}");
            assert_eq!(a.label, b.label);
        }
    }
}

#[test]
fn corrupt_and_truncated_files_are_integrity_errors() {
    let model = Learner::NaiveBayes.fit(&matrix()).unwrap();
    let mut buf = Vec::new();
    write_model(&model, &mut buf).unwrap();

    let truncated = &buf[..buf.len() / 2];
    assert!(matches!(read_model(truncated), Err(Error::Integrity(_))));

    // Flip one digit inside the model body; the JSON stays valid.
    let text = String::from_utf8(buf.clone()).unwrap();
    let body = text.find("\"model\"").unwrap();
    let pos = body
        + text[body..]
            .find(|c: char| c.is_ascii_digit() && c != '0')
            .unwrap();
    let mut edited = text.into_bytes();
    edited[pos] = if edited[pos] == b'9' {
        b'8'
    } else {
        edited[pos] + 1
    };
    assert!(matches!(
        read_model(edited.as_slice()),
        Err(Error::Integrity(_))
    ));
}

#[test]
fn other_format_versions_are_rejected() {
    let model = Learner::LoglinearAdditive.fit(&matrix()).unwrap();
    let mut buf = Vec::new();
    write_model(&model, &mut buf).unwrap();
    let mut doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    doc["format_version"] = (MODEL_FORMAT_VERSION + 1).into();
    let err = read_model(serde_json::to_vec(&doc).unwrap().as_slice()).unwrap_err();
    assert!(
        matches!(err, Error::IncompatibleVersion { found, .. } if found == MODEL_FORMAT_VERSION + 1)
    );
}

#[test]
fn failed_save_leaves_no_partial_file() {
    let model = Learner::NaiveBayes.fit(&matrix()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing-dir").join("m.json");
    assert!(save_model(&model, &path).is_err());
    assert!(!path.exists());
}
