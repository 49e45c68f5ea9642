use std::path::Path;
use std::process::{Command, Output};

fn ppm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppm"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = ppm(args);
    assert!(
        out.status.success(),
        "ppm {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn graph_pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.jsonl");
    let truth = dir.path().join("truth.json");
    ok(&[
        "generate",
        "--kind",
        "osn",
        "--platform",
        "googleplus",
        "--users",
        "400",
        "--mean-degree",
        "4",
        "--seed",
        "3",
        "--out",
        s(&graph),
        "--truth",
        s(&truth),
    ]);
    assert!(truth.exists());

    let stats = ok(&["stats", "--in", s(&graph), "--platform", "googleplus"]);
    assert!(stats.contains("D_Google+"));

    let eval_args = |out: &Path| {
        vec![
            "evaluate".to_string(),
            "--in".into(),
            s(&graph).into(),
            "--platform".into(),
            "googleplus".into(),
            "--seed".into(),
            "7".into(),
            "--repeats".into(),
            "2".into(),
            "--folds".into(),
            "5".into(),
            "--out".into(),
            s(out).into(),
        ]
    };
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let text = ok(&eval_args(&a).iter().map(String::as_str).collect::<Vec<_>>());
    ok(&eval_args(&b).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "evaluate is deterministic"
    );
    assert!(text.contains("F1") && text.contains("AUC"));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(report["runs"].as_array().unwrap().len(), 10);
    ok(&["report", "--in", s(&a)]);

    let ablation = ok(&[
        "ablate",
        "--in",
        s(&graph),
        "--platform",
        "googleplus",
        "--seed",
        "7",
        "--repeats",
        "1",
        "--folds",
        "3",
    ]);
    let f1_line = ablation.lines().find(|l| l.starts_with("F1")).unwrap();
    assert!(ablation.contains("-(5)"));
    assert!(f1_line.trim_end().ends_with("N/A"), "{ablation}");

    let matrix = dir.path().join("m.csv");
    let folds = dir.path().join("folds.csv");
    ok(&[
        "features",
        "--in",
        s(&graph),
        "--platform",
        "googleplus",
        "--out",
        s(&matrix),
        "--folds-out",
        s(&folds),
        "--seed",
        "2",
    ]);
    assert!(dir.path().join("m.csv.schema.json").exists());
    assert!(std::fs::read_to_string(&folds)
        .unwrap()
        .starts_with("record_id,repeat,fold\n"));

    let model = dir.path().join("model.json");
    let preds = dir.path().join("p.csv");
    ok(&[
        "train",
        "--matrix",
        s(&matrix),
        "--learner",
        "tree",
        "--out",
        s(&model),
    ]);
    ok(&[
        "predict",
        "--model",
        s(&model),
        "--matrix",
        s(&matrix),
        "--out",
        s(&preds),
    ]);
    let n_rows = std::fs::read_to_string(&matrix).unwrap().lines().count();
    assert_eq!(
        std::fs::read_to_string(&preds).unwrap().lines().count(),
        n_rows
    );
}

#[test]
fn location_pipeline_merges_context_removal() {
    let dir = tempfile::tempdir().unwrap();
    let survey = dir.path().join("loc.csv");
    ok(&[
        "generate",
        "--kind",
        "location",
        "--study-mix",
        "8,8,8,8,8",
        "--seed",
        "5",
        "--out",
        s(&survey),
    ]);
    let text = ok(&[
        "ablate",
        "--in",
        s(&survey),
        "--audience",
        "family",
        "--learner",
        "nb",
        "--seed",
        "1",
        "--repeats",
        "1",
        "--folds",
        "3",
    ]);
    assert!(text.contains("-(4)+(5)"), "{text}");
}

#[test]
fn diagnostics_name_the_problem() {
    let out = ppm(&["evaluate", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"type\":\"user\",\"id\":\"a\"}\nnot json\n").unwrap();
    let out = ppm(&["stats", "--in", s(&bad), "--platform", "twitter"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.jsonl") && err.contains("line"), "{err}");

    assert_eq!(ppm(&["--help"]).status.code(), Some(0));
}
