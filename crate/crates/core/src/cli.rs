//! Command-line interface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classifiers::{Learner, TreeParams};
use crate::data::{
    dataset_stats, load_location_records, load_model, save_model, write_location_records, Audience,
    FactorGroup, FeatureMatrix, LocationRecord, MatrixSchema, OsnGraph, Platform,
};
use crate::error::Error;
use crate::evaluation::{
    ablate, adapted_cv, cv_splits, render_ablation, render_results, AblationPlan, AblationReport,
    CvConfig, EvalResult, FoldSource, LocationSource, MatrixSource,
};
use crate::io::write_atomic;
use crate::location_features::build_location_features;
use crate::osn::build_osn_features;
use crate::synth::{generate_location_survey, generate_osn_graph, OsnGenConfig, PlantedRule};

type CliResult<T> = std::result::Result<T, String>;

fn ctx<T>(r: crate::Result<T>, what: &Path) -> CliResult<T> {
    r.map_err(|e| format!("{}: {e}", what.display()))
}

fn plain<T>(r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "ppm",
    version,
    about = "Privacy decision prediction: features, classifiers and evaluation protocol"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset with a planted disclosure rule.
    Generate(GenerateArgs),
    /// Export the feature matrix of a dataset as CSV plus a schema sidecar.
    Features(FeaturesArgs),
    /// Train a model on a whole dataset and save it as JSON.
    Train(TrainArgs),
    /// Run adapted cross-validation and report F1 / AUC.
    Evaluate(EvaluateArgs),
    /// Evaluate with each factor group removed in turn.
    Ablate(AblateArgs),
    /// Score the rows of a feature matrix with a saved model.
    Predict(PredictArgs),
    /// Render a saved evaluation or ablation JSON report as text.
    Report(ReportArgs),
    /// Print class counts of a dataset.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DatasetKind {
    Osn,
    Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlatformArg {
    Twitter,
    Googleplus,
}

impl From<PlatformArg> for Platform {
    fn from(p: PlatformArg) -> Self {
        match p {
            PlatformArg::Twitter => Platform::Twitter,
            PlatformArg::Googleplus => Platform::GooglePlus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AudienceArg {
    Family,
    Friend,
    Colleague,
}

impl From<AudienceArg> for Audience {
    fn from(a: AudienceArg) -> Self {
        match a {
            AudienceArg::Family => Audience::Family,
            AudienceArg::Friend => Audience::Friend,
            AudienceArg::Colleague => Audience::Colleague,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerArg {
    Tree,
    Nb,
    LoglinearAdditive,
    LoglinearFull,
}

/// Where the records come from: a follow graph (with --platform), a
/// location survey (with --audience) or an exported feature matrix.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input dataset: a JSONL follow graph (needs --platform) or a location
    /// CSV (needs --audience). Optional when --matrix is given.
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Platform of a JSONL graph input. Optional; selects graph mode.
    #[arg(long, value_enum)]
    pub platform: Option<PlatformArg>,
    /// Audience of a location CSV input. Optional; selects location mode.
    #[arg(long, value_enum)]
    pub audience: Option<AudienceArg>,
    /// Feature matrix CSV to use instead of --in. Optional.
    #[arg(long, value_name = "PATH", conflicts_with = "input")]
    pub matrix: Option<PathBuf>,
    /// Schema sidecar of --matrix. Optional [default: <matrix>.schema.json].
    #[arg(long, value_name = "PATH", requires = "matrix")]
    pub schema: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LearnerArgs {
    /// Learning algorithm.
    #[arg(long, value_enum, default_value = "tree")]
    pub learner: LearnerArg,
    /// Pruning confidence of the decision tree.
    #[arg(long, default_value_t = 0.25)]
    pub confidence: f64,
    /// Minimum instances per branch of the decision tree.
    #[arg(long, default_value_t = 2)]
    pub min_leaf: usize,
}

impl LearnerArgs {
    fn learner(&self) -> CliResult<Learner> {
        Ok(match self.learner {
            LearnerArg::Tree => {
                let params = TreeParams {
                    confidence: self.confidence,
                    min_leaf: self.min_leaf,
                };
                plain(params.validate())?;
                Learner::Tree(params)
            }
            LearnerArg::Nb => Learner::NaiveBayes,
            LearnerArg::LoglinearAdditive => Learner::LoglinearAdditive,
            LearnerArg::LoglinearFull => Learner::LoglinearFull,
        })
    }
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    /// Independently undersampled datasets.
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// Cross-validation folds per dataset.
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Master seed for undersampling and fold assignment (required).
    #[arg(long)]
    pub seed: u64,
    /// Parallel evaluation runs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl ProtocolArgs {
    fn config(&self) -> CvConfig {
        CvConfig {
            repeats: self.repeats,
            folds: self.folds,
            seed: self.seed,
            jobs: self.jobs.max(1),
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Kind of dataset to generate.
    #[arg(long, value_enum)]
    pub kind: DatasetKind,
    /// Output path: JSONL graph (osn) or CSV records (location) (required).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Ground-truth sidecar JSON with the rule and true probabilities. Optional.
    #[arg(long, value_name = "PATH")]
    pub truth: Option<PathBuf>,
    /// Random seed (required).
    #[arg(long)]
    pub seed: u64,
    /// Platform of a generated graph.
    #[arg(long, value_enum, default_value = "googleplus")]
    pub platform: PlatformArg,
    /// Users in a generated graph.
    #[arg(long, default_value_t = 5000)]
    pub users: usize,
    /// Mean requests issued per user in a generated graph.
    #[arg(long, default_value_t = 6.0)]
    pub mean_degree: f64,
    /// Participants per study design 1-5 of a generated survey.
    #[arg(long, value_delimiter = ',', default_value = "84,133,244,510,117")]
    pub study_mix: Vec<usize>,
    /// Intercept of the planted rule.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Planted coefficients for tendency, sensitivity, trustworthiness and
    /// appropriateness.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1,-1,2,0.5",
        allow_negative_numbers = true
    )]
    pub betas: Vec<f64>,
    /// Label flip rate in [0, 0.5].
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    /// Put both directions of Google+ mutual pairs in one stage.
    #[arg(long, default_value_t = false)]
    pub obfuscate_direction: bool,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Output matrix CSV; the schema goes to <out>.schema.json (required).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Also write the adapted-CV fold assignment (record_id,repeat,fold). Optional.
    #[arg(long, value_name = "PATH", requires = "seed")]
    pub folds_out: Option<PathBuf>,
    /// Seed of the fold assignment; required with --folds-out.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Repeats of the fold assignment.
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// Folds of the fold assignment.
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    /// Output model JSON (required).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Output EvalResult JSON. Optional; the text table always goes to stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Factor groups (1-5 or names) to remove one at a time. Optional
    /// [default: 1-5 for graphs; 1, 2, 3 and 4+5 merged for location data].
    #[arg(long, value_delimiter = ',')]
    pub groups: Option<Vec<String>>,
    /// Output AblationReport JSON. Optional; the text table always goes to stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Saved model JSON (required).
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    /// Feature matrix CSV to score (required).
    #[arg(long, value_name = "PATH")]
    pub matrix: PathBuf,
    /// Schema sidecar of --matrix. Optional [default: <matrix>.schema.json].
    #[arg(long, value_name = "PATH")]
    pub schema: Option<PathBuf>,
    /// Output CSV of row,label,score (required).
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// EvalResult or AblationReport JSON (required).
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Write the text rendering here instead of stdout. Optional.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Input dataset: a JSONL follow graph or a location CSV (required).
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Platform of a JSONL graph. Optional; without it the input is read as
    /// location records.
    #[arg(long, value_enum)]
    pub platform: Option<PlatformArg>,
    /// Also write the report as JSON. Optional.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// A loaded dataset ready for the evaluation protocol.
enum Dataset {
    Osn {
        name: String,
        source: MatrixSource,
    },
    Location {
        name: String,
        source: LocationSource,
    },
    Matrix {
        name: String,
        source: MatrixSource,
    },
}

impl Dataset {
    fn name(&self) -> &str {
        match self {
            Dataset::Osn { name, .. }
            | Dataset::Location { name, .. }
            | Dataset::Matrix { name, .. } => name,
        }
    }

    fn source(&self) -> &dyn FoldSource {
        match self {
            Dataset::Osn { source, .. } | Dataset::Matrix { source, .. } => source,
            Dataset::Location { source, .. } => source,
        }
    }

    /// The full feature matrix, with location tables fit on every record.
    fn matrix(&self) -> CliResult<FeatureMatrix> {
        match self {
            Dataset::Osn { source, .. } | Dataset::Matrix { source, .. } => {
                Ok(source.matrix().clone())
            }
            Dataset::Location { source, .. } => {
                let records = source.records();
                let audience = records
                    .first()
                    .map(|r| r.audience)
                    .ok_or_else(|| Error::EmptyDataset.to_string())?;
                let all: Vec<usize> = (0..records.len()).collect();
                plain(build_location_features(records, audience, &all))
            }
        }
    }

    fn default_plan(&self) -> AblationPlan {
        match self {
            Dataset::Location { .. } => AblationPlan::location(),
            _ => AblationPlan::osn(),
        }
    }
}

fn platform_label(p: Platform) -> &'static str {
    match p {
        Platform::Twitter => "D_Twitter",
        Platform::GooglePlus => "D_Google+",
    }
}

fn schema_path(matrix: &Path, schema: Option<&PathBuf>) -> PathBuf {
    schema.cloned().unwrap_or_else(|| {
        let mut s = matrix.as_os_str().to_owned();
        s.push(".schema.json");
        PathBuf::from(s)
    })
}

fn read_matrix(path: &Path, schema: Option<&PathBuf>) -> CliResult<FeatureMatrix> {
    let schema_file = schema_path(path, schema);
    let file =
        std::fs::File::open(&schema_file).map_err(|e| format!("{}: {e}", schema_file.display()))?;
    let schema = ctx(
        MatrixSchema::read(std::io::BufReader::new(file)),
        &schema_file,
    )?;
    let file = std::fs::File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    ctx(
        FeatureMatrix::read_csv(std::io::BufReader::new(file), &schema),
        path,
    )
}

fn load_dataset(args: &DataArgs) -> CliResult<Dataset> {
    if let Some(path) = &args.matrix {
        let m = read_matrix(path, args.schema.as_ref())?;
        return Ok(Dataset::Matrix {
            name: path
                .file_stem()
                .map_or_else(|| "matrix".into(), |s| s.to_string_lossy().into_owned()),
            source: MatrixSource::new(m),
        });
    }
    let path = args
        .input
        .as_ref()
        .ok_or("one of --in or --matrix is required")?;
    match (args.platform, args.audience) {
        (Some(p), None) => {
            let platform = Platform::from(p);
            let graph = ctx(OsnGraph::load(path, platform), path)?;
            let ds = ctx(build_osn_features(&graph), path)?;
            Ok(Dataset::Osn {
                name: platform_label(platform).to_string(),
                source: MatrixSource::new(ds.matrix),
            })
        }
        (None, Some(a)) => {
            let audience = Audience::from(a);
            let records = ctx(load_location_records(path), path)?;
            Ok(Dataset::Location {
                name: format!("D_{audience}"),
                source: LocationSource::new(&records, audience),
            })
        }
        (Some(_), Some(_)) => Err("--platform and --audience are mutually exclusive".into()),
        (None, None) => {
            Err("--in needs --platform (graph input) or --audience (location input)".into())
        }
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    plain(write_atomic(path, text.as_bytes()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    write_text(path, &text)
}

fn cmd_generate(a: &GenerateArgs) -> CliResult<()> {
    let betas: [f64; 4] = a
        .betas
        .as_slice()
        .try_into()
        .map_err(|_| format!("--betas needs exactly 4 values, got {}", a.betas.len()))?;
    let mut rule = PlantedRule::new(a.alpha, betas, a.noise);
    rule.obfuscate_direction = a.obfuscate_direction;
    match a.kind {
        DatasetKind::Osn => {
            let platform = Platform::from(a.platform);
            let config = OsnGenConfig::new(platform, a.users, a.mean_degree);
            let (graph, truth) = plain(generate_osn_graph(&config, &rule, a.seed))?;
            write_text(&a.out, &graph.to_jsonl())?;
            if let Some(t) = &a.truth {
                write_json(t, &truth)?;
            }
            eprintln!(
                "wrote {} users and {} edges to {}",
                graph.user_count(),
                graph.edge_count(),
                a.out.display()
            );
        }
        DatasetKind::Location => {
            let mix: [usize; 5] = a.study_mix.as_slice().try_into().map_err(|_| {
                format!(
                    "--study-mix needs exactly 5 values, got {}",
                    a.study_mix.len()
                )
            })?;
            let total = mix.iter().sum();
            let (records, truth) = plain(generate_location_survey(total, &mix, &rule, a.seed))?;
            let mut buf = Vec::new();
            plain(write_location_records(&records, &mut buf))?;
            plain(write_atomic(&a.out, &buf))?;
            if let Some(t) = &a.truth {
                write_json(t, &truth)?;
            }
            eprintln!("wrote {} records to {}", records.len(), a.out.display());
        }
    }
    Ok(())
}

fn cmd_features(a: &FeaturesArgs) -> CliResult<()> {
    let ds = load_dataset(&a.data)?;
    let m = ds.matrix()?;
    let mut csv = Vec::new();
    plain(m.write_csv(&mut csv))?;
    let mut schema = Vec::new();
    plain(m.write_schema(&mut schema))?;
    plain(write_atomic(&a.out, &csv))?;
    plain(write_atomic(&schema_path(&a.out, None), &schema))?;
    if let Some(path) = &a.folds_out {
        let seed = a.seed.ok_or("--folds-out needs --seed")?;
        let config = CvConfig {
            repeats: a.repeats,
            folds: a.folds,
            seed,
            jobs: 1,
        };
        let splits = plain(cv_splits(ds.source().labels(), &config))?;
        let mut text = String::from("record_id,repeat,fold\n");
        for s in &splits {
            for &i in &s.test {
                text.push_str(&format!("{i},{},{}\n", s.repeat, s.fold));
            }
        }
        write_text(path, &text)?;
    }
    eprintln!(
        "wrote {} rows x {} columns to {}",
        m.n_rows(),
        m.n_cols(),
        a.out.display()
    );
    Ok(())
}

fn cmd_train(a: &TrainArgs) -> CliResult<()> {
    let ds = load_dataset(&a.data)?;
    let learner = a.learner.learner()?;
    let model = plain(learner.fit(&ds.matrix()?))?;
    plain(save_model(&model, &a.out))?;
    eprintln!("saved {learner} model to {}", a.out.display());
    Ok(())
}

fn cmd_evaluate(a: &EvaluateArgs) -> CliResult<()> {
    let ds = load_dataset(&a.data)?;
    let learner = a.learner.learner()?;
    let result = plain(adapted_cv(ds.source(), &learner, &a.protocol.config()))?;
    if let Some(out) = &a.out {
        write_json(out, &result)?;
    }
    print!("{}", render_results(&[(ds.name(), &result)]));
    Ok(())
}

fn parse_groups(names: &[String]) -> CliResult<Vec<FactorGroup>> {
    names
        .iter()
        .map(|n| plain(n.trim().parse::<FactorGroup>()))
        .collect()
}

fn cmd_ablate(a: &AblateArgs) -> CliResult<()> {
    let ds = load_dataset(&a.data)?;
    let learner = a.learner.learner()?;
    let plan = match &a.groups {
        Some(g) => AblationPlan::custom(&parse_groups(g)?),
        None => ds.default_plan(),
    };
    let report = plain(ablate(
        ds.name(),
        ds.source(),
        &learner,
        &plan,
        &a.protocol.config(),
    ))?;
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    print!("{}", render_ablation(&report));
    Ok(())
}

fn cmd_predict(a: &PredictArgs) -> CliResult<()> {
    let model = ctx(load_model(&a.model), &a.model)?;
    let m = read_matrix(&a.matrix, a.schema.as_ref())?;
    ctx(model.check_schema(&m), &a.matrix)?;
    let mut text = String::from("row,label,score\n");
    for (i, row) in m.rows().iter().enumerate() {
        let p = ctx(model.predict(row), &a.matrix)?;
        text.push_str(&format!("{i},{},{}\n", u8::from(p.label), p.score));
    }
    write_text(&a.out, &text)
}

fn cmd_report(a: &ReportArgs) -> CliResult<()> {
    let text =
        std::fs::read_to_string(&a.input).map_err(|e| format!("{}: {e}", a.input.display()))?;
    let rendered = if let Ok(r) = serde_json::from_str::<AblationReport>(&text) {
        render_ablation(&r)
    } else {
        let r: EvalResult = serde_json::from_str(&text).map_err(|e| {
            format!(
                "{}: not an evaluation or ablation report: {e}",
                a.input.display()
            )
        })?;
        let name = a
            .input
            .file_stem()
            .map_or_else(|| "result".into(), |s| s.to_string_lossy().into_owned());
        render_results(&[(&name, &r)])
    };
    match &a.out {
        Some(out) => write_text(out, &rendered),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn cmd_stats(a: &StatsArgs) -> CliResult<()> {
    let report = match a.platform {
        Some(p) => {
            let platform = Platform::from(p);
            let graph = ctx(OsnGraph::load(&a.input, platform), &a.input)?;
            let records = ctx(crate::osn::derive_labels(&graph), &a.input)?;
            ctx(dataset_stats(platform_label(platform), &records), &a.input)?
        }
        None => {
            let records: Vec<LocationRecord> = ctx(load_location_records(&a.input), &a.input)?;
            ctx(dataset_stats("D_Location", &records), &a.input)?
        }
    };
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    print!("{}", report.render());
    Ok(())
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Features(a) => cmd_features(a),
        Command::Train(a) => cmd_train(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Ablate(a) => cmd_ablate(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Report(a) => cmd_report(a),
        Command::Stats(a) => cmd_stats(a),
    }
}

/// Parses `argv` (program name first) and runs the subcommand. Returns the
/// process exit code: 0 on success, 1 on a runtime error, 2 on a usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn every_flag_is_documented_with_its_default() {
        let cmd = Cli::command();
        for sub in cmd.get_subcommands() {
            for arg in sub.get_arguments() {
                let id = arg.get_id().as_str();
                if id == "help" || id == "version" {
                    continue;
                }
                let help = arg.get_help().map(|h| h.to_string()).unwrap_or_default();
                assert!(!help.is_empty(), "{} --{id} has no help", sub.get_name());
                let takes_value = arg.get_action().takes_values();
                let documented = !takes_value
                    || !arg.get_default_values().is_empty()
                    || arg.is_required_set()
                    || help.contains("required")
                    || help.contains("Optional");
                assert!(
                    documented,
                    "{} --{id} does not state its default",
                    sub.get_name()
                );
            }
        }
        cmd.debug_assert();
    }

    #[test]
    fn seed_is_required_for_stochastic_commands() {
        assert!(
            Cli::try_parse_from(["ppm", "evaluate", "--in", "x", "--platform", "twitter"]).is_err()
        );
        assert!(Cli::try_parse_from(["ppm", "generate", "--kind", "osn", "--out", "x"]).is_err());
        assert!(Cli::try_parse_from([
            "ppm",
            "ablate",
            "--in",
            "x",
            "--platform",
            "twitter",
            "--seed",
            "3"
        ])
        .is_ok());
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        assert_eq!(run(["ppm", "stats", "--bogus"]), 2);
        assert_eq!(
            run([
                "ppm",
                "stats",
                "--in",
                "/nonexistent/graph.jsonl",
                "--platform",
                "twitter"
            ]),
            1
        );
    }
}
