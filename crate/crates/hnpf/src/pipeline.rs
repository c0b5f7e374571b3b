//! End-to-end orchestration of a full extraction run.
//!
//! [`run_case`] drives one named problem through every stage — sample,
//! train, extract, filter, verify — and persists each stage's artifact into
//! a single output directory as it completes.  A stage failure surfaces as
//! [`Error::Stage`] naming the stage, and the artifacts of the stages that
//! finished stay on disk, so a broken run can still be inspected.
//!
//! Everything that influences a run lives in [`RunConfig`]; with the same
//! config (and therefore the same seeds) a rerun reproduces every CSV
//! byte-for-byte.  Timings are the one exception: they are recorded in the
//! JSON report, which is why the report is not byte-stable across reruns.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::csvio::{format_sig, write_csv_file};
use crate::error::{Error, Result};
use crate::filter::{plane_filter, FilterConfig, FilterStats, StrongParetoSet};
use crate::neural::{extract_weak_front, train, MlpModel, TrainConfig, TrainReport, WeakParetoSet};
use crate::problems::{builtin_case, case_names, fair_search_problem, MooProblem};
use crate::sampler::{sample, sample_inference, Distribution, SamplePlan};
use crate::verify::{density, front_error, DensityReport, FrontErrorReport, GEOMETRIC_TOLERANCE};

/// Config snapshot written into every run directory.
pub const CONFIG_FILE: &str = "config.json";
/// Training draw with its split markers.
pub const TRAIN_SAMPLES_FILE: &str = "train_samples.csv";
/// Per-epoch loss history.
pub const LOSS_FILE: &str = "loss.csv";
/// Best-validation classifier snapshot.
pub const MODEL_FILE: &str = "model.txt";
/// Classifier-selected weak-Pareto candidates.
pub const WEAK_FRONT_FILE: &str = "weak_front.csv";
/// Filter survivors.
pub const STRONG_FRONT_FILE: &str = "strong_front.csv";
/// Aggregated run report (counts, losses, yields, timings).
pub const REPORT_FILE: &str = "report.json";

/// Everything that determines a run: the case plus per-stage settings.
///
/// All fields have defaults, so a TOML or JSON override file only needs the
/// fields it wants to change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Case to run: a built-in roman numeral or a fair-search variant (see
    /// [`known_case_names`]).
    pub case: String,
    pub sample: SamplePlan,
    pub train: TrainConfig,
    pub filter: FilterConfig,
    /// Front-distance tolerance used when the case has an analytic front.
    pub front_tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            case: "I".into(),
            sample: SamplePlan::default(),
            train: TrainConfig::default(),
            filter: FilterConfig::default(),
            front_tolerance: GEOMETRIC_TOLERANCE,
        }
    }
}

impl RunConfig {
    /// Parse a (possibly partial) TOML override of the defaults.
    pub fn from_toml_str(source: &str) -> Result<Self> {
        toml::from_str(source).map_err(|e| Error::Config(format!("run config: {e}")))
    }

    /// Point both the sampling and the training generator at one seed.
    pub fn set_seed(&mut self, seed: u64) {
        self.sample.seed = seed;
        self.train.seed = seed;
    }

    fn validate(&self) -> Result<()> {
        self.train.validate()?;
        self.filter.validate()?;
        if !(self.front_tolerance > 0.0 && self.front_tolerance.is_finite()) {
            return Err(Error::Config(
                "front_tolerance must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

/// A named case ready to run: the problem plus the sampling distribution
/// the case is studied under (`None` keeps the plan's own distribution).
#[derive(Debug)]
pub struct ResolvedCase {
    pub problem: MooProblem,
    pub distribution: Option<Distribution>,
}

/// Every name [`resolve_case`] accepts: the built-in cases followed by the
/// two fair-search sampling variants.
pub fn known_case_names() -> Vec<String> {
    let mut names: Vec<String> = case_names().iter().map(|s| s.to_string()).collect();
    names.push("fair-search-binomial".into());
    names.push("fair-search-uniform".into());
    names
}

/// Look up a runnable case by name (case-insensitive).
///
/// The fair-search variants fix their own sampling distribution — that is
/// the difference between them — so for those the resolved distribution
/// overrides whatever the sample plan says.
pub fn resolve_case(name: &str) -> Result<ResolvedCase> {
    let trimmed = name.trim();
    match trimmed.to_ascii_lowercase().as_str() {
        "fair-search-binomial" => {
            let fs = fair_search_problem(48, 0.56, 0.5)?;
            Ok(ResolvedCase {
                problem: fs.problem,
                distribution: Some(fs.binomial),
            })
        }
        "fair-search-uniform" => {
            let fs = fair_search_problem(48, 0.56, 0.5)?;
            Ok(ResolvedCase {
                problem: fs.problem,
                distribution: Some(fs.uniform),
            })
        }
        _ => match builtin_case(trimmed) {
            Ok(problem) => Ok(ResolvedCase {
                problem,
                distribution: None,
            }),
            Err(_) => Err(Error::Input(format!(
                "unknown case '{trimmed}' (expected one of {})",
                known_case_names().join(", ")
            ))),
        },
    }
}

/// Wall-clock seconds spent in each stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StageTimings {
    pub sample_s: f64,
    pub train_s: f64,
    pub extract_s: f64,
    pub filter_s: f64,
    pub verify_s: f64,
    pub total_s: f64,
}

/// The complete in-memory result of one run; everything here is also
/// persisted under [`RunArtifact::out_dir`].
#[derive(Debug)]
pub struct RunArtifact {
    /// Canonical name of the problem that was run.
    pub case: String,
    /// Effective config, including any distribution forced by the case.
    pub config: RunConfig,
    /// Best-validation classifier snapshot.
    pub model: MlpModel,
    pub train_report: TrainReport,
    pub weak: WeakParetoSet,
    pub strong: StrongParetoSet,
    pub density: DensityReport,
    /// Present only for cases with an analytic front description.
    pub front_error: Option<FrontErrorReport>,
    pub timings: StageTimings,
    pub out_dir: PathBuf,
}

/// The slice of a [`RunArtifact`] that goes into `report.json`.
#[derive(Debug, Serialize)]
struct RunReport<'a> {
    case: &'a str,
    n_train: usize,
    n_validation: usize,
    n_inference: usize,
    n_weak: usize,
    n_strong: usize,
    train: &'a TrainReport,
    filter: &'a FilterStats,
    density: &'a DensityReport,
    front_error: Option<&'a FrontErrorReport>,
    timings: &'a StageTimings,
}

fn stage<T>(name: &'static str, body: impl FnOnce() -> Result<T>) -> Result<T> {
    body().map_err(|e| Error::Stage {
        stage: name,
        source: Box::new(e),
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Column names `x_1..x_n` etc.
fn family(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|j| format!("{prefix}_{j}")).collect()
}

fn write_train_samples_csv(
    path: &Path,
    train_points: &[Vec<f64>],
    val_points: &[Vec<f64>],
    n: usize,
) -> Result<()> {
    let mut header = family("x", n);
    header.push("split".into());
    let mut rows = Vec::with_capacity(train_points.len() + val_points.len());
    for (marker, points) in [("0", train_points), ("1", val_points)] {
        for x in points {
            let mut row: Vec<String> = x.iter().map(|&v| format_sig(v)).collect();
            row.push(marker.to_string());
            rows.push(row);
        }
    }
    write_csv_file(path, &header, &rows)
}

fn write_weak_csv(path: &Path, problem: &MooProblem, weak: &WeakParetoSet) -> Result<()> {
    let mut header = vec!["index".to_string()];
    header.extend(family("x", problem.n()));
    header.extend(family("f", problem.k()));
    header.push("p_pareto".into());
    let rows: Vec<Vec<String>> = weak
        .points
        .iter()
        .map(|p| {
            let mut row = vec![p.index.to_string()];
            row.extend(p.x.iter().map(|&v| format_sig(v)));
            row.extend(
                problem
                    .display_objectives(&p.fx)
                    .iter()
                    .map(|&v| format_sig(v)),
            );
            row.push(format_sig(p.p_pareto));
            row
        })
        .collect();
    write_csv_file(path, &header, &rows)
}

fn write_strong_csv(path: &Path, problem: &MooProblem, strong: &StrongParetoSet) -> Result<()> {
    let mut header = vec!["index".to_string()];
    header.extend(family("x", problem.n()));
    header.extend(family("f", problem.k()));
    let rows: Vec<Vec<String>> = strong
        .points
        .iter()
        .map(|p| {
            let mut row = vec![p.index.to_string()];
            row.extend(p.x.iter().map(|&v| format_sig(v)));
            row.extend(
                problem
                    .display_objectives(&p.fx)
                    .iter()
                    .map(|&v| format_sig(v)),
            );
            row
        })
        .collect();
    write_csv_file(path, &header, &rows)
}

/// Run one named case end to end (see [`run_problem`]).
///
/// The fair-search variants pin their own sampling distribution before the
/// config is snapshotted, so the snapshot reproduces the run verbatim.
pub fn run_case(config: &RunConfig, out_dir: &Path) -> Result<RunArtifact> {
    let resolved = resolve_case(&config.case)?;
    let mut config = config.clone();
    if let Some(dist) = resolved.distribution {
        config.sample.distribution = dist;
    }
    run_problem(&resolved.problem, &config, out_dir)
}

/// Run any problem end to end, persisting every stage artifact into
/// `out_dir`.
///
/// Stages run in order: sample, train (includes labeling), extract, filter,
/// verify.  The first failing stage aborts the run with [`Error::Stage`];
/// artifacts written by earlier stages remain in `out_dir`.
pub fn run_problem(
    problem: &MooProblem,
    config: &RunConfig,
    out_dir: &Path,
) -> Result<RunArtifact> {
    let total = Instant::now();
    let mut timings = StageTimings::default();

    config.validate()?;
    fs::create_dir_all(out_dir)?;
    write_json(&out_dir.join(CONFIG_FILE), &config)?;

    let t = Instant::now();
    let (split, inference) = stage("sample", || {
        let split = sample(&config.sample, &problem)?;
        let inference = sample_inference(&config.sample, &problem)?;
        write_train_samples_csv(
            &out_dir.join(TRAIN_SAMPLES_FILE),
            &split.train,
            &split.validation,
            problem.n(),
        )?;
        Ok((split, inference))
    })?;
    timings.sample_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (model, train_report) = stage("train", || {
        let initial = MlpModel::init(problem.bounds(), config.train.seed);
        let (model, report) = train(
            initial,
            &split.train,
            &split.validation,
            &problem,
            &config.train,
        )?;
        report.write_loss_csv(&out_dir.join(LOSS_FILE))?;
        model.save(&out_dir.join(MODEL_FILE))?;
        Ok((model, report))
    })?;
    timings.train_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let weak = stage("extract", || {
        let weak = extract_weak_front(&model, &inference, &problem, config.train.threshold)?;
        write_weak_csv(&out_dir.join(WEAK_FRONT_FILE), &problem, &weak)?;
        Ok(weak)
    })?;
    timings.extract_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let strong = stage("filter", || {
        if weak.points.is_empty() {
            return Err(Error::input(
                "the classifier kept no weak-Pareto candidates; lower the threshold or train longer",
            ));
        }
        let strong = plane_filter(&weak, &config.filter)?;
        write_strong_csv(&out_dir.join(STRONG_FRONT_FILE), &problem, &strong)?;
        Ok(strong)
    })?;
    timings.filter_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (density_report, front_report) = stage("verify", || {
        let d = density(problem.name(), strong.points.len(), inference.len())?;
        let fe = if problem.has_analytic_front() {
            let xs: Vec<Vec<f64>> = strong.points.iter().map(|p| p.x.clone()).collect();
            Some(front_error(&problem, &xs, config.front_tolerance)?)
        } else {
            None
        };
        Ok((d, fe))
    })?;
    timings.verify_s = t.elapsed().as_secs_f64();
    timings.total_s = total.elapsed().as_secs_f64();

    let report = RunReport {
        case: problem.name(),
        n_train: split.train.len(),
        n_validation: split.validation.len(),
        n_inference: inference.len(),
        n_weak: weak.points.len(),
        n_strong: strong.points.len(),
        train: &train_report,
        filter: &strong.stats,
        density: &density_report,
        front_error: front_report.as_ref(),
        timings: &timings,
    };
    write_json(&out_dir.join(REPORT_FILE), &report)?;

    Ok(RunArtifact {
        case: problem.name().to_string(),
        config: config.clone(),
        model,
        train_report,
        weak,
        strong,
        density: density_report,
        front_error: front_report,
        timings,
        out_dir: out_dir.to_path_buf(),
    })
}

/// One line of a [`RunAllSummary`].
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub case: String,
    /// Extraction yield of a successful run.
    pub density_percent: Option<f64>,
    pub points: Option<usize>,
    pub evaluations: Option<usize>,
    /// Why the case failed, when it did.
    pub error: Option<String>,
}

/// Per-case outcomes of [`run_all`], displayable as a yield table.
#[derive(Debug, Clone, Serialize)]
pub struct RunAllSummary {
    pub rows: Vec<SummaryRow>,
}

impl RunAllSummary {
    /// True when every case ran to completion.
    pub fn all_succeeded(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
    }
}

impl fmt::Display for RunAllSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<22} {:>9} {:>8} {:>8}",
            "case", "density%", "points", "evals"
        )?;
        for row in &self.rows {
            match (&row.error, row.density_percent) {
                (None, Some(d)) => writeln!(
                    f,
                    "{:<22} {:>9.2} {:>8} {:>8}",
                    row.case,
                    d,
                    row.points.unwrap_or(0),
                    row.evaluations.unwrap_or(0)
                )?,
                _ => writeln!(
                    f,
                    "{:<22} FAILED: {}",
                    row.case,
                    row.error.as_deref().unwrap_or("unknown error")
                )?,
            }
        }
        Ok(())
    }
}

/// Run several cases with one shared config template, continuing past
/// per-case failures.  Each case lands in `out_root/case-<name>`, and its
/// row reports either the extraction yield or the error.
pub fn run_all(cases: &[String], base: &RunConfig, out_root: &Path) -> Result<RunAllSummary> {
    fs::create_dir_all(out_root)?;
    let mut rows = Vec::with_capacity(cases.len());
    for name in cases {
        let mut config = base.clone();
        config.case = name.clone();
        let dir = out_root.join(format!("case-{}", name.trim().to_ascii_lowercase()));
        match run_case(&config, &dir) {
            Ok(artifact) => rows.push(SummaryRow {
                case: name.clone(),
                density_percent: Some(artifact.density.density_percent),
                points: Some(artifact.density.points),
                evaluations: Some(artifact.density.evaluations),
                error: None,
            }),
            Err(e) => rows.push(SummaryRow {
                case: name.clone(),
                density_percent: None,
                points: None,
                evaluations: None,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok(RunAllSummary { rows })
}

/// Evaluate a trained classifier's weak-Pareto probability on a regular
/// grid over its own input box, `side` points per dimension (endpoints
/// included), last dimension fastest.  Returns CSV header and rows
/// (`x_1..x_n, p_pareto`).  Supports up to three variables; beyond that the
/// grid is too large to be useful as a flat file.
pub fn probability_field(model: &MlpModel, side: usize) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let n = model.n_inputs();
    if n > 3 {
        return Err(Error::Input(format!(
            "probability field export supports at most 3 variables, the model has {n}"
        )));
    }
    if side < 2 {
        return Err(Error::input(
            "probability field needs at least 2 grid points per side",
        ));
    }
    let bounds = model.input_box();
    let mut header = family("x", n);
    header.push("p_pareto".into());
    let total = side.pow(n as u32);
    let mut rows = Vec::with_capacity(total);
    let mut x = vec![0.0; n];
    for flat in 0..total {
        let mut rem = flat;
        for dim in (0..n).rev() {
            let step = rem % side;
            rem /= side;
            let (lo, hi) = bounds[dim];
            x[dim] = lo + (hi - lo) * step as f64 / (side - 1) as f64;
        }
        let p = model.forward(&x)?;
        let mut row: Vec<String> = x.iter().map(|&v| format_sig(v)).collect();
        row.push(format_sig(p[0]));
        rows.push(row);
    }
    Ok((header, rows))
}
