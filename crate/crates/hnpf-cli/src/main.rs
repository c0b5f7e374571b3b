//! Command-line front end for the two-stage Pareto-front extractor.
//!
//! Subcommands mirror the library pipeline: `run` executes one case end to
//! end, `run-all` sweeps several, `filter` reduces an external CSV of
//! objective values to its non-dominated subset, `certify` scores candidate
//! points against the optimality discriminant, `list-cases` names every
//! runnable case, and `export-probability-field` grids a trained classifier
//! for external plotting.
//!
//! Exit codes: 0 success, 1 runtime/stage failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hnpf::csvio::{format_sig, read_csv_file, write_csv_file};
use hnpf::filter::{oracle_filter_values, plane_filter_values, FilterConfig};
use hnpf::pipeline::{
    known_case_names, probability_field, resolve_case, run_all, run_case, run_problem, RunConfig,
};
use hnpf::problems::{problem_from_config_str, MooProblem};
use hnpf::verify::certify_points;
use hnpf::{Error, MlpModel};

/// Environment variable naming the default output root.
const OUT_DIR_ENV: &str = "HNPF_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "hnpf",
    version,
    about = "Two-stage extraction of Pareto fronts from sampled data",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the pipeline-driving subcommands; every flag overrides
/// the corresponding config-file field, which in turn overrides the default.
#[derive(Args, Clone)]
struct PipelineFlags {
    /// TOML file overriding any run-config field
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Seed for both the sampling and the training generator
    #[arg(long)]
    seed: Option<u64>,

    /// Cap on training epochs
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    epochs: Option<u64>,

    /// Classifier probability cutoff for keeping a point
    #[arg(long)]
    threshold: Option<f64>,

    /// Slab width of the non-dominance filter (default: per-function
    /// range / bins)
    #[arg(long)]
    h: Option<f64>,

    /// Output directory (default: $HNPF_OUT_DIR or ./runs)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case end to end and write its artifacts
    Run {
        /// Case name, or path to a problem definition TOML
        #[arg(long, default_value = "I")]
        case: String,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Run several cases, continuing past failures, and print a yield table
    RunAll {
        /// Comma-separated case names (default: every known case)
        #[arg(long, value_delimiter = ',')]
        cases: Option<Vec<String>>,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Reduce a CSV of objective values to its non-dominated rows
    Filter {
        /// Input CSV; objective columns are `f_1..f_k`, or all columns when
        /// no `f_1` header is present
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Output CSV (input rows that survive, with an index column)
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
        /// Slab width (default: per-function range / bins)
        #[arg(long)]
        h: Option<f64>,
        /// Slab count used when no explicit width is given
        #[arg(long, default_value_t = 2000)]
        bins: usize,
        /// Use the exact pairwise filter instead of the slab sweep
        #[arg(long)]
        oracle: bool,
        /// Whether the objectives are minimized or maximized
        #[arg(long, value_parser = ["min", "max"], default_value = "min")]
        sense: String,
    },
    /// Score candidate points against the weak-optimality discriminant
    Certify {
        /// Case name, or path to a problem definition TOML
        #[arg(long)]
        case: String,
        /// CSV of points; coordinates are `x_1..x_n`, or all columns when
        /// no `x_1` header is present
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Largest normalized discriminant accepted as on-manifold
        #[arg(long, default_value_t = 0.001)]
        epsilon: f64,
    },
    /// List every runnable case name
    ListCases,
    /// Evaluate a trained classifier on a regular grid for plotting
    ExportProbabilityField {
        /// Saved classifier file (model.txt of a run)
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Output CSV of (coordinates, probability) rows
        #[arg(long, value_name = "FILE")]
        output: PathBuf,
        /// Grid points per dimension
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { case, flags } => cmd_run(&case, &flags),
        Command::RunAll { cases, flags } => cmd_run_all(cases, &flags),
        Command::Filter { input, output, h, bins, oracle, sense } => {
            cmd_filter(&input, &output, h, bins, oracle, &sense)
        }
        Command::Certify { case, input, epsilon } => cmd_certify(&case, &input, epsilon),
        Command::ListCases => {
            for name in known_case_names() {
                println!("{name}");
            }
            Ok(())
        }
        Command::ExportProbabilityField { model, output, grid } => {
            cmd_export_field(&model, &output, grid)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Failures split by exit code: usage errors (2) versus runtime errors (1).
enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(Error::Io(e))
    }
}

type CliResult = Result<(), CliError>;

/// Build the effective run config: defaults, then the config file, then
/// individual flags.
fn effective_config(flags: &PipelineFlags) -> Result<RunConfig, CliError> {
    let mut config = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
            })?;
            RunConfig::from_toml_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = flags.seed {
        config.set_seed(seed);
    }
    if let Some(epochs) = flags.epochs {
        config.train.max_epochs = epochs as usize;
    }
    if let Some(threshold) = flags.threshold {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(CliError::Usage(format!(
                "threshold must lie in [0, 1], got {threshold}"
            )));
        }
        config.train.threshold = threshold;
    }
    if let Some(h) = flags.h {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CliError::Usage(format!("slab width must be positive, got {h}")));
        }
        config.filter.h = Some(h);
    }
    Ok(config)
}

/// Default output root: `$HNPF_OUT_DIR`, falling back to `./runs`.
fn out_root(flags: &PipelineFlags) -> PathBuf {
    flags
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"))
}

/// Interpret `--case` as a known case name or as a problem-definition file.
/// Returns the problem when the value named a file.
fn case_or_problem(case: &str) -> Result<Option<MooProblem>, CliError> {
    if resolve_case(case).is_ok() {
        return Ok(None);
    }
    let path = Path::new(case);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read problem file {}: {e}", path.display()))
        })?;
        let problem = problem_from_config_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return Ok(Some(problem));
    }
    Err(CliError::Usage(format!(
        "unknown case '{case}' and no such problem file; known cases: {}",
        known_case_names().join(", ")
    )))
}

fn cmd_run(case: &str, flags: &PipelineFlags) -> CliResult {
    let mut config = effective_config(flags)?;
    config.case = case.to_string();
    let custom = case_or_problem(case)?;
    let root = out_root(flags);
    let artifact = match custom {
        Some(problem) => {
            let dir = match &flags.out {
                Some(dir) => dir.clone(),
                None => root.join(format!("case-{}", sanitize(problem.name()))),
            };
            run_problem(&problem, &config, &dir)?
        }
        None => {
            let dir = match &flags.out {
                Some(dir) => dir.clone(),
                None => root.join(format!("case-{}", sanitize(case))),
            };
            run_case(&config, &dir)?
        }
    };
    println!("{}", artifact.density);
    match &artifact.front_error {
        Some(report) => println!("{report}"),
        None => println!("front error: no analytic front for this case"),
    }
    println!("artifacts: {}", artifact.out_dir.display());
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.trim()
        .to_ascii_lowercase()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
        .collect()
}

fn cmd_run_all(cases: Option<Vec<String>>, flags: &PipelineFlags) -> CliResult {
    let config = effective_config(flags)?;
    let cases = cases.unwrap_or_else(known_case_names);
    for name in &cases {
        if resolve_case(name).is_err() {
            return Err(CliError::Usage(format!(
                "unknown case '{name}'; known cases: {}",
                known_case_names().join(", ")
            )));
        }
    }
    let root = out_root(flags);
    let summary = run_all(&cases, &config, &root)?;
    print!("{summary}");
    println!("artifacts: {}", root.display());
    if summary.all_succeeded() {
        Ok(())
    } else {
        Err(CliError::Run(Error::Input("at least one case failed; see the table above".into())))
    }
}

/// Columns holding the data: the `prefix_1..` family when present,
/// otherwise every column.
fn data_columns(table: &hnpf::csvio::CsvTable, prefix: &str) -> Vec<usize> {
    table
        .column_family(prefix)
        .unwrap_or_else(|| (0..table.header.len()).collect())
}

fn cmd_filter(
    input: &Path,
    output: &Path,
    h: Option<f64>,
    bins: usize,
    oracle: bool,
    sense: &str,
) -> CliResult {
    let table = read_csv_file(input)?;
    if table.rows.is_empty() {
        return Err(CliError::Run(Error::Input(format!(
            "{} holds no data rows to filter",
            input.display()
        ))));
    }
    let cols = data_columns(&table, "f");
    let flip = if sense == "max" { -1.0 } else { 1.0 };
    let values: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|row| cols.iter().map(|&c| flip * row[c]).collect())
        .collect();
    let survivors = if oracle {
        oracle_filter_values(&values)?.0
    } else {
        let config = FilterConfig { h, bins };
        config.validate()?;
        plane_filter_values(&values, &config)?.0
    };

    let mut header = vec!["index".to_string()];
    header.extend(cols.iter().map(|&c| table.header[c].clone()));
    let rows: Vec<Vec<String>> = survivors
        .iter()
        .map(|&r| {
            let mut row = vec![r.to_string()];
            row.extend(cols.iter().map(|&c| format_sig(table.rows[r][c])));
            row
        })
        .collect();
    write_csv_file(output, &header, &rows)?;
    println!(
        "kept {} of {} rows ({}); wrote {}",
        survivors.len(),
        table.rows.len(),
        if oracle { "pairwise filter" } else { "slab sweep" },
        output.display()
    );
    Ok(())
}

fn cmd_certify(case: &str, input: &Path, epsilon: f64) -> CliResult {
    let problem = match case_or_problem(case)? {
        Some(problem) => problem,
        None => resolve_case(case)?.problem,
    };
    let table = read_csv_file(input)?;
    let cols = data_columns(&table, "x");
    if cols.len() != problem.n() {
        return Err(CliError::Run(Error::Input(format!(
            "{} has {} coordinate columns but the problem has {} variables",
            input.display(),
            cols.len(),
            problem.n()
        ))));
    }
    let points: Vec<Vec<f64>> =
        table.rows.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
    let report = certify_points(&problem, &points, epsilon)?;
    println!("{report}");
    Ok(())
}

fn cmd_export_field(model_path: &Path, output: &Path, grid: usize) -> CliResult {
    if !model_path.is_file() {
        return Err(CliError::Usage(format!(
            "model file {} does not exist",
            model_path.display()
        )));
    }
    let model = MlpModel::load(model_path)?;
    let (header, rows) = probability_field(&model, grid)?;
    write_csv_file(output, &header, &rows)?;
    println!("wrote {} rows to {}", rows.len(), output.display());
    Ok(())
}
