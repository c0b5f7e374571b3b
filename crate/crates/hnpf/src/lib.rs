//! Two-stage extraction of Pareto fronts for constrained multi-objective
//! problems.
//!
//! Stage one trains a small classifier on a first-order optimality
//! discriminant and keeps the sample points it marks as candidates (the weak
//! Pareto manifold). Stage two sweeps axis-aligned slabs through objective
//! space and keeps one best point per slab, reducing the candidates to the
//! non-dominated (strong) Pareto set. Verification utilities measure the
//! result against problems whose fronts are known in closed form.
//!
//! The [`guide`] module walks through all of it chapter by chapter; the
//! module docs below are the reference. In short:
//!
//! * [`problems`] defines constrained multi-objective problems — seven
//!   built-in benchmarks, a TOML format, and a builder API.
//! * [`fritz_john`] turns first-order optimality into a scalar
//!   discriminant that vanishes on the weak Pareto manifold.
//! * [`sampler`] draws feasible training and inference samples.
//! * [`neural`] trains the classifier on discriminant labels and sweeps
//!   the inference sample (stage one).
//! * [`filter`] reduces the candidates to the non-dominated subset with
//!   a near-linear plane sweep (stage two).
//! * [`verify`] scores the result: yield, geometric error, first-order
//!   certification.
//! * [`pipeline`] chains the stages into reproducible, artifact-writing
//!   runs.
//!
//! # Quick start
//!
//! Extract the front of a built-in benchmark at the standard protocol
//! (11 000 training points, 90 000 inference points — takes a few
//! seconds):
//!
//! ```no_run
//! use hnpf::{run_case, RunConfig};
//!
//! # fn main() -> hnpf::Result<()> {
//! let config = RunConfig {
//!     case: "II".into(),
//!     ..RunConfig::default()
//! };
//! let run = run_case(&config, std::path::Path::new("runs/case-ii"))?;
//! println!(
//!     "{} non-dominated points from {} evaluations ({:.2}%)",
//!     run.strong.points.len(),
//!     config.sample.n_infer,
//!     run.density.density_percent,
//! );
//! # Ok(())
//! # }
//! ```
//!
//! Or use stage two on its own — reduce any set of objective vectors to
//! its non-dominated subset:
//!
//! ```
//! use hnpf::{plane_filter_values, FilterConfig};
//!
//! # fn main() -> hnpf::Result<()> {
//! let values = vec![
//!     vec![1.0, 4.0],
//!     vec![2.0, 5.0], // dominated by the row above
//!     vec![0.5, 6.0],
//! ];
//! let (kept, _stats) = plane_filter_values(&values, &FilterConfig::default())?;
//! assert_eq!(kept, vec![0, 2]);
//! # Ok(())
//! # }
//! ```

pub mod csvio;
pub mod error;
pub mod expr;
pub mod filter;
pub mod fritz_john;
pub mod guide;
pub mod linalg;
pub mod neural;
pub mod pipeline;
pub mod problems;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
pub use filter::{
    dominates, filter_complexity_probe, oracle_filter, oracle_filter_values, plane_filter,
    plane_filter_values, staircase_values, FilterConfig, FilterStats, StrongParetoSet,
};
pub use fritz_john::{discriminant, fritz_john_matrix, label_batch, DiscriminantResult};
pub use neural::{
    bce_loss, extract_weak_front, targets_from_labels, train, LabelMode, MlpModel, TrainConfig,
    TrainReport, WeakParetoSet, WeakPoint,
};
pub use pipeline::{
    known_case_names, probability_field, resolve_case, run_all, run_case, run_problem,
    ResolvedCase, RunAllSummary, RunArtifact, RunConfig, StageTimings, SummaryRow,
};
pub use problems::{
    builtin_case, builtin_cases, case_names, fair_search_problem, problem_from_config_str,
    FairSearch, MooProblem, Point, ProblemBuilder,
};
pub use sampler::{sample, sample_inference, BinomialSpec, Distribution, SamplePlan, SplitSamples};
pub use verify::{
    certify_points, density, front_error, CertificationReport, DensityReport, FrontErrorReport,
    GEOMETRIC_TOLERANCE,
};
