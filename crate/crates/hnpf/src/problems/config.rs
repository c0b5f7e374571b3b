//! User-defined problems from a TOML description.
//!
//! A config names the problem, lists per-variable bounds, and gives each
//! objective and constraint as an expression string over `x1..xn` (see
//! [`crate::expr`] for the grammar). Gradients are expression lists; a field
//! without one is rejected unless `finite_differences = true` opts the whole
//! problem into numeric gradients. Variable bounds are encoded as two-sided
//! constraints `(x_j - lo)(x_j - hi) <= 0` unless `box_constraints = false`.
//!
//! ```toml
//! name = "quarter-disc"
//! finite_differences = true
//!
//! [[variable]]
//! lower = 0.0
//! upper = 1.0
//!
//! [[variable]]
//! lower = 0.0
//! upper = 1.0
//!
//! [[objective]]
//! expression = "x1"
//! gradient = ["1", "0"]
//!
//! [[objective]]
//! expression = "x2"
//! gradient = ["0", "1"]
//!
//! [[constraint]]
//! expression = "1 - x1^2 - x2^2"
//! ```

use serde::Deserialize;

use super::{MooProblem, ProblemBuilder};
use crate::error::{Error, Result};
use crate::expr::Expr;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    name: String,
    #[serde(default)]
    maximize: bool,
    /// Allow objectives/constraints without gradient lists (numeric gradients).
    #[serde(default)]
    finite_differences: bool,
    finite_difference_step: Option<f64>,
    /// Encode variable bounds as constraints (default true).
    #[serde(default = "default_true")]
    box_constraints: bool,
    /// Optional redundant dimension declaration, validated when present.
    dimensions: Option<RawDimensions>,
    #[serde(rename = "variable")]
    variables: Vec<RawVariable>,
    #[serde(rename = "objective")]
    objectives: Vec<RawField>,
    #[serde(default, rename = "constraint")]
    constraints: Vec<RawField>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDimensions {
    variables: usize,
    objectives: usize,
    /// Total constraint count, including encoded variable bounds.
    constraints: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVariable {
    lower: f64,
    upper: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    expression: String,
    gradient: Option<Vec<String>>,
}

/// Build a [`MooProblem`] from TOML text.
pub fn problem_from_config_str(source: &str) -> Result<MooProblem> {
    let raw: RawProblem =
        toml::from_str(source).map_err(|e| Error::Config(format!("config parse error: {e}")))?;
    let n = raw.variables.len();
    if n == 0 {
        return Err(Error::Config(
            "config declares no [[variable]] entries".into(),
        ));
    }
    if raw.objectives.is_empty() {
        return Err(Error::Config(
            "config declares no [[objective]] entries".into(),
        ));
    }

    let mut builder = MooProblem::builder(raw.name);
    for v in &raw.variables {
        builder = builder.variable(v.lower, v.upper);
    }
    for (i, field) in raw.objectives.iter().enumerate() {
        builder = add_field(
            builder,
            field,
            n,
            raw.finite_differences,
            "objective",
            i,
            true,
        )?;
    }
    for (i, field) in raw.constraints.iter().enumerate() {
        builder = add_field(
            builder,
            field,
            n,
            raw.finite_differences,
            "constraint",
            i,
            false,
        )?;
    }
    if raw.box_constraints {
        builder = builder.box_constraints_for_all();
    }
    if let Some(step) = raw.finite_difference_step {
        builder = builder.finite_difference_step(step);
    }
    builder = builder.maximize(raw.maximize);
    let problem = builder.build()?;

    if let Some(dims) = &raw.dimensions {
        let (got_n, got_k, got_m) = (problem.n(), problem.k(), problem.m());
        if dims.variables != got_n || dims.objectives != got_k || dims.constraints != got_m {
            return Err(Error::Config(format!(
                "declared dimensions {}x{}x{} (variables x objectives x constraints) do not \
                 match the parsed problem {got_n}x{got_k}x{got_m}",
                dims.variables, dims.objectives, dims.constraints
            )));
        }
    }
    Ok(problem)
}

fn add_field(
    builder: ProblemBuilder,
    field: &RawField,
    n: usize,
    allow_fd: bool,
    kind: &str,
    index: usize,
    is_objective: bool,
) -> Result<ProblemBuilder> {
    let which = format!("{kind} {}", index + 1);
    let value =
        Expr::parse(&field.expression, n).map_err(|e| Error::Config(format!("{which}: {e}")))?;
    let value_fn = move |x: &[f64]| value.eval(x);
    match &field.gradient {
        Some(parts) => {
            if parts.len() != n {
                return Err(Error::Config(format!(
                    "{which}: gradient has {} components, expected {n}",
                    parts.len()
                )));
            }
            let mut grads = Vec::with_capacity(n);
            for (j, part) in parts.iter().enumerate() {
                let g = Expr::parse(part, n).map_err(|e| {
                    Error::Config(format!("{which}, gradient component {}: {e}", j + 1))
                })?;
                grads.push(g);
            }
            let grad_fn = move |x: &[f64]| grads.iter().map(|g| g.eval(x)).collect::<Vec<f64>>();
            Ok(if is_objective {
                builder.objective(value_fn, grad_fn)
            } else {
                builder.constraint(value_fn, grad_fn)
            })
        }
        None => {
            if !allow_fd {
                return Err(Error::Config(format!(
                    "{which} has no gradient; set finite_differences = true to permit numeric \
                     gradients"
                )));
            }
            Ok(if is_objective {
                builder.objective_fd(value_fn)
            } else {
                builder.constraint_fd(value_fn)
            })
        }
    }
}
