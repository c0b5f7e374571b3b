//! Constrained multi-objective problem definitions.
//!
//! A [`MooProblem`] bundles `k` objectives and `m` inequality constraints
//! (canonical form `g_j(x) <= 0`) over a box in `R^n`, together with their
//! gradients. Everything downstream — discriminant labeling, sampling,
//! training, filtering — consumes this one type.
//!
//! Conventions:
//!
//! * Objectives are stored in minimization form. A problem built with
//!   [`ProblemBuilder::maximize`] negates its objectives internally and
//!   [`MooProblem::display_objectives`] undoes the negation for reporting.
//! * Box bounds participate in the constraint set. A two-sided bound
//!   `lo <= x_j <= hi` becomes the single smooth constraint
//!   `(x_j - lo)(x_j - hi) <= 0`, which is zero exactly on both faces.
//!   Problems whose published form has one-sided sign constraints add those
//!   explicitly instead.
//! * Gradients are analytic closures where available and central finite
//!   differences otherwise; the choice is per objective/constraint.
//! * A problem is immutable after construction and safe to share across
//!   threads; evaluation never mutates.

mod cases;
mod config;
mod fair_search;

pub use cases::{builtin_case, builtin_cases, case_names};
pub use config::problem_from_config_str;
pub use fair_search::{fair_search_problem, FairSearch};

use crate::error::{Error, Result};

/// A sampled point together with its objective and constraint values.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    /// Coordinates in variable space.
    pub x: Vec<f64>,
    /// Objective values `f_1..f_k` in canonical (minimization) form.
    pub fx: Vec<f64>,
    /// Constraint values `g_1..g_m` (feasible where `<= 0`).
    pub gx: Vec<f64>,
}

type ScalarFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradientFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// One scalar field (objective or constraint) with an optional analytic
/// gradient. Fields without one fall back to central finite differences.
struct ScalarField {
    value: ScalarFn,
    gradient: Option<GradientFn>,
}

/// A constrained multi-objective problem over a box domain.
pub struct MooProblem {
    name: String,
    bounds: Vec<(f64, f64)>,
    objectives: Vec<ScalarField>,
    constraints: Vec<ScalarField>,
    analytic_front: Option<ScalarFn>,
    kink_distance: Option<ScalarFn>,
    maximize: bool,
    fd_step: f64,
}

impl std::fmt::Debug for MooProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MooProblem")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("k", &self.k())
            .field("m", &self.m())
            .field("maximize", &self.maximize)
            .finish()
    }
}

impl MooProblem {
    /// Start building a problem with the given display name.
    pub fn builder(name: impl Into<String>) -> ProblemBuilder {
        ProblemBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.bounds.len()
    }

    /// Number of objectives.
    pub fn k(&self) -> usize {
        self.objectives.len()
    }

    /// Number of inequality constraints.
    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    /// Per-variable `(lo, hi)` box bounds.
    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// True when the problem was posed as maximization; objective values in
    /// [`Point::fx`] are negated relative to the user-facing scale.
    pub fn is_maximize(&self) -> bool {
        self.maximize
    }

    /// True when the true Pareto manifold is known in closed form.
    pub fn has_analytic_front(&self) -> bool {
        self.analytic_front.is_some()
    }

    /// Distance from `x` to the known Pareto manifold in variable space.
    pub fn front_distance(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        match &self.analytic_front {
            Some(d) => Ok(d(x)),
            None => Err(Error::NoAnalyticFront {
                case: self.name.clone(),
            }),
        }
    }

    /// Distance from `x` to the nearest gradient non-differentiability, for
    /// problems that have one (`None` means every point is smooth).
    pub fn kink_distance(&self, x: &[f64]) -> Option<f64> {
        self.kink_distance.as_ref().map(|d| d(x))
    }

    /// Map canonical objective values back to the user-facing scale.
    pub fn display_objectives(&self, fx: &[f64]) -> Vec<f64> {
        if self.maximize {
            fx.iter().map(|v| -v).collect()
        } else {
            fx.to_vec()
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Evaluate all objectives and constraints at `x`.
    ///
    /// Fails on a dimension mismatch or when any value comes back non-finite,
    /// naming the offending objective/constraint index.
    pub fn evaluate(&self, x: &[f64]) -> Result<Point> {
        self.check_dim(x)?;
        let mut fx = Vec::with_capacity(self.k());
        for (i, o) in self.objectives.iter().enumerate() {
            let v = (o.value)(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteObjective { index: i + 1 });
            }
            fx.push(v);
        }
        let mut gx = Vec::with_capacity(self.m());
        for (j, c) in self.constraints.iter().enumerate() {
            let v = (c.value)(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteConstraint { index: j + 1 });
            }
            gx.push(v);
        }
        Ok(Point {
            x: x.to_vec(),
            fx,
            gx,
        })
    }

    /// True when `x` satisfies every inequality constraint, i.e. `g_j(x) <= 0`
    /// for all `j`. Box faces evaluate to exactly zero under the quadratic
    /// bound encoding and count as feasible. Only constraints are evaluated.
    pub fn is_feasible(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        for (j, c) in self.constraints.iter().enumerate() {
            let v = (c.value)(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteConstraint { index: j + 1 });
            }
            if v > 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Gradients of all objectives at `x`, one length-`n` row per objective.
    pub fn objective_gradients(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_dim(x)?;
        self.objectives
            .iter()
            .enumerate()
            .map(|(i, o)| self.field_gradient(o, x, "objective", i + 1))
            .collect()
    }

    /// Gradients of all constraints at `x`, one length-`n` row per constraint.
    pub fn constraint_gradients(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_dim(x)?;
        self.constraints
            .iter()
            .enumerate()
            .map(|(j, c)| self.field_gradient(c, x, "constraint", j + 1))
            .collect()
    }

    fn field_gradient(
        &self,
        field: &ScalarField,
        x: &[f64],
        of: &'static str,
        index: usize,
    ) -> Result<Vec<f64>> {
        let g = match &field.gradient {
            Some(grad) => grad(x),
            None => central_difference(&field.value, x, self.fd_step),
        };
        if g.len() != self.n() {
            return Err(Error::Input(format!(
                "gradient of {of} {index} has length {}, expected {}",
                g.len(),
                self.n()
            )));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteGradient { of, index });
        }
        Ok(g)
    }
}

/// Central finite-difference gradient of a scalar function.
pub(crate) fn central_difference(f: &ScalarFn, x: &[f64], step: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    let mut g = vec![0.0; x.len()];
    for i in 0..x.len() {
        let orig = x[i];
        xp[i] = orig + step;
        let hi = f(&xp);
        xp[i] = orig - step;
        let lo = f(&xp);
        xp[i] = orig;
        g[i] = (hi - lo) / (2.0 * step);
    }
    g
}

/// Step-by-step constructor for [`MooProblem`].
pub struct ProblemBuilder {
    name: String,
    bounds: Vec<(f64, f64)>,
    objectives: Vec<ScalarField>,
    constraints: Vec<ScalarField>,
    analytic_front: Option<ScalarFn>,
    kink_distance: Option<ScalarFn>,
    maximize: bool,
    fd_step: f64,
}

impl ProblemBuilder {
    fn new(name: impl Into<String>) -> Self {
        ProblemBuilder {
            name: name.into(),
            bounds: Vec::new(),
            objectives: Vec::new(),
            constraints: Vec::new(),
            analytic_front: None,
            kink_distance: None,
            maximize: false,
            fd_step: 1e-6,
        }
    }

    /// Append one variable with its box bounds.
    pub fn variable(mut self, lo: f64, hi: f64) -> Self {
        self.bounds.push((lo, hi));
        self
    }

    /// Append `count` variables sharing the same bounds.
    pub fn variables(mut self, count: usize, lo: f64, hi: f64) -> Self {
        self.bounds.extend(std::iter::repeat((lo, hi)).take(count));
        self
    }

    /// Objective with an analytic gradient.
    pub fn objective<F, G>(mut self, value: F, gradient: G) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.objectives.push(ScalarField {
            value: Box::new(value),
            gradient: Some(Box::new(gradient)),
        });
        self
    }

    /// Objective whose gradient is taken by finite differences.
    pub fn objective_fd<F>(mut self, value: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.objectives.push(ScalarField {
            value: Box::new(value),
            gradient: None,
        });
        self
    }

    /// Constraint `g(x) <= 0` with an analytic gradient.
    pub fn constraint<F, G>(mut self, value: F, gradient: G) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.constraints.push(ScalarField {
            value: Box::new(value),
            gradient: Some(Box::new(gradient)),
        });
        self
    }

    /// Constraint whose gradient is taken by finite differences.
    pub fn constraint_fd<F>(mut self, value: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.constraints.push(ScalarField {
            value: Box::new(value),
            gradient: None,
        });
        self
    }

    /// Encode the two-sided box bound of variable `index` (0-based) as the
    /// smooth constraint `(x_j - lo)(x_j - hi) <= 0`.
    pub fn box_constraint(mut self, index: usize) -> Self {
        let (lo, hi) = self.bounds[index];
        let n = self.bounds.len();
        self.constraints.push(ScalarField {
            value: Box::new(move |x: &[f64]| (x[index] - lo) * (x[index] - hi)),
            gradient: Some(Box::new(move |x: &[f64]| {
                let mut g = vec![0.0; n];
                g[index] = 2.0 * x[index] - lo - hi;
                g
            })),
        });
        self
    }

    /// [`Self::box_constraint`] for every variable declared so far.
    pub fn box_constraints_for_all(mut self) -> Self {
        for index in 0..self.bounds.len() {
            self = self.box_constraint(index);
        }
        self
    }

    /// One-sided sign constraint `-x_j <= 0` (i.e. `x_j >= 0`) for problems
    /// whose published form bounds a variable from below only.
    pub fn nonnegative_constraint(mut self, index: usize) -> Self {
        let n = self.bounds.len();
        self.constraints.push(ScalarField {
            value: Box::new(move |x: &[f64]| -x[index]),
            gradient: Some(Box::new(move |x: &[f64]| {
                debug_assert!(x.len() == n);
                let mut g = vec![0.0; n];
                g[index] = -1.0;
                g
            })),
        });
        self
    }

    /// Distance function to the known Pareto manifold in variable space.
    pub fn analytic_front<F>(mut self, distance: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.analytic_front = Some(Box::new(distance));
        self
    }

    /// Distance function to the nearest gradient kink (non-differentiability).
    pub fn kink_distance<F>(mut self, distance: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.kink_distance = Some(Box::new(distance));
        self
    }

    /// Pose the problem as maximization. Objectives passed to this builder
    /// must already produce canonical (negated) values; display undoes it.
    pub fn maximize(mut self, yes: bool) -> Self {
        self.maximize = yes;
        self
    }

    /// Step used by finite-difference gradients (default `1e-6`).
    pub fn finite_difference_step(mut self, step: f64) -> Self {
        self.fd_step = step;
        self
    }

    /// Validate and finish.
    pub fn build(self) -> Result<MooProblem> {
        if self.bounds.is_empty() {
            return Err(Error::input("a problem needs at least one variable"));
        }
        if self.objectives.is_empty() {
            return Err(Error::input("a problem needs at least one objective"));
        }
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Input(format!(
                    "variable {} has invalid bounds [{lo}, {hi}]",
                    j + 1
                )));
            }
        }
        if !(self.fd_step.is_finite() && self.fd_step > 0.0) {
            return Err(Error::input("finite-difference step must be positive"));
        }
        Ok(MooProblem {
            name: self.name,
            bounds: self.bounds,
            objectives: self.objectives,
            constraints: self.constraints,
            analytic_front: self.analytic_front,
            kink_distance: self.kink_distance,
            maximize: self.maximize,
            fd_step: self.fd_step,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn toy() -> MooProblem {
        // f1 = x1^2 + x2, f2 = x1*x2 over [0,1] x [-1,1], box-encoded bounds.
        MooProblem::builder("toy")
            .variable(0.0, 1.0)
            .variable(-1.0, 1.0)
            .objective(|x| x[0] * x[0] + x[1], |x| vec![2.0 * x[0], 1.0])
            .objective_fd(|x| x[0] * x[1])
            .box_constraints_for_all()
            .build()
            .unwrap()
    }

    #[test]
    fn evaluate_returns_objectives_and_constraints() {
        let p = toy();
        assert_eq!((p.n(), p.k(), p.m()), (2, 2, 2));
        let pt = p.evaluate(&[0.5, -0.5]).unwrap();
        assert_relative_eq!(pt.fx[0], -0.25);
        assert_relative_eq!(pt.fx[1], -0.25);
        // (0.5-0)(0.5-1) and (-0.5+1)(-0.5-1)
        assert_relative_eq!(pt.gx[0], -0.25);
        assert_relative_eq!(pt.gx[1], -0.75);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = toy();
        match p.evaluate(&[0.5]) {
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1,
            }) => {}
            other => panic!("expected dimension mismatch, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_objective_names_its_index() {
        let p = MooProblem::builder("bad")
            .variable(0.0, 1.0)
            .objective_fd(|x| x[0])
            .objective_fd(|x| (x[0] - 2.0).ln()) // NaN inside the box
            .build()
            .unwrap();
        match p.evaluate(&[0.5]) {
            Err(Error::NonFiniteObjective { index: 2 }) => {}
            other => panic!("expected non-finite objective 2, got {other:?}"),
        }
    }

    #[test]
    fn box_constraints_vanish_on_faces_and_are_negative_inside() {
        let p = toy();
        let on_face = p.evaluate(&[0.0, 0.3]).unwrap();
        assert!(on_face.gx[0].abs() <= 1e-12);
        let inside = p.evaluate(&[0.5, 0.3]).unwrap();
        assert!(inside.gx.iter().all(|g| *g <= 0.0));
    }

    #[test]
    fn finite_difference_gradient_matches_analytic_for_smooth_field() {
        let p = toy();
        let grads = p.objective_gradients(&[0.4, 0.2]).unwrap();
        // Objective 2 (x1*x2) uses finite differences; exact gradient (x2, x1).
        assert_relative_eq!(grads[1][0], 0.2, epsilon = 1e-9);
        assert_relative_eq!(grads[1][1], 0.4, epsilon = 1e-9);
    }

    #[test]
    fn display_objectives_unnegate_for_maximization() {
        let p = MooProblem::builder("maxi")
            .variable(0.0, 1.0)
            .objective(|x| -x[0], |_| vec![-1.0])
            .maximize(true)
            .build()
            .unwrap();
        let pt = p.evaluate(&[0.25]).unwrap();
        assert_eq!(pt.fx[0], -0.25);
        assert_eq!(p.display_objectives(&pt.fx), vec![0.25]);
    }

    #[test]
    fn front_distance_requires_an_analytic_front() {
        let p = toy();
        assert!(matches!(
            p.front_distance(&[0.1, 0.1]),
            Err(Error::NoAnalyticFront { .. })
        ));
    }

    #[test]
    fn builder_rejects_degenerate_bounds() {
        let r = MooProblem::builder("bad")
            .variable(1.0, 1.0)
            .objective_fd(|x| x[0])
            .build();
        assert!(r.is_err());
    }
}
