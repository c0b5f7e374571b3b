//! The built-in benchmark cases.
//!
//! Seven constrained multi-objective problems with known behavior, used
//! throughout the test suite and reachable from the CLI by their roman
//! numeral names `I`..`VII`. Cases I and II additionally carry an analytic
//! description of their true Pareto manifold; Case VI carries a kink
//! indicator for its non-smooth constraint.

use std::f64::consts::PI;

use super::MooProblem;
use crate::error::{Error, Result};

/// `1/sqrt(2)`, the half-width of the Case I box and the offset of its two
/// exponential bowls.
const A: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Names of the built-in cases, in order.
pub fn case_names() -> Vec<&'static str> {
    vec!["I", "II", "III", "IV", "V", "VI", "VII"]
}

/// All built-in cases, in order.
pub fn builtin_cases() -> Vec<MooProblem> {
    vec![
        case_i(),
        case_ii(),
        case_iii(),
        case_iv(),
        case_v(),
        case_vi(),
        case_vii(),
    ]
}

/// Look up one built-in case by its (case-insensitive) roman numeral name.
pub fn builtin_case(name: &str) -> Result<MooProblem> {
    match name.to_ascii_uppercase().as_str() {
        "I" => Ok(case_i()),
        "II" => Ok(case_ii()),
        "III" => Ok(case_iii()),
        "IV" => Ok(case_iv()),
        "V" => Ok(case_v()),
        "VI" => Ok(case_vi()),
        "VII" => Ok(case_vii()),
        other => Err(Error::Input(format!(
            "unknown case `{other}` (expected one of {})",
            case_names().join(", ")
        ))),
    }
}

/// Case I: two offset exponential bowls on `[-1/sqrt2, 1/sqrt2]^2`.
/// n=2, k=2, m=2. True front: the segment `x1 = x2`.
fn case_i() -> MooProblem {
    let bowl = |x: &[f64], c: f64| {
        let r = (x[0] - c).powi(2) + (x[1] - c).powi(2);
        1.0 - (-r).exp()
    };
    let bowl_grad = |x: &[f64], c: f64| {
        let r = (x[0] - c).powi(2) + (x[1] - c).powi(2);
        let e = (-r).exp();
        vec![2.0 * (x[0] - c) * e, 2.0 * (x[1] - c) * e]
    };
    MooProblem::builder("I")
        .variables(2, -A, A)
        .objective(move |x| bowl(x, A), move |x| bowl_grad(x, A))
        .objective(move |x| bowl(x, -A), move |x| bowl_grad(x, -A))
        .box_constraints_for_all()
        .analytic_front(|x| {
            // Distance to the segment {(t, t) : -A <= t <= A}.
            let t = ((x[0] + x[1]) / 2.0).clamp(-A, A);
            ((x[0] - t).powi(2) + (x[1] - t).powi(2)).sqrt()
        })
        .build()
        .expect("case I is well formed")
}

/// Case II: linear first objective against a sinusoidally perturbed bowl.
/// n=2, k=2, m=2 on `[0,1] x [-2,2]`. True front: `x2 = 0, 0 <= x1 <= 1`.
fn case_ii() -> MooProblem {
    MooProblem::builder("II")
        .variable(0.0, 1.0)
        .variable(-2.0, 2.0)
        .objective(|x| x[0], |_| vec![1.0, 0.0])
        .objective(
            |x| 1.0 + x[1] * x[1] - x[0] - 0.1 * (3.0 * PI * x[0]).sin(),
            |x| vec![-1.0 - 0.3 * PI * (3.0 * PI * x[0]).cos(), 2.0 * x[1]],
        )
        .box_constraints_for_all()
        .analytic_front(|x| {
            let t = x[0].clamp(0.0, 1.0);
            ((x[0] - t).powi(2) + x[1].powi(2)).sqrt()
        })
        .build()
        .expect("case II is well formed")
}

/// Case III: identity objectives constrained to a disk minus a sinusoidally
/// scalloped hole. n=2, k=2, m=4 on `[0, pi]^2`.
fn case_iii() -> MooProblem {
    with_scalloped_disk(MooProblem::builder("III").variables(2, 0.0, PI))
        .box_constraint(0)
        .box_constraint(1)
        .build()
        .expect("case III is well formed")
}

/// Shared part of Cases III and VI: `f = (x1, x2)` with the disk constraint
/// `(x1-0.5)^2 + (x2-0.5)^2 <= 0.5` and the scalloped exclusion
/// `x1^2 + x2^2 >= 1 + 0.1 cos(16 atan(x1/x2))` in canonical `<= 0` form.
fn with_scalloped_disk(b: super::ProblemBuilder) -> super::ProblemBuilder {
    b.objective(|x| x[0], |_| vec![1.0, 0.0])
        .objective(|x| x[1], |_| vec![0.0, 1.0])
        .constraint(
            |x| (x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2) - 0.5,
            |x| vec![2.0 * (x[0] - 0.5), 2.0 * (x[1] - 0.5)],
        )
        .constraint(
            // Undefined (NaN) at the origin where x1/x2 is 0/0; evaluation
            // reports that as a non-finite constraint value.
            |x| 1.0 + 0.1 * (16.0 * (x[0] / x[1]).atan()).cos() - x[0] * x[0] - x[1] * x[1],
            |x| {
                let r2 = x[0] * x[0] + x[1] * x[1];
                let s = -1.6 * (16.0 * (x[0] / x[1]).atan()).sin();
                vec![s * x[1] / r2 - 2.0 * x[0], -s * x[0] / r2 - 2.0 * x[1]]
            },
        )
}

/// Case IV: identity objectives constrained to a unit ball around (1,1,1)
/// in the non-negative octant. n=3, k=3, m=4 on `[0,2]^3`; the published
/// form has one-sided sign constraints, so the box is not double-encoded.
fn case_iv() -> MooProblem {
    MooProblem::builder("IV")
        .variables(3, 0.0, 2.0)
        .objective(|x| x[0], |_| vec![1.0, 0.0, 0.0])
        .objective(|x| x[1], |_| vec![0.0, 1.0, 0.0])
        .objective(|x| x[2], |_| vec![0.0, 0.0, 1.0])
        .constraint(
            |x| x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>() - 1.0,
            |x| x.iter().map(|v| 2.0 * (v - 1.0)).collect(),
        )
        .nonnegative_constraint(0)
        .nonnegative_constraint(1)
        .nonnegative_constraint(2)
        .build()
        .expect("case IV is well formed")
}

/// Case V: a 30-dimensional problem whose front sits on an oscillating
/// manifold `y_j(x) = 0`. n=30, k=2, m=30 on `[0,1] x [-1,1]^29`.
fn case_v() -> MooProblem {
    const N: usize = 30;
    // Odd / even index sets over 2..=30 (1-based variable indices).
    let j1: Vec<usize> = (2..=N).filter(|j| j % 2 == 1).collect();
    let j2: Vec<usize> = (2..=N).filter(|j| j % 2 == 0).collect();

    // y_j = x_j - (0.3 x1^2 cos(24 pi x1 + 4 j pi / n) + 0.6 x1) * cos(6 pi x1 + j pi / n)
    fn y(x: &[f64], j: usize) -> f64 {
        let x1 = x[0];
        let a = 0.3 * x1 * x1 * (24.0 * PI * x1 + 4.0 * j as f64 * PI / 30.0).cos() + 0.6 * x1;
        let b = (6.0 * PI * x1 + j as f64 * PI / 30.0).cos();
        x[j - 1] - a * b
    }
    // d y_j / d x1 (for j >= 2; d y_j / d x_j = 1).
    fn dy_dx1(x: &[f64], j: usize) -> f64 {
        let x1 = x[0];
        let phase_a = 24.0 * PI * x1 + 4.0 * j as f64 * PI / 30.0;
        let phase_b = 6.0 * PI * x1 + j as f64 * PI / 30.0;
        let a = 0.3 * x1 * x1 * phase_a.cos() + 0.6 * x1;
        let b = phase_b.cos();
        let da = 0.6 * x1 * phase_a.cos() - 0.3 * x1 * x1 * 24.0 * PI * phase_a.sin() + 0.6;
        let db = -6.0 * PI * phase_b.sin();
        -(da * b + a * db)
    }

    let sum_term = |x: &[f64], js: &[usize]| -> f64 {
        js.iter().map(|&j| y(x, j).powi(2)).sum::<f64>() * 2.0 / js.len() as f64
    };
    let grad_term = |x: &[f64], js: &[usize]| -> Vec<f64> {
        let scale = 2.0 / js.len() as f64;
        let mut g = vec![0.0; N];
        for &j in js {
            let yv = y(x, j);
            g[0] += scale * 2.0 * yv * dy_dx1(x, j);
            g[j - 1] = scale * 2.0 * yv;
        }
        g
    };

    let (j1f, j2f) = (j1.clone(), j2.clone());
    let (j1g, j2g) = (j1, j2);
    MooProblem::builder("V")
        .variable(0.0, 1.0)
        .variables(N - 1, -1.0, 1.0)
        .objective(
            move |x: &[f64]| x[0] + sum_term(x, &j1f),
            move |x: &[f64]| {
                let mut g = grad_term(x, &j1g);
                g[0] += 1.0;
                g
            },
        )
        .objective(
            move |x: &[f64]| 1.0 - x[0].sqrt() + sum_term(x, &j2f),
            move |x: &[f64]| {
                let mut g = grad_term(x, &j2g);
                g[0] += -0.5 / x[0].sqrt();
                g
            },
        )
        .box_constraints_for_all()
        // The square root makes the second objective's slope unbounded as
        // x1 approaches 0.
        .kink_distance(|x| x[0])
        .build()
        .expect("case V is well formed")
}

/// Case VI: Case III with an extra square exclusion zone
/// `max(|x1 - 0.6|, |x2 - 0.7|) >= 0.2`, whose boundary gradient has kinks.
/// n=2, k=2, m=5 on `[0, pi]^2`.
fn case_vi() -> MooProblem {
    with_scalloped_disk(MooProblem::builder("VI").variables(2, 0.0, PI))
        .constraint(
            |x| 0.2 - (x[0] - 0.6).abs().max((x[1] - 0.7).abs()),
            // One-sided gradient of the active branch; exact ties activate
            // the |x1 - 0.6| branch.
            |x| {
                let u = x[0] - 0.6;
                let v = x[1] - 0.7;
                if u.abs() >= v.abs() {
                    vec![-1.0_f64.copysign(u), 0.0]
                } else {
                    vec![0.0, -1.0_f64.copysign(v)]
                }
            },
        )
        .box_constraint(0)
        .box_constraint(1)
        .kink_distance(|x| {
            // The max of two V-shapes is non-smooth exactly where the
            // branches tie: the lines (x1-0.6) = +/-(x2-0.7).
            let u = x[0] - 0.6;
            let v = x[1] - 0.7;
            (u - v).abs().min((u + v).abs()) / std::f64::consts::SQRT_2
        })
        .build()
        .expect("case VI is well formed")
}

/// Case VII with the default sum normalizer of 10000.
fn case_vii() -> MooProblem {
    case_vii_with_normalizer(10_000.0)
}

/// Case VII: a 30-dimensional problem with a sinusoidally banded front.
/// n=30, k=2, m=30 on `[0,1] x [-1,1]^29`.
///
/// The trailing-coordinate sum in `fbar = 1 + (9/normalizer) * sum x_i^2`
/// admits a configurable normalizer: the published division by `m - 1`
/// does not reproduce the published front, which requires 10000 instead,
/// so both (and anything else) can be selected here.
pub fn case_vii_with_normalizer(normalizer: f64) -> MooProblem {
    const N: usize = 30;
    assert!(
        normalizer.is_finite() && normalizer > 0.0,
        "normalizer must be positive"
    );
    let fbar = move |x: &[f64]| -> f64 {
        1.0 + (9.0 / normalizer) * x[1..].iter().map(|v| v * v).sum::<f64>()
    };
    MooProblem::builder("VII")
        .variable(0.0, 1.0)
        .variables(N - 1, -1.0, 1.0)
        .objective(
            |x| x[0],
            |_| {
                let mut g = vec![0.0; N];
                g[0] = 1.0;
                g
            },
        )
        .objective(
            move |x: &[f64]| {
                let f = fbar(x);
                let ratio = x[0] / f;
                f * (1.0 - ratio.sqrt() - ratio * (10.0 * PI * x[0]).sin())
            },
            move |x: &[f64]| {
                let f = fbar(x);
                let x1 = x[0];
                let mut g = vec![0.0; N];
                g[0] = -0.5 * (f / x1).sqrt()
                    - (10.0 * PI * x1).sin()
                    - 10.0 * PI * x1 * (10.0 * PI * x1).cos();
                let half_sqrt = 0.5 * (x1 / f).sqrt();
                for i in 1..N {
                    g[i] = (18.0 / normalizer) * x[i] * (1.0 - half_sqrt);
                }
                g
            },
        )
        .box_constraints_for_all()
        // As in the other 30-dimensional case, the square-root ratio makes
        // the second objective's slope unbounded as x1 approaches 0.
        .kink_distance(|x| x[0])
        .build()
        .expect("case VII is well formed")
}
