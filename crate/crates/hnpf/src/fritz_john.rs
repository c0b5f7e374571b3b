//! Weak-Pareto discriminant built from first-order optimality structure.
//!
//! For a problem with `k` objectives and `m` inequality constraints, the
//! first-order conditions for weak Pareto optimality state that a nontrivial
//! nonnegative multiplier vector annihilates the block matrix
//!
//! ```text
//!     L = | grad F   grad G  |      (n rows: variable space)
//!         |   0      diag(g) |      (m rows: one per constraint)
//! ```
//!
//! with shape `(n + m) x (k + m)`: objective gradient columns, constraint
//! gradient columns, and a lower-right diagonal carrying the constraint
//! values so that inactive constraints force their own multiplier to zero.
//! Such a multiplier exists only where `L` is column-rank-deficient, i.e.
//! where `det(L^T L) = 0`. That determinant is a multiplier-free scalar
//! field over variable space — the *discriminant* — whose zero set contains
//! every weak Pareto point. Normalizing a batch of discriminant values by
//! the batch maximum turns them into soft class labels for the stage-1
//! classifier: small normalized values mean "near the weak front".

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::problems::MooProblem;

/// Discriminant value of one point, with its batch-relative label weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantResult {
    /// `det(L^T L)` at the point, clamped to be non-negative.
    pub raw: f64,
    /// `raw` divided by the largest `raw` in the batch, in `[0, 1]`.
    pub normalized: f64,
    /// Soft weight of the "weak Pareto" class: `1 - normalized`.
    pub label_pareto: f64,
    /// Soft weight of the "not Pareto" class: `normalized`.
    pub label_non_pareto: f64,
}

/// Assemble the `(n + m) x (k + m)` first-order structure matrix at `x`.
pub fn fritz_john_matrix(problem: &MooProblem, x: &[f64]) -> Result<Mat> {
    let (n, k, m) = (problem.n(), problem.k(), problem.m());
    let point = problem.evaluate(x)?;
    let obj_grads = problem.objective_gradients(x)?;
    let con_grads = problem.constraint_gradients(x)?;
    let mut l = Mat::zeros(n + m, k + m);
    for (col, grad) in obj_grads.iter().enumerate() {
        for (row, v) in grad.iter().enumerate() {
            l.set(row, col, *v);
        }
    }
    for (j, grad) in con_grads.iter().enumerate() {
        for (row, v) in grad.iter().enumerate() {
            l.set(row, k + j, *v);
        }
        // Constraint value on the lower diagonal: row n + j, column k + j.
        l.set(n + j, k + j, point.gx[j]);
    }
    Ok(l)
}

/// The raw discriminant `det(L^T L) >= 0` at `x`.
///
/// Mathematically the Gram determinant cannot be negative; tiny negative
/// round-off results are clamped to zero so downstream labels stay in range.
/// Points exactly on the weak front make the Gram matrix rank deficient,
/// and its determinant is snapped to exactly zero there rather than left as
/// round-off noise — otherwise a batch consisting entirely of front points
/// would normalize its own noise up to order one.
pub fn discriminant(problem: &MooProblem, x: &[f64]) -> Result<f64> {
    let l = fritz_john_matrix(problem, x)?;
    let det = l.gram().determinant_zero_snapped();
    if !det.is_finite() {
        return Err(Error::NonFiniteDiscriminant);
    }
    Ok(det.max(0.0))
}

/// Label a batch of points: compute raw discriminants, normalize by the
/// batch maximum, and derive the two soft class weights.
///
/// A batch whose discriminants are all zero (every point on the weak front)
/// labels everything as Pareto. An empty batch is an input error.
pub fn label_batch(problem: &MooProblem, points: &[Vec<f64>]) -> Result<Vec<DiscriminantResult>> {
    if points.is_empty() {
        return Err(Error::input("cannot label an empty batch"));
    }
    let mut raws = Vec::with_capacity(points.len());
    for x in points {
        raws.push(discriminant(problem, x)?);
    }
    let max = raws.iter().fold(0.0_f64, |a, v| a.max(*v));
    Ok(raws
        .into_iter()
        .map(|raw| {
            let normalized = if max > 0.0 { raw / max } else { 0.0 };
            DiscriminantResult {
                raw,
                normalized,
                label_pareto: 1.0 - normalized,
                label_non_pareto: normalized,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{builtin_case, MooProblem};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn matrix_blocks_sit_where_they_belong() {
        // Case I at the origin: objective gradients fill the top-left 2x2,
        // the lower-left block is zero, and the lower-right diagonal holds
        // the two box-constraint values (0 + a)(0 - a) = -1/2.
        let p = builtin_case("I").unwrap();
        let l = fritz_john_matrix(&p, &[0.0, 0.0]).unwrap();
        assert_eq!((l.rows(), l.cols()), (4, 4));
        let g = 2.0 * std::f64::consts::FRAC_1_SQRT_2 * (-1.0_f64).exp();
        assert_relative_eq!(l.get(0, 0), -g, epsilon = 1e-15); // d f1 / d x1
        assert_relative_eq!(l.get(1, 1), g, epsilon = 1e-15); // d f2 / d x2
        assert_relative_eq!(l.get(2, 2), -0.5);
        assert_relative_eq!(l.get(3, 3), -0.5);
        assert_eq!(
            (l.get(2, 0), l.get(2, 1), l.get(3, 0), l.get(3, 1)),
            (0.0, 0.0, 0.0, 0.0)
        );
        // Off-diagonal of the constraint-value block is zero.
        assert_eq!((l.get(2, 3), l.get(3, 2)), (0.0, 0.0));
    }

    #[test]
    fn discriminant_is_nonnegative_on_random_points() {
        let p = builtin_case("II").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x = [rng.gen_range(0.0..1.0), rng.gen_range(-2.0..2.0)];
            assert!(discriminant(&p, &x).unwrap() >= 0.0);
        }
    }

    #[test]
    fn known_front_points_label_pareto_against_off_front_company() {
        let p = builtin_case("I").unwrap();
        let batch = vec![vec![0.2, 0.2], vec![0.5, -0.5], vec![-0.3, 0.4]];
        let labels = label_batch(&p, &batch).unwrap();
        // On the x1 = x2 segment the discriminant vanishes to round-off.
        assert!(labels[0].normalized <= 1e-9, "got {}", labels[0].normalized);
        assert_relative_eq!(labels[0].label_pareto, 1.0, epsilon = 1e-9);
        // The batch maximum normalizes to exactly 1 somewhere off-front.
        let max_norm = labels.iter().map(|l| l.normalized).fold(0.0_f64, f64::max);
        assert_eq!(max_norm, 1.0);
        // Case II on its front, same story.
        let p2 = builtin_case("II").unwrap();
        let labels2 =
            label_batch(&p2, &vec![vec![0.4, 0.0], vec![0.5, 1.0], vec![0.9, -1.5]]).unwrap();
        assert!(labels2[0].normalized <= 1e-3);
        assert!(labels2[1].normalized > 1e-3);
    }

    #[test]
    fn all_zero_batch_labels_everything_pareto() {
        let p = builtin_case("I").unwrap();
        let batch = vec![vec![0.1, 0.1], vec![-0.2, -0.2]];
        let labels = label_batch(&p, &batch).unwrap();
        for l in labels {
            assert_eq!(l.label_pareto, 1.0);
            assert_eq!(l.normalized, 0.0);
        }
    }

    #[test]
    fn empty_batch_is_an_input_error() {
        let p = builtin_case("I").unwrap();
        assert!(matches!(label_batch(&p, &[]), Err(Error::Input(_))));
    }

    /// Scaling all objectives by a common factor c scales the raw
    /// discriminant by c^(2k) and leaves its zero set untouched.
    #[test]
    fn objective_scaling_preserves_the_zero_set() {
        const C: f64 = 2.5;
        fn scaled_case_ii() -> MooProblem {
            use std::f64::consts::PI;
            MooProblem::builder("II-scaled")
                .variable(0.0, 1.0)
                .variable(-2.0, 2.0)
                .objective(|x| C * x[0], |_| vec![C, 0.0])
                .objective(
                    |x| C * (1.0 + x[1] * x[1] - x[0] - 0.1 * (3.0 * PI * x[0]).sin()),
                    |x| {
                        vec![
                            C * (-1.0 - 0.3 * PI * (3.0 * PI * x[0]).cos()),
                            C * 2.0 * x[1],
                        ]
                    },
                )
                .box_constraints_for_all()
                .build()
                .unwrap()
        }
        let base = builtin_case("II").unwrap();
        let scaled = scaled_case_ii();
        let factor = C.powi(2 * 2); // c^(2k), k = 2
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let x = [rng.gen_range(0.0..1.0), rng.gen_range(-2.0..2.0)];
            let d0 = discriminant(&base, &x).unwrap();
            let d1 = discriminant(&scaled, &x).unwrap();
            assert_relative_eq!(d1, factor * d0, max_relative = 1e-9, epsilon = 1e-12);
        }
        // Zero stays zero on the analytic front.
        for x1 in [0.1, 0.5, 0.9] {
            let d0 = discriminant(&base, &[x1, 0.0]).unwrap();
            let d1 = discriminant(&scaled, &[x1, 0.0]).unwrap();
            assert!(d0.abs() <= 1e-9 && d1.abs() <= 1e-9);
        }
    }
}
