//! Quantitative verification of extracted fronts: yield density, geometric
//! error against analytic fronts, and first-order certification of
//! candidate points via the discriminant.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fritz_john::label_batch;
use crate::problems::MooProblem;

/// Geometric tolerance for front-distance acceptance. Distinct from the
/// discriminant margin (0.001): a finite inference grid limits how close
/// extracted points can sit to the continuous front.
pub const GEOMETRIC_TOLERANCE: f64 = 0.05;

/// Fraction of points that must sit within tolerance for a front check to
/// pass (the max distance is still reported).
pub const QUANTILE_ACCEPTANCE: f64 = 0.95;

/// Yield of an extraction run: surviving points per function evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    /// Which problem the run solved.
    pub case: String,
    /// Extracted point count.
    pub points: usize,
    /// Function evaluations spent (the inference sample size).
    pub evaluations: usize,
    /// `100 * points / evaluations`.
    pub density_percent: f64,
}

/// Extraction yield as a percentage of evaluations. Extracted points are a
/// subset of the evaluated sample, so `points <= evaluations` is enforced.
pub fn density(case: &str, points: usize, evaluations: usize) -> Result<DensityReport> {
    if evaluations == 0 {
        return Err(Error::input("density needs at least one evaluation"));
    }
    if points > evaluations {
        return Err(Error::input(format!(
            "{points} extracted points exceed {evaluations} evaluations"
        )));
    }
    Ok(DensityReport {
        case: case.to_string(),
        points,
        evaluations,
        density_percent: 100.0 * points as f64 / evaluations as f64,
    })
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {}: {} / {} points = {:.4}% density",
            self.case, self.points, self.evaluations, self.density_percent
        )
    }
}

/// Distances of extracted points to a problem's analytic front.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontErrorReport {
    /// Tolerance the fractions refer to.
    pub tolerance: f64,
    /// Per-point distance to the front, in input order.
    pub distances: Vec<f64>,
    /// Fraction of points with distance at most the tolerance.
    pub fraction_within: f64,
    /// Largest observed distance.
    pub max_distance: f64,
    /// 95th-percentile distance (nearest rank).
    pub quantile95: f64,
}

impl FrontErrorReport {
    /// Quantile acceptance: at least [`QUANTILE_ACCEPTANCE`] of the points
    /// sit within tolerance.
    pub fn passes(&self) -> bool {
        self.fraction_within >= QUANTILE_ACCEPTANCE
    }
}

impl fmt::Display for FrontErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "front error: {:.1}% of {} points within {} (max {:.4}, p95 {:.4})",
            100.0 * self.fraction_within,
            self.distances.len(),
            self.tolerance,
            self.max_distance,
            self.quantile95
        )
    }
}

/// Measure every point's distance to the problem's analytic front.
/// Fails for problems without one.
pub fn front_error(
    problem: &MooProblem,
    points: &[Vec<f64>],
    tolerance: f64,
) -> Result<FrontErrorReport> {
    if points.is_empty() {
        return Err(Error::input("front error needs at least one point"));
    }
    if !(tolerance > 0.0) {
        return Err(Error::input("front tolerance must be positive"));
    }
    let mut distances = Vec::with_capacity(points.len());
    for x in points {
        distances.push(problem.front_distance(x)?);
    }
    let within = distances.iter().filter(|&&d| d <= tolerance).count();
    let max_distance = distances.iter().cloned().fold(0.0, f64::max);
    let mut sorted = distances.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let rank = ((QUANTILE_ACCEPTANCE * sorted.len() as f64).ceil() as usize).max(1) - 1;
    Ok(FrontErrorReport {
        tolerance,
        fraction_within: within as f64 / points.len() as f64,
        max_distance,
        quantile95: sorted[rank.min(sorted.len() - 1)],
        distances,
    })
}

/// One candidate's certification outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCertificate {
    /// Batch-normalized discriminant at the point.
    pub normalized: f64,
    /// Whether it is within the margin.
    pub pass: bool,
}

/// First-order certification of a candidate set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    /// Margin applied to the normalized discriminant.
    pub epsilon: f64,
    /// Per-point outcomes, in input order.
    pub points: Vec<PointCertificate>,
    /// How many passed.
    pub n_pass: usize,
    /// `n_pass` over the candidate count.
    pub fraction_pass: f64,
}

impl fmt::Display for CertificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "certification: {} / {} points pass at margin {}",
            self.n_pass,
            self.points.len(),
            self.epsilon
        )
    }
}

/// Re-evaluate the discriminant over the candidates (normalized as one
/// batch) and pass each point whose normalized value is within the margin.
pub fn certify_points(
    problem: &MooProblem,
    points: &[Vec<f64>],
    epsilon: f64,
) -> Result<CertificationReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::input(
            "certification margin must lie strictly inside (0, 1)",
        ));
    }
    let labels = label_batch(problem, points)?;
    let certificates: Vec<PointCertificate> = labels
        .iter()
        .map(|l| PointCertificate {
            normalized: l.normalized,
            pass: l.normalized <= epsilon,
        })
        .collect();
    let n_pass = certificates.iter().filter(|c| c.pass).count();
    Ok(CertificationReport {
        epsilon,
        n_pass,
        fraction_pass: n_pass as f64 / certificates.len() as f64,
        points: certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::builtin_case;
    use approx::assert_relative_eq;

    #[test]
    fn density_matches_reference_ratios() {
        let low = density("II", 1648, 90000).unwrap();
        assert_relative_eq!(
            low.density_percent,
            1.8311111111111112,
            max_relative = 1e-15
        );
        assert_eq!(format!("{:.2}", low.density_percent), "1.83");
        let high = density("IV", 5915, 90000).unwrap();
        assert_relative_eq!(
            high.density_percent,
            6.572222222222222,
            max_relative = 1e-15
        );
        assert_eq!(format!("{:.2}", high.density_percent), "6.57");
        assert_eq!(density("I", 0, 90000).unwrap().density_percent, 0.0);
    }

    #[test]
    fn density_guards_its_counts() {
        assert!(density("I", 10, 0).is_err());
        assert!(density("I", 11, 10).is_err());
    }

    #[test]
    fn filtering_never_increases_density() {
        let before = density("I", 500, 90000).unwrap();
        let after = density("I", 320, 90000).unwrap();
        assert!(after.density_percent <= before.density_percent);
    }

    #[test]
    fn on_front_points_have_zero_error() {
        let problem = builtin_case("I").unwrap();
        let diag: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let t = -0.7 + 1.4 * i as f64 / 19.0;
                vec![t, t]
            })
            .collect();
        let report = front_error(&problem, &diag, GEOMETRIC_TOLERANCE).unwrap();
        assert_eq!(report.fraction_within, 1.0);
        assert_eq!(report.max_distance, 0.0);
        assert!(report.passes());
    }

    #[test]
    fn near_front_distance_is_the_orthogonal_offset() {
        let problem = builtin_case("II").unwrap();
        let report = front_error(&problem, &[vec![0.5, 0.03]], 0.05).unwrap();
        assert_relative_eq!(report.distances[0], 0.03, max_relative = 1e-12);
        assert!(report.passes());
        let far = front_error(&problem, &[vec![0.5, 0.2]], 0.05).unwrap();
        assert!(!far.passes());
        assert_relative_eq!(far.max_distance, 0.2, max_relative = 1e-12);
    }

    #[test]
    fn distances_are_permutation_invariant() {
        let problem = builtin_case("II").unwrap();
        let pts = vec![vec![0.1, 0.4], vec![0.9, -0.2], vec![0.5, 0.0]];
        let fwd = front_error(&problem, &pts, 0.05).unwrap();
        let rev_pts: Vec<Vec<f64>> = pts.iter().rev().cloned().collect();
        let rev = front_error(&problem, &rev_pts, 0.05).unwrap();
        let mut rev_distances = rev.distances.clone();
        rev_distances.reverse();
        assert_eq!(fwd.distances, rev_distances);
        assert_eq!(fwd.max_distance, rev.max_distance);
        assert_eq!(fwd.fraction_within, rev.fraction_within);
    }

    #[test]
    fn missing_analytic_front_is_reported() {
        let problem = builtin_case("III").unwrap();
        match front_error(&problem, &[vec![0.5, 0.5]], 0.05) {
            Err(Error::NoAnalyticFront { .. }) => {}
            other => panic!("expected missing-front error, got {other:?}"),
        }
    }

    #[test]
    fn certification_separates_front_from_off_front() {
        let problem = builtin_case("I").unwrap();
        let mut pts: Vec<Vec<f64>> = (0..15)
            .map(|i| {
                let t = -0.6 + 1.2 * i as f64 / 14.0;
                vec![t, t]
            })
            .collect();
        let all_front = certify_points(&problem, &pts, 0.001).unwrap();
        assert_eq!(all_front.n_pass, 15);
        assert_eq!(all_front.fraction_pass, 1.0);

        pts.push(vec![0.5, -0.5]);
        let mixed = certify_points(&problem, &pts, 0.001).unwrap();
        assert_eq!(mixed.n_pass, 15);
        assert!(!mixed.points[15].pass);
        assert!(mixed.points[..15].iter().all(|c| c.pass));
    }

    #[test]
    fn certification_rejects_empty_and_bad_margin() {
        let problem = builtin_case("I").unwrap();
        assert!(certify_points(&problem, &[], 0.001).is_err());
        assert!(certify_points(&problem, &[vec![0.0, 0.0]], 0.0).is_err());
        assert!(certify_points(&problem, &[vec![0.0, 0.0]], 1.0).is_err());
    }

    #[test]
    fn reports_serialize_with_stable_names() {
        let report = density("II", 1648, 90000).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["case"], "II");
        assert_eq!(json["points"], 1648);
        assert_eq!(json["evaluations"], 90000);
        assert!(json["density_percent"].as_f64().unwrap() > 1.8);
        assert_eq!(
            format!("{report}"),
            "case II: 1648 / 90000 points = 1.8311% density"
        );
    }
}
