//! Stage-2 strong-Pareto extraction: an axis-aligned plane-search filter
//! plus an all-pairs non-dominance oracle used for verification.
//!
//! The plane filter sweeps each objective once. A sweep splits the
//! candidate range of objective `i` into slabs of width `h`; inside every
//! slab only the point with the smallest companion objective `q = (i+1) mod
//! k` survives (ties: smaller `f_i`, then lowest input index). Slab
//! membership is `level <= f_i < level + h` with the topmost slab closed on
//! the right so no point is orphaned; membership is computed by bin index,
//! which also makes the partition exact in floating point. Sweeping costs
//! one pass over the active candidates per slab, so a full run is `O(k z n)`
//! in the slab count `z` and candidate count `n`.
//!
//! Slab thinning alone can leave a point that is dominated across slab
//! boundaries (three or more objectives can hide a dominator in a different
//! slab), so after the sweeps a final exact non-dominance pass runs over the
//! few post-sweep survivors (at most `z` per function after the first
//! sweep). This keeps the output invariant — no output point dominates
//! another — unconditional, and makes the filter agree exactly with the
//! all-pairs oracle once `h` is below the smallest pairwise objective gap.
//! The finishing comparisons are reported separately from the sweep cost in
//! [`FilterStats`].
//!
//! All values are canonical minimization; maximization problems are negated
//! before reaching this module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neural::{WeakParetoSet, WeakPoint};

/// Tunable knobs of the plane filter. Objective bounds are measured from
/// the candidate set itself and reported in [`FilterStats`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    /// Slab width in objective units, shared by every function. When unset,
    /// each function uses its own width `range / bins`.
    pub h: Option<f64>,
    /// Slab count per function used to derive a default width.
    pub bins: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { h: None, bins: 2000 }
    }
}

impl FilterConfig {
    /// Reject widths and bin counts the sweep cannot honor.
    pub fn validate(&self) -> Result<()> {
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Config(
                    "slab width h must be positive and finite".into(),
                ));
            }
        }
        if self.bins == 0 {
            return Err(Error::Config("bins must be at least 1".into()));
        }
        Ok(())
    }
}

/// Measurements from one filter run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterStats {
    /// Objective count.
    pub k: usize,
    /// Candidate points in.
    pub n_input: usize,
    /// Survivors out.
    pub n_output: usize,
    /// Per-function minimum over the candidates.
    pub f_min: Vec<f64>,
    /// Per-function maximum over the candidates.
    pub f_max: Vec<f64>,
    /// Resolved slab width per function (empty for the oracle).
    pub h: Vec<f64>,
    /// Slab count per function (empty for the oracle).
    pub slabs: Vec<usize>,
    /// True when some function degenerated to a single slab (width at least
    /// the range, or a zero range).
    pub degenerate_single_slab: bool,
    /// Candidate examinations across all sweep slabs.
    pub sweep_inner_iterations: usize,
    /// Pairwise checks in the exact finishing pass.
    pub finish_comparisons: usize,
}

/// Survivors of a filter run, with provenance into the input set.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongParetoSet {
    /// Surviving points (clones of the input points).
    pub points: Vec<WeakPoint>,
    /// Positions of the survivors in the input set's point list.
    pub indices: Vec<usize>,
    /// Run measurements.
    pub stats: FilterStats,
}

/// True when `a` is at least as good as `b` in every objective and strictly
/// better in at least one (canonical minimization).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strict = false;
    for (&ai, &bi) in a.iter().zip(b) {
        if ai > bi {
            return false;
        }
        if ai < bi {
            strict = true;
        }
    }
    strict
}

fn check_values(values: &[Vec<f64>]) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::input("filter needs at least one candidate point"));
    }
    let k = values[0].len();
    if k == 0 {
        return Err(Error::input("candidate points carry no objective values"));
    }
    for (i, row) in values.iter().enumerate() {
        if row.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::input(format!(
                "candidate {i} has a non-finite objective value"
            )));
        }
    }
    Ok(k)
}

fn slab_of(value: f64, f_min: f64, h: f64, z: usize) -> usize {
    if h <= 0.0 || z <= 1 {
        return 0;
    }
    let idx = ((value - f_min) / h).floor();
    (idx.max(0.0) as usize).min(z - 1)
}

/// Plane-filter a bare matrix of objective rows; returns surviving row
/// indices in input order plus run measurements.
pub fn plane_filter_values(
    values: &[Vec<f64>],
    config: &FilterConfig,
) -> Result<(Vec<usize>, FilterStats)> {
    config.validate()?;
    let k = check_values(values)?;
    let n = values.len();

    let mut f_min = vec![f64::INFINITY; k];
    let mut f_max = vec![f64::NEG_INFINITY; k];
    for row in values {
        for i in 0..k {
            f_min[i] = f_min[i].min(row[i]);
            f_max[i] = f_max[i].max(row[i]);
        }
    }

    let mut widths = vec![0.0; k];
    let mut slabs = vec![1usize; k];
    let mut degenerate = false;
    for i in 0..k {
        let range = f_max[i] - f_min[i];
        let h = config.h.unwrap_or(range / config.bins as f64);
        if range <= 0.0 || h >= range {
            // A single slab covers everything; the sweep keeps one point.
            widths[i] = if h > 0.0 { h } else { 0.0 };
            slabs[i] = 1;
            degenerate = true;
            continue;
        }
        widths[i] = h;
        // The small slack keeps an exact-ratio division (range a multiple
        // of h) from rounding up to an empty extra slab.
        slabs[i] = (range / h - 1e-9).ceil().max(1.0) as usize;
    }

    let mut active = vec![true; n];
    let mut sweep_inner_iterations = 0usize;
    let mut members: Vec<usize> = Vec::new();
    for i in 0..k {
        let q = (i + 1) % k;
        let candidates: Vec<usize> = (0..n).filter(|&p| active[p]).collect();
        for j in 0..slabs[i] {
            members.clear();
            let mut winner: Option<usize> = None;
            for &p in &candidates {
                sweep_inner_iterations += 1;
                if !active[p] || slab_of(values[p][i], f_min[i], widths[i], slabs[i]) != j {
                    continue;
                }
                members.push(p);
                winner = Some(match winner {
                    None => p,
                    // Candidates arrive in ascending index order, so a tie
                    // in both objectives keeps the earlier point.
                    Some(w) => {
                        let better = values[p][q] < values[w][q]
                            || (values[p][q] == values[w][q] && values[p][i] < values[w][i]);
                        if better {
                            p
                        } else {
                            w
                        }
                    }
                });
            }
            if let Some(w) = winner {
                for &m in &members {
                    if m != w {
                        active[m] = false;
                    }
                }
            }
        }
    }

    let survivors: Vec<usize> = (0..n).filter(|&p| active[p]).collect();
    // Slab thinning is local to one function at a time; a cross-slab
    // dominator can slip through when k >= 3. Finish with an exact pass over
    // the (small) survivor set so no output point dominates another.
    let mut finish_comparisons = 0usize;
    let mut kept = Vec::with_capacity(survivors.len());
    for &p in &survivors {
        let mut dominated = false;
        for &r in &survivors {
            if r == p {
                continue;
            }
            finish_comparisons += 1;
            if dominates(&values[r], &values[p]) {
                dominated = true;
                break;
            }
        }
        if !dominated {
            kept.push(p);
        }
    }

    let stats = FilterStats {
        k,
        n_input: n,
        n_output: kept.len(),
        f_min,
        f_max,
        h: widths,
        slabs,
        degenerate_single_slab: degenerate,
        sweep_inner_iterations,
        finish_comparisons,
    };
    Ok((kept, stats))
}

/// All-pairs non-dominance over a bare matrix of objective rows; retains
/// exactly the points no other point dominates.
pub fn oracle_filter_values(values: &[Vec<f64>]) -> Result<(Vec<usize>, usize)> {
    check_values(values)?;
    let mut comparisons = 0usize;
    let mut kept = Vec::new();
    for (p, row) in values.iter().enumerate() {
        let mut dominated = false;
        for (r, other) in values.iter().enumerate() {
            if r == p {
                continue;
            }
            comparisons += 1;
            if dominates(other, row) {
                dominated = true;
                break;
            }
        }
        if !dominated {
            kept.push(p);
        }
    }
    Ok((kept, comparisons))
}

fn gather(set: &WeakParetoSet, indices: Vec<usize>, stats: FilterStats) -> StrongParetoSet {
    let points = indices.iter().map(|&i| set.points[i].clone()).collect();
    StrongParetoSet {
        points,
        indices,
        stats,
    }
}

fn objective_rows(set: &WeakParetoSet) -> Vec<Vec<f64>> {
    set.points.iter().map(|p| p.fx.clone()).collect()
}

/// Reduce a classifier-selected candidate set to its strong Pareto subset
/// with the plane-search sweep.
pub fn plane_filter(set: &WeakParetoSet, config: &FilterConfig) -> Result<StrongParetoSet> {
    let values = objective_rows(set);
    let (indices, stats) = plane_filter_values(&values, config)?;
    Ok(gather(set, indices, stats))
}

/// Reduce a candidate set to its strong Pareto subset by definition
/// (all-pairs comparison); the verification ground truth.
pub fn oracle_filter(set: &WeakParetoSet) -> Result<StrongParetoSet> {
    let values = objective_rows(set);
    let (indices, comparisons) = oracle_filter_values(&values)?;
    let k = values[0].len();
    let mut f_min = vec![f64::INFINITY; k];
    let mut f_max = vec![f64::NEG_INFINITY; k];
    for row in &values {
        for i in 0..k {
            f_min[i] = f_min[i].min(row[i]);
            f_max[i] = f_max[i].max(row[i]);
        }
    }
    let stats = FilterStats {
        k,
        n_input: values.len(),
        n_output: indices.len(),
        f_min,
        f_max,
        h: Vec::new(),
        slabs: Vec::new(),
        degenerate_single_slab: false,
        sweep_inner_iterations: 0,
        finish_comparisons: comparisons,
    };
    Ok(gather(set, indices, stats))
}

/// A synthetic set of `n` mutually non-dominated points (for two or more
/// objectives): even objectives ascend across the unit range while odd
/// objectives descend, so no point improves on another everywhere.
pub fn staircase_values(n: usize, k: usize) -> Vec<Vec<f64>> {
    assert!(n >= 1 && k >= 1);
    (0..n)
        .map(|t| {
            let frac = if n == 1 {
                0.5
            } else {
                t as f64 / (n - 1) as f64
            };
            (0..k)
                .map(|d| if d % 2 == 0 { frac } else { 1.0 - frac })
                .collect()
        })
        .collect()
}

/// Run the plane sweep on a synthetic staircase with exactly `z` slabs per
/// function and report the sweep's inner-loop iteration count. With `z >=
/// n` nothing is ever removed and the count is exactly `k * z * n`, which
/// tests use to confirm linear growth in each factor.
pub fn filter_complexity_probe(n_points: usize, k: usize, z: usize) -> usize {
    assert!(n_points >= 1 && k >= 1 && z >= 1);
    let values = staircase_values(n_points, k);
    let range = if n_points == 1 { 0.0 } else { 1.0 };
    let config = if range > 0.0 {
        FilterConfig {
            h: Some(range / z as f64),
            bins: 200,
        }
    } else {
        FilterConfig::default()
    };
    let (_, stats) = plane_filter_values(&values, &config).expect("staircase values are valid");
    stats.sweep_inner_iterations
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rows(values: &[(f64, f64)]) -> Vec<Vec<f64>> {
        values.iter().map(|&(a, b)| vec![a, b]).collect()
    }

    /// Literal transcription of the non-dominance definition.
    fn brute_force_front(values: &[Vec<f64>]) -> Vec<usize> {
        let mut kept = Vec::new();
        'outer: for p in 0..values.len() {
            for r in 0..values.len() {
                if r == p {
                    continue;
                }
                let all_leq = values[r].iter().zip(&values[p]).all(|(a, b)| a <= b);
                let one_lt = values[r].iter().zip(&values[p]).any(|(a, b)| a < b);
                if all_leq && one_lt {
                    continue 'outer;
                }
            }
            kept.push(p);
        }
        kept
    }

    #[test]
    fn dominance_follows_the_definition() {
        assert!(dominates(&[0.0, 0.0], &[1.0, 1.0]));
        assert!(dominates(&[0.0, 1.0], &[0.0, 2.0]));
        assert!(!dominates(&[0.0, 2.0], &[1.0, 1.0]));
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]));
    }

    #[test]
    fn hand_example_keeps_the_three_non_dominated_points() {
        let values = rows(&[(1.0, 2.0), (2.0, 1.0), (1.5, 1.5), (2.0, 2.0)]);
        let (plane, stats) = plane_filter_values(
            &values,
            &FilterConfig {
                h: Some(0.1),
                bins: 200,
            },
        )
        .unwrap();
        assert_eq!(plane, vec![0, 1, 2]);
        assert!(!stats.degenerate_single_slab);
        assert_eq!(stats.slabs, vec![10, 10]);
        let (oracle, _) = oracle_filter_values(&values).unwrap();
        assert_eq!(oracle, vec![0, 1, 2]);
    }

    #[test]
    fn strict_domination_and_single_points() {
        let values = rows(&[(0.0, 0.0), (1.0, 1.0)]);
        let (plane, _) = plane_filter_values(
            &values,
            &FilterConfig {
                h: Some(1e-6),
                bins: 200,
            },
        )
        .unwrap();
        assert_eq!(plane, vec![0]);
        let (oracle, _) = oracle_filter_values(&values).unwrap();
        assert_eq!(oracle, vec![0]);

        let single = rows(&[(3.0, 4.0)]);
        let (plane, stats) = plane_filter_values(&single, &FilterConfig::default()).unwrap();
        assert_eq!(plane, vec![0]);
        assert!(stats.degenerate_single_slab);
    }

    #[test]
    fn identical_points_all_survive_the_oracle() {
        let values = rows(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)]);
        let (oracle, _) = oracle_filter_values(&values).unwrap();
        assert_eq!(oracle, vec![0, 1, 2]);
    }

    #[test]
    fn empty_and_malformed_inputs_are_rejected() {
        assert!(matches!(
            plane_filter_values(&[], &FilterConfig::default()),
            Err(Error::Input(_))
        ));
        assert!(matches!(oracle_filter_values(&[]), Err(Error::Input(_))));
        let ragged = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(plane_filter_values(&ragged, &FilterConfig::default()).is_err());
        let bad = vec![vec![1.0, f64::NAN]];
        assert!(plane_filter_values(&bad, &FilterConfig::default()).is_err());
        assert!(FilterConfig {
            h: Some(0.0),
            bins: 200
        }
        .validate()
        .is_err());
        assert!(FilterConfig { h: None, bins: 0 }.validate().is_err());
    }

    #[test]
    fn oversized_slab_width_degenerates_to_one_survivor_per_sweep() {
        let values = rows(&[(1.0, 2.0), (2.0, 1.0), (1.5, 1.5), (2.0, 2.0)]);
        let config = FilterConfig {
            h: Some(100.0),
            bins: 200,
        };
        let (plane, stats) = plane_filter_values(&values, &config).unwrap();
        assert!(stats.degenerate_single_slab);
        assert_eq!(stats.slabs, vec![1, 1]);
        // One slab keeps the single best companion value: (2,1) by f2.
        assert_eq!(plane, vec![1]);
    }

    #[test]
    fn probe_counts_are_exactly_linear_when_nothing_is_removed() {
        // z >= n keeps every staircase point in its own slab: no removals.
        let base = filter_complexity_probe(500, 2, 2000);
        assert_eq!(base, 2 * 2000 * 500);
        assert_eq!(filter_complexity_probe(1000, 2, 2000), 2 * base);
        assert_eq!(filter_complexity_probe(500, 3, 2000), 3 * 2000 * 500);
        assert_eq!(filter_complexity_probe(500, 2, 4000), 2 * base);
        // k=1: a single sweep; z=1: a single slab per function.
        assert_eq!(filter_complexity_probe(500, 1, 2000), 2000 * 500);
        assert_eq!(filter_complexity_probe(1, 4, 7), 4);
    }

    #[test]
    fn staircase_points_are_mutually_non_dominated() {
        let values = staircase_values(40, 3);
        let (oracle, _) = oracle_filter_values(&values).unwrap();
        assert_eq!(oracle.len(), 40);
    }

    /// Per-coordinate distinct lattice values: a shuffled scaled permutation
    /// in every dimension, so a slab width below the lattice step isolates
    /// every point.
    fn distinct_lattice(seed: u64, n: usize, k: usize) -> (Vec<Vec<f64>>, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut columns: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut min_step = f64::INFINITY;
        for _ in 0..k {
            let scale = rng.gen_range(0.1..3.0);
            min_step = min_step.min(scale);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            columns.push(perm.into_iter().map(|v| v as f64 * scale).collect());
        }
        let values = (0..n)
            .map(|p| (0..k).map(|d| columns[d][p]).collect())
            .collect();
        (values, min_step)
    }

    proptest! {
        #[test]
        fn tiny_slabs_reproduce_the_oracle_exactly(
            seed in any::<u64>(),
            n in 1usize..120,
            k in 2usize..4,
        ) {
            let (values, step) = distinct_lattice(seed, n, k);
            let config = FilterConfig { h: Some(0.4 * step), bins: 200 };
            let (plane, _) = plane_filter_values(&values, &config).unwrap();
            let (oracle, _) = oracle_filter_values(&values).unwrap();
            let brute = brute_force_front(&values);
            prop_assert_eq!(&oracle, &brute);
            prop_assert_eq!(&plane, &brute);
        }

        #[test]
        fn any_slab_width_yields_a_mutually_non_dominated_subset(
            seed in any::<u64>(),
            n in 1usize..120,
            k in 2usize..4,
            h in 0.01f64..50.0,
        ) {
            // Duplicates allowed: coordinates on a coarse integer grid.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..k).map(|_| rng.gen_range(0..20) as f64).collect())
                .collect();
            let (plane, stats) =
                plane_filter_values(&values, &FilterConfig { h: Some(h), bins: 200 }).unwrap();
            prop_assert!(!plane.is_empty());
            prop_assert_eq!(plane.len(), stats.n_output);
            prop_assert!(plane.windows(2).all(|w| w[0] < w[1]), "sorted unique indices");
            for &p in &plane {
                for &r in &plane {
                    prop_assert!(!dominates(&values[r], &values[p]));
                }
            }
        }

        #[test]
        fn oracle_is_idempotent(seed in any::<u64>(), n in 1usize..80, k in 2usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..k).map(|_| rng.gen_range(0.0..10.0)).collect())
                .collect();
            let (first, _) = oracle_filter_values(&values).unwrap();
            let front: Vec<Vec<f64>> = first.iter().map(|&i| values[i].clone()).collect();
            let (second, _) = oracle_filter_values(&front).unwrap();
            prop_assert_eq!(second, (0..first.len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn set_level_wrappers_carry_provenance() {
        let set = WeakParetoSet {
            points: vec![
                WeakPoint {
                    index: 10,
                    x: vec![0.1],
                    fx: vec![1.0, 2.0],
                    p_pareto: 0.9,
                },
                WeakPoint {
                    index: 20,
                    x: vec![0.2],
                    fx: vec![2.0, 2.0],
                    p_pareto: 0.8,
                },
                WeakPoint {
                    index: 30,
                    x: vec![0.3],
                    fx: vec![2.0, 1.0],
                    p_pareto: 0.7,
                },
            ],
            threshold: 0.5,
            n_candidates: 100,
        };
        let strong = plane_filter(
            &set,
            &FilterConfig {
                h: Some(0.1),
                bins: 200,
            },
        )
        .unwrap();
        assert_eq!(strong.indices, vec![0, 2]);
        assert_eq!(strong.points[1].index, 30);
        assert_eq!(strong.stats.n_input, 3);
        assert_eq!(strong.stats.n_output, 2);
        let oracle = oracle_filter(&set).unwrap();
        assert_eq!(oracle.indices, vec![0, 2]);
        assert_eq!(oracle.stats.f_min, vec![1.0, 1.0]);
        assert_eq!(oracle.stats.f_max, vec![2.0, 2.0]);
    }
}
