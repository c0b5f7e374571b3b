//! The probabilistic document-retrieval trade-off problem.
//!
//! A pool of `n_docs` retrieved documents contains `R` relevant ones and `G`
//! belonging to a protected group. Two objectives are jointly maximized:
//!
//! * relevance `f_r = R / n_docs`, and
//! * group fairness `f_g = H(G / n_docs)`, the binary entropy of the group
//!   proportion, which peaks at 1 when the group makes up exactly half the
//!   pool.
//!
//! The problem ships with two sampling regimes over the integer grid
//! `[0, n_docs]^2`: an empirical one where `R` and `G` are binomial
//! (documents independently relevant with probability `p_r` and in-group
//! with probability `p_g`), and a uniform one that covers the whole grid.
//! Under binomial sampling the full-relevance corner `R = n_docs` is
//! effectively never observed, so only the `f_g = 1` ridge is reachable;
//! uniform sampling exposes the single ideal point `(f_r, f_g) = (1, 1)`.

use super::MooProblem;
use crate::error::{Error, Result};
use crate::sampler::{BinomialSpec, Distribution};

/// A fair-search problem plus the two sampling regimes it is studied under.
#[derive(Debug)]
pub struct FairSearch {
    /// The two-objective maximization problem over `[0, n_docs]^2`.
    pub problem: MooProblem,
    /// Binomial sampling: `R ~ B(n_docs, p_r)`, `G ~ B(n_docs, p_g)`.
    pub binomial: Distribution,
    /// Uniform integer sampling over the full grid.
    pub uniform: Distribution,
}

/// Binary entropy `H(p)` in bits, with the continuous extension `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Build the retrieval trade-off problem for a pool of `n_docs` documents.
///
/// `p_r` and `p_g` are the per-document relevance and group probabilities of
/// the binomial sampling regime; both must lie in `(0, 1)`.
pub fn fair_search_problem(n_docs: u64, p_r: f64, p_g: f64) -> Result<FairSearch> {
    if n_docs == 0 {
        return Err(Error::input("fair search needs at least one document"));
    }
    for (name, p) in [("p_r", p_r), ("p_g", p_g)] {
        if !(p.is_finite() && 0.0 < p && p < 1.0) {
            return Err(Error::Input(format!(
                "{name} must lie strictly inside (0, 1), got {p}"
            )));
        }
    }
    let nd = n_docs as f64;
    // The entropy derivative log2((1-p)/p) diverges at the grid edges; it is
    // evaluated with the proportion pulled back to [delta, 1 - delta], a
    // quarter grid step, which leaves every interior grid point untouched.
    let delta = 1.0 / (4.0 * nd);
    let problem = MooProblem::builder("fair-search")
        .variable(0.0, nd) // R, count of relevant documents
        .variable(0.0, nd) // G, count of in-group documents
        // Canonical minimization forms of the maximized objectives.
        .objective(
            move |x: &[f64]| -(x[0] / nd),
            move |_: &[f64]| vec![-1.0 / nd, 0.0],
        )
        .objective(
            move |x: &[f64]| -binary_entropy(x[1] / nd),
            move |x: &[f64]| {
                let p = (x[1] / nd).clamp(delta, 1.0 - delta);
                vec![0.0, -((1.0 - p) / p).log2() / nd]
            },
        )
        .box_constraints_for_all()
        .maximize(true)
        .build()?;
    Ok(FairSearch {
        problem,
        binomial: Distribution::Binomial {
            per_variable: vec![
                BinomialSpec {
                    trials: n_docs,
                    p: p_r,
                },
                BinomialSpec {
                    trials: n_docs,
                    p: p_g,
                },
            ],
        },
        uniform: Distribution::UniformInteger,
    })
}
