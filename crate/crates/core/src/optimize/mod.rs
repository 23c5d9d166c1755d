//! Cache-placement optimisation.
//!
//! The per-file PAoI excess `(1 - zeta) q / (q (1 - G + E) - E)` is convex and
//! decreasing on `(q^c, 1]`, so minimising the popularity-weighted sum under
//! `sum q = C` is a separable convex program. [`optimal_caching`] solves its KKT
//! system in closed form up to a scalar multiplier; [`numeric_optimal_caching`]
//! attacks the same program by projected gradient descent and serves as the
//! arbiter. [`mpc_policy`] and [`uc_policy`] are the two baselines.

mod baseline;
mod lemma;
mod projected;

pub use baseline::{mpc_policy, uc_policy};
pub use lemma::{checked_optimal_caching, optimal_caching, optimal_caching_with_form, LemmaForm};
pub use projected::{numeric_optimal_caching, project_capped_simplex, Objective};

use crate::model::CachingPolicy;

/// Outcome of either solver.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub policy: CachingPolicy,
    /// Lagrange multiplier of the capacity constraint.
    pub multiplier: f64,
    /// Popularity-weighted PAoI at `policy` (slots).
    pub objective: f64,
    pub clamped_low: Vec<usize>,
    pub clamped_high: Vec<usize>,
    pub iterations: usize,
}

/// Indices sitting on the lower and upper box bounds.
fn clamp_sets(probs: &[f64], floor: f64) -> (Vec<usize>, Vec<usize>) {
    const EPS: f64 = 1e-12;
    let low = probs
        .iter()
        .enumerate()
        .filter(|(_, &q)| q <= floor + EPS)
        .map(|(i, _)| i)
        .collect();
    let high = probs
        .iter()
        .enumerate()
        .filter(|(_, &q)| q >= 1.0 - EPS)
        .map(|(i, _)| i)
        .collect();
    (low, high)
}
