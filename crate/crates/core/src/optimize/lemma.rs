use super::projected::{numeric_optimal_caching, Objective};
use super::{clamp_sets, OptimizationResult};
use crate::analytic::{stability_thresholds, Theorem1Coefficients};
use crate::error::{Error, Result};
use crate::model::{make_policy, Catalog, PhyParams, TrafficParams};
use crate::specialfn::SeriesControl;

/// Coefficients `(a, b)` of the square-root water-filling rule
/// `q_f(eta) = clamp(a sqrt(p_f E / eta) + b, q^c, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaForm {
    /// Stationarity of the Lagrangian: `a = sqrt(1 - zeta) / K`, `b = E / K`
    /// with `K = 1 - G + E`. Since `b = q^c` the lower clamp never binds.
    Derived,
    /// `a = (1 - zeta) / (beta K)`, `b = (1 - zeta) E / (beta K)`. These do not
    /// satisfy the stationarity conditions of the objective; kept so the
    /// discrepancy stays reproducible.
    Printed,
}

const CAPACITY_RESIDUAL: f64 = 1e-10;

/// Closed-form optimum of the weighted PAoI under the box and capacity constraints.
pub fn optimal_caching(
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
) -> Result<OptimizationResult> {
    optimal_caching_with_form(catalog, phy, traffic, LemmaForm::Derived)
}

pub fn optimal_caching_with_form(
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
    form: LemmaForm,
) -> Result<OptimizationResult> {
    let control = SeriesControl::default();
    let th = stability_thresholds(phy, traffic, 1, false, &control)?;
    let q_c = th.critical_q_value();
    let (f, c) = (catalog.num_files(), catalog.cache_size());
    check_feasible(q_c, f, c)?;

    let zeta = traffic.arrival_rate();
    let k = 1.0 - th.g_value + th.e_value;
    let e = th.e_value;
    let (a, b) = match form {
        LemmaForm::Derived => ((1.0 - zeta).sqrt() / k, e / k),
        LemmaForm::Printed => {
            let s = (1.0 - zeta) / (phy.active_prob() * k);
            (s, s * e)
        }
    };
    // q_f(eta) = clamp(b + s_f / sqrt(eta), q_c, 1)
    let slopes: Vec<f64> = catalog.popularity().iter().map(|&p| a * (p * e).sqrt()).collect();
    let probs_at = |eta: f64| -> Vec<f64> {
        let r = eta.sqrt().recip();
        slopes.iter().map(|s| (b + s * r).clamp(q_c, 1.0)).collect()
    };
    let total = |eta: f64| -> f64 { probs_at(eta).iter().sum() };

    let coeffs = Theorem1Coefficients::new(phy, traffic, &control)?;
    let finish = |probs: Vec<f64>, eta: f64, iterations: usize| -> Result<OptimizationResult> {
        let policy = make_policy(probs, c)?;
        let objective = coeffs.weighted(catalog.popularity(), policy.probs())?;
        let (clamped_low, clamped_high) = clamp_sets(policy.probs(), q_c);
        Ok(OptimizationResult {
            policy,
            multiplier: eta,
            objective,
            clamped_low,
            clamped_high,
            iterations,
        })
    };

    if c == f {
        // Every file is fully cached; report the smallest multiplier that keeps them there.
        let s_min = slopes.iter().copied().fold(f64::INFINITY, f64::min);
        let eta = if b < 1.0 { (s_min / (1.0 - b)).powi(2) } else { f64::INFINITY };
        return finish(vec![1.0; f], eta, 0);
    }

    // Unclamped closed form: F b + sum(s) / sqrt(eta) = C.
    let s_sum: f64 = slopes.iter().sum();
    let spare = c as f64 - f as f64 * b;
    let eta0 = if spare > 0.0 { (s_sum / spare).powi(2) } else { 1.0 };
    let (mut lo, mut hi) = (eta0, eta0);
    let mut iterations = 0usize;
    let mut sum_lo = total(lo);
    while sum_lo < c as f64 {
        lo *= 0.5;
        let s = total(lo);
        assert!(s >= sum_lo, "capacity map must be non-increasing in the multiplier");
        sum_lo = s;
        iterations += 1;
        if lo < 1e-300 {
            return Err(Error::Numerical("multiplier bracket underflow".into()));
        }
    }
    let mut sum_hi = total(hi);
    while sum_hi > c as f64 {
        hi *= 2.0;
        let s = total(hi);
        assert!(s <= sum_hi, "capacity map must be non-increasing in the multiplier");
        sum_hi = s;
        iterations += 1;
        if hi > 1e300 {
            return Err(Error::Numerical(format!(
                "capacity {c} unreachable: the rule saturates at sum {sum_hi} as the multiplier grows"
            )));
        }
    }
    let mut eta = (lo * hi).sqrt();
    for _ in 0..400 {
        iterations += 1;
        eta = (lo * hi).sqrt();
        let s = total(eta);
        assert!(
            s <= sum_lo + 1e-12 && s >= sum_hi - 1e-12,
            "capacity map must be non-increasing in the multiplier"
        );
        if (s - c as f64).abs() <= CAPACITY_RESIDUAL {
            break;
        }
        if s > c as f64 {
            lo = eta;
            sum_lo = s;
        } else {
            hi = eta;
            sum_hi = s;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    let probs = probs_at(eta);
    let residual = probs.iter().sum::<f64>() - c as f64;
    if residual.abs() > CAPACITY_RESIDUAL {
        return Err(Error::Numerical(format!(
            "multiplier bisection stalled with capacity residual {residual:e}"
        )));
    }
    finish(probs, eta, iterations)
}

fn check_feasible(q_c: f64, f: usize, c: usize) -> Result<()> {
    if q_c >= 1.0 {
        return Err(Error::Infeasible(format!(
            "critical caching probability {q_c:.6} >= 1: no placement gives a finite PAoI"
        )));
    }
    if f as f64 * q_c >= c as f64 {
        return Err(Error::Infeasible(format!(
            "capacity constraint binds: F * q^c = {:.6} >= C = {c}",
            f as f64 * q_c
        )));
    }
    Ok(())
}

/// Closed form cross-checked against the projected-gradient solver. When the two
/// disagree by more than `1e-4` in any coordinate the numeric answer is returned
/// together with the largest gap.
pub fn checked_optimal_caching(
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
) -> Result<(OptimizationResult, f64)> {
    let fast = optimal_caching(catalog, phy, traffic)?;
    let slow = numeric_optimal_caching(catalog, phy, traffic, Objective::Theorem1)?;
    let gap = fast
        .policy
        .probs()
        .iter()
        .zip(slow.policy.probs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if gap > 1e-4 {
        Ok((slow, gap))
    } else {
        Ok((fast, gap))
    }
}
