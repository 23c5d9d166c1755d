use super::{clamp_sets, OptimizationResult};
use crate::analytic::{stability_thresholds, CorollaryCoefficients, Theorem1Coefficients};
use crate::error::{Error, Result};
use crate::model::{make_policy, Catalog, PhyParams, TrafficParams};
use crate::specialfn::SeriesControl;

/// Which analytic PAoI the numeric solver minimises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Theorem1,
    Corollary1,
}

const MAX_ITERATIONS: usize = 100_000;
const PG_TOLERANCE: f64 = 1e-8;
const FD_REL_STEP: f64 = 1e-6;
const ARMIJO: f64 = 1e-4;

enum Evaluator {
    Theorem(Theorem1Coefficients),
    Corollary(CorollaryCoefficients),
}

impl Evaluator {
    fn excess(&self, q: f64) -> Result<f64> {
        match self {
            Evaluator::Theorem(c) => c.excess(q),
            Evaluator::Corollary(c) => Ok(c.excess(q)),
        }
    }
}

/// Minimises the chosen PAoI over `{floor <= q <= 1, sum q = C}` by projected
/// gradient descent with Barzilai-Borwein steps and Armijo backtracking.
///
/// The gradient is a central finite difference with relative step `1e-6`. The
/// objective is a sum of per-file terms, so each partial difference only needs
/// the term of the coordinate being perturbed.
pub fn numeric_optimal_caching(
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
    objective: Objective,
) -> Result<OptimizationResult> {
    let control = SeriesControl::default();
    let (eval, floor) = match objective {
        Objective::Theorem1 => {
            let th = stability_thresholds(phy, traffic, 1, false, &control)?;
            (
                Evaluator::Theorem(Theorem1Coefficients::new(phy, traffic, &control)?),
                th.critical_q_value(),
            )
        }
        Objective::Corollary1 => {
            let c = CorollaryCoefficients::new(phy, traffic, &control)?;
            let floor = c.critical_q();
            (Evaluator::Corollary(c), floor)
        }
    };
    let p = catalog.popularity();
    let (nf, cap) = (catalog.num_files(), catalog.cache_size());
    if !(floor < 1.0) || nf as f64 * floor >= cap as f64 {
        return Err(Error::Infeasible(format!(
            "stability floor {floor:.6} leaves no interior point with sum {cap} over {nf} files"
        )));
    }
    let base = 1.0 / traffic.arrival_rate();
    let value = |x: &[f64]| -> Result<f64> {
        let mut acc = 0.0;
        for (&pi, &xi) in p.iter().zip(x) {
            acc += pi * eval.excess(xi)?;
        }
        Ok(base + acc)
    };
    let gradient = |x: &[f64]| -> Result<Vec<f64>> {
        x.iter()
            .zip(p)
            .map(|(&xi, &pi)| {
                let mut h = FD_REL_STEP * xi;
                // Stay inside the region where the objective is finite.
                if xi - h <= floor {
                    h = 0.5 * (xi - floor);
                }
                Ok(pi * (eval.excess(xi + h)? - eval.excess(xi - h)?) / (2.0 * h))
            })
            .collect()
    };
    let pg_norm = |x: &[f64], g: &[f64]| -> f64 {
        let y: Vec<f64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
        project_capped_simplex(&y, floor, 1.0, cap as f64)
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };

    if cap == nf {
        let x = vec![1.0; nf];
        let obj = value(&x)?;
        let (clamped_low, clamped_high) = clamp_sets(&x, floor);
        return Ok(OptimizationResult {
            policy: make_policy(x, cap)?,
            multiplier: 0.0,
            objective: obj,
            clamped_low,
            clamped_high,
            iterations: 0,
        });
    }

    let mut x = vec![cap as f64 / nf as f64; nf];
    let mut fx = value(&x)?;
    let mut g = gradient(&x)?;
    let gmax = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut step = if gmax > 0.0 { 0.1 / gmax } else { 1.0 };
    let mut iterations = 0;
    let mut converged = pg_norm(&x, &g) < PG_TOLERANCE;
    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut t = step;
        let (x_new, f_new) = loop {
            let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - t * b).collect();
            let cand = project_capped_simplex(&y, floor, 1.0, cap as f64);
            let decrease: f64 = g.iter().zip(cand.iter().zip(&x)).map(|(gi, (c, xi))| gi * (c - xi)).sum();
            let fc = value(&cand)?;
            // The slack absorbs rounding in the objective once progress is tiny.
            if fc.is_finite() && fc <= fx + ARMIJO * decrease + 1e-14 * fx.abs() {
                break (cand, fc);
            }
            t *= 0.5;
            if t < 1e-30 {
                return Err(Error::Numerical(format!(
                    "line search collapsed after {iterations} iterations (objective {fx}, pg norm {:e})",
                    pg_norm(&x, &g)
                )));
            }
        };
        let g_new = gradient(&x_new)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&yv).map(|(a, b)| a * b).sum();
        let ss: f64 = s.iter().map(|a| a * a).sum();
        step = if sy > 0.0 { (ss / sy).clamp(1e-12, 1e12) } else { t * 2.0 };
        x = x_new;
        fx = f_new;
        g = g_new;
        converged = pg_norm(&x, &g) < PG_TOLERANCE || ss == 0.0;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "projected gradient did not converge in {MAX_ITERATIONS} iterations (pg norm {:e})",
            pg_norm(&x, &g)
        )));
    }
    // Interior coordinates share the marginal -eta.
    let interior: Vec<f64> = x
        .iter()
        .zip(&g)
        .filter(|(&q, _)| q > floor + 1e-9 && q < 1.0 - 1e-9)
        .map(|(_, &gi)| -gi)
        .collect();
    let multiplier = if interior.is_empty() {
        0.0
    } else {
        interior.iter().sum::<f64>() / interior.len() as f64
    };
    let (clamped_low, clamped_high) = clamp_sets(&x, floor);
    Ok(OptimizationResult {
        policy: make_policy(x, cap)?,
        multiplier,
        objective: fx,
        clamped_low,
        clamped_high,
        iterations,
    })
}

/// Euclidean projection onto `{lo <= x <= hi, sum x = total}`.
///
/// The projection is `clamp(y - tau, lo, hi)` for the water level `tau` solving
/// the sum constraint; `tau` is bracketed by bisection and then fixed exactly on
/// the free coordinates.
pub fn project_capped_simplex(y: &[f64], lo: f64, hi: f64, total: f64) -> Vec<f64> {
    let n = y.len() as f64;
    debug_assert!(lo <= hi && n * lo <= total + 1e-12 && total <= n * hi + 1e-12);
    let sum_at = |tau: f64| -> f64 { y.iter().map(|v| (v - tau).clamp(lo, hi)).sum() };
    let ymax = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ymin = y.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut a, mut b) = (ymin - hi, ymax - lo);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if sum_at(m) > total {
            a = m;
        } else {
            b = m;
        }
    }
    let mut tau = 0.5 * (a + b);
    let (mut free_sum, mut free_n, mut fixed) = (0.0, 0usize, 0.0);
    for &v in y {
        let z = v - tau;
        if z <= lo {
            fixed += lo;
        } else if z >= hi {
            fixed += hi;
        } else {
            free_sum += v;
            free_n += 1;
        }
    }
    if free_n > 0 {
        tau = (free_sum - (total - fixed)) / free_n as f64;
    }
    y.iter().map(|v| (v - tau).clamp(lo, hi)).collect()
}
