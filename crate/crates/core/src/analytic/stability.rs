use super::theorem::{interference_series, InterferenceSeries, SeriesStatus};
use crate::error::{Error, Result};
use crate::model::{PhyParams, TrafficParams};
use crate::specialfn::SeriesControl;

/// Boundary between finite and infinite PAoI.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityThresholds {
    pub g_value: f64,
    pub e_value: f64,
    /// `E / (1 - G + E)`, identical for every file. May exceed 1, in which case
    /// no caching probability keeps the queue stable.
    pub critical_q: Vec<f64>,
    /// Linear threshold at which a fully cached file (`q_f = 1`) becomes unstable.
    pub critical_theta: Option<f64>,
}

impl StabilityThresholds {
    pub fn critical_q_value(&self) -> f64 {
        self.critical_q.first().copied().unwrap_or(f64::NAN)
    }
}

fn converged(series: InterferenceSeries) -> Result<InterferenceSeries> {
    match series.status {
        SeriesStatus::Converged => Ok(series),
        SeriesStatus::Diverged => Err(Error::Infeasible(format!(
            "interference series diverges after {} terms: arrivals outpace the muted service rate",
            series.terms
        ))),
        SeriesStatus::Truncated => Err(Error::NonConvergence {
            terms: series.terms,
            partial_sum: series.g + series.e,
        }),
    }
}

pub fn stability_thresholds(
    phy: &PhyParams,
    traffic: &TrafficParams,
    num_files: usize,
    include_theta: bool,
    control: &SeriesControl,
) -> Result<StabilityThresholds> {
    let s = converged(interference_series(phy, traffic, control)?)?;
    let k = 1.0 - s.g + s.e;
    if !(k > 0.0) {
        return Err(Error::Infeasible(format!(
            "1 - G + E = {k} <= 0: no caching probability yields a finite PAoI"
        )));
    }
    let critical_theta = if include_theta {
        Some(critical_theta(phy, traffic, control)?)
    } else {
        None
    };
    Ok(StabilityThresholds {
        g_value: s.g,
        e_value: s.e,
        critical_q: vec![s.e / k; num_files],
        critical_theta,
    })
}

/// Whether a fully cached file has a finite PAoI at this threshold: `1 - G(theta) > 0`.
fn stable_at(phy: &PhyParams, traffic: &TrafficParams, theta: f64, control: &SeriesControl) -> Result<bool> {
    let s = interference_series(&phy.with_sinr_threshold(theta)?, traffic, control)?;
    match s.status {
        SeriesStatus::Converged => Ok(s.g < 1.0),
        SeriesStatus::Diverged => Ok(false),
        // A partial sum already at or above 1 can only grow.
        SeriesStatus::Truncated if s.g >= 1.0 => Ok(false),
        SeriesStatus::Truncated => Err(Error::NonConvergence {
            terms: s.terms,
            partial_sum: s.g,
        }),
    }
}

/// Critical SINR threshold: the `theta` at which the effective service rate of a
/// fully cached file meets the arrival rate, i.e. the root of `1 - G(theta)`.
/// Found by bracketing and bisection in `ln(theta)`.
pub fn critical_theta(phy: &PhyParams, traffic: &TrafficParams, control: &SeriesControl) -> Result<f64> {
    const MIN_THETA: f64 = 1e-12;
    const MAX_THETA: f64 = 1e12;
    let (mut lo, mut hi) = (0.5, 1.0);
    while stable_at(phy, traffic, hi, control)? {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_THETA {
            return Err(Error::Numerical("critical theta exceeds 1e12".into()));
        }
    }
    while !stable_at(phy, traffic, lo, control)? {
        hi = lo;
        lo *= 0.5;
        if lo < MIN_THETA {
            return Err(Error::Infeasible(
                "no positive SINR threshold yields a finite PAoI".into(),
            ));
        }
    }
    for _ in 0..200 {
        if hi / lo - 1.0 < 1e-13 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if stable_at(phy, traffic, mid, control)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
