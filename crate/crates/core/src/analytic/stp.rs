use crate::error::{Error, Result};
use crate::model::PhyParams;
use crate::specialfn::{beta, gauss_2f1, SeriesControl};

/// `W_m = 2F1(m, m - delta; m - delta + 1; -(1 - beta) theta)`.
///
/// This is the ring integral `int_1^inf y^(-m/delta) (1 + (1-beta) theta y^(-1/delta))^(-m) dy`
/// scaled by `(m - delta)/delta`; it arises from the inverse moments `E[L^-(n+1)]`
/// of the interference Laplace transform.
pub fn w_term(m: u32, phy: &PhyParams, control: &SeriesControl) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("w_term requires m >= 1"));
    }
    let d = phy.delta();
    let m = f64::from(m);
    let z = -(1.0 - phy.active_prob()) * phy.sinr_threshold();
    gauss_2f1(m, m - d, m - d + 1.0, z, control)
}

/// `V_m = B(delta, m - delta)`.
pub fn v_term(m: u32, phy: &PhyParams) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("v_term requires m >= 1"));
    }
    let d = phy.delta();
    beta(d, f64::from(m) - d)
}

/// Argument of the hypergeometric factor in the same-cache interference term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplaceArgument {
    /// `-theta`: what the Laplace transform of the muted interference integrates to.
    Unmuted,
    /// `-(1 - beta) theta`: the inverse-moment argument, kept as the rejected
    /// alternative for the success-probability arbitration.
    MutingScaled,
}

/// Spatially averaged successful transmission probability `beta * E[P(SIR > theta)]`
/// for a user whose file is cached with probability `q_f`.
///
/// Averaging the product of both interference Laplace transforms against the
/// serving-distance density gives
/// `beta q / (q + beta delta [q theta/(1-delta) 2F1(1,1-delta;2-delta;-theta) +
/// (1-q) theta^delta B(delta, 1-delta)])`,
/// which contains neither the density nor the transmit power.
pub fn mean_stp(q_f: f64, phy: &PhyParams, control: &SeriesControl) -> Result<f64> {
    mean_stp_with_argument(q_f, phy, LaplaceArgument::Unmuted, control)
}

pub fn mean_stp_with_argument(
    q_f: f64,
    phy: &PhyParams,
    argument: LaplaceArgument,
    control: &SeriesControl,
) -> Result<f64> {
    if !(q_f > 0.0 && q_f <= 1.0) {
        return Err(Error::domain(format!(
            "mean_stp needs a caching probability in (0, 1], got {q_f}"
        )));
    }
    let d = phy.delta();
    let b = phy.active_prob();
    let theta = phy.sinr_threshold();
    let z = match argument {
        LaplaceArgument::Unmuted => -theta,
        LaplaceArgument::MutingScaled => -(1.0 - b) * theta,
    };
    let same_cache = q_f * theta / (1.0 - d) * gauss_2f1(1.0, 1.0 - d, 2.0 - d, z, control)?;
    let other = (1.0 - q_f) * theta.powf(d) * beta(d, 1.0 - d)?;
    Ok(b * q_f / (q_f + b * d * (same_cache + other)))
}
