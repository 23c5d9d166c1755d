//! Closed-form engine.
//!
//! * [`queue_peak_age`]: exact peak age of the discrete-time Bernoulli queue.
//! * [`w_term`], [`v_term`], [`mean_stp`]: interference building blocks and the
//!   spatially averaged successful transmission probability.
//! * [`paoi_theorem1`], [`paoi_corollary1`]: the general series form of the PAoI
//!   and its two-term simplification.
//! * [`stability_thresholds`], [`critical_theta`]: the finite/infinite boundary.

mod queue;
mod stability;
mod stp;
mod theorem;

pub use queue::queue_peak_age;
pub use stability::{critical_theta, stability_thresholds, StabilityThresholds};
pub use stp::{mean_stp, mean_stp_with_argument, v_term, w_term, LaplaceArgument};
pub use theorem::{
    interference_series, paoi_corollary1, paoi_theorem1, paoi_theorem1_with_sign,
    CorollaryCoefficients, DenominatorSign, InterferenceSeries, PaoiReport, SeriesStatus,
    Theorem1Coefficients,
};
