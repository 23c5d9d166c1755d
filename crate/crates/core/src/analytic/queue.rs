use crate::error::{Error, Result};

/// Mean peak age (slots) of a discrete-time FIFO queue with Bernoulli(`arrival_rate`)
/// arrivals and per-slot service success `service_prob`.
///
/// `1/zeta + (1 - zeta)/(mu - zeta)` when `mu > zeta`, `+inf` otherwise.
pub fn queue_peak_age(arrival_rate: f64, service_prob: f64) -> Result<f64> {
    if !(arrival_rate > 0.0 && arrival_rate < 1.0) {
        return Err(Error::domain(format!(
            "arrival_rate must lie in (0, 1), got {arrival_rate}"
        )));
    }
    if !(service_prob > 0.0 && service_prob <= 1.0) {
        return Err(Error::domain(format!(
            "service_prob must lie in (0, 1], got {service_prob}"
        )));
    }
    if service_prob > arrival_rate {
        Ok(1.0 / arrival_rate + (1.0 - arrival_rate) / (service_prob - arrival_rate))
    } else {
        Ok(f64::INFINITY)
    }
}
