//! Domain types shared by the analytic engine, the optimizer and the simulator.

use crate::error::{Error, Result};

/// Converts a level in dB to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// BS density of the reference deployment: three BSs per disc of radius 250 m.
pub const REFERENCE_DENSITY: f64 = 3.0 / (250.0 * 250.0 * std::f64::consts::PI);

/// Physical-layer configuration. All quantities are linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhyParams {
    tx_power: f64,
    bs_density: f64,
    pathloss_exp: f64,
    active_prob: f64,
    sinr_threshold: f64,
}

impl PhyParams {
    pub fn new(
        tx_power: f64,
        bs_density: f64,
        pathloss_exp: f64,
        active_prob: f64,
        sinr_threshold: f64,
    ) -> Result<Self> {
        let finite = [tx_power, bs_density, pathloss_exp, active_prob, sinr_threshold]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("physical parameters must be finite"));
        }
        if !(tx_power > 0.0) {
            return Err(Error::domain(format!("tx_power must be positive, got {tx_power}")));
        }
        if !(bs_density > 0.0) {
            return Err(Error::domain(format!(
                "bs_density must be positive, got {bs_density}"
            )));
        }
        if !(pathloss_exp > 2.0) {
            return Err(Error::domain(format!(
                "pathloss_exp must exceed 2, got {pathloss_exp}"
            )));
        }
        if !(active_prob > 0.0 && active_prob <= 1.0) {
            return Err(Error::domain(format!(
                "active_prob must lie in (0, 1], got {active_prob}"
            )));
        }
        if !(sinr_threshold > 0.0) {
            return Err(Error::domain(format!(
                "sinr_threshold must be positive, got {sinr_threshold}"
            )));
        }
        Ok(Self {
            tx_power,
            bs_density,
            pathloss_exp,
            active_prob,
            sinr_threshold,
        })
    }

    /// Builds parameters from the units used in configuration files.
    pub fn from_db_units(
        tx_power_dbm: f64,
        bs_density: f64,
        pathloss_exp: f64,
        active_prob: f64,
        sinr_threshold_db: f64,
    ) -> Result<Self> {
        Self::new(
            dbm_to_watts(tx_power_dbm),
            bs_density,
            pathloss_exp,
            active_prob,
            db_to_linear(sinr_threshold_db),
        )
    }

    /// P = 23 dBm, lambda = 3/(250^2 pi), alpha = 4.5, beta = 0.5, theta = 0 dB.
    pub fn reference() -> Self {
        Self::from_db_units(23.0, REFERENCE_DENSITY, 4.5, 0.5, 0.0).expect("valid reference")
    }

    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    pub fn bs_density(&self) -> f64 {
        self.bs_density
    }

    pub fn pathloss_exp(&self) -> f64 {
        self.pathloss_exp
    }

    pub fn active_prob(&self) -> f64 {
        self.active_prob
    }

    pub fn sinr_threshold(&self) -> f64 {
        self.sinr_threshold
    }

    /// `delta = 2 / alpha`, in (0, 1) for every valid path-loss exponent.
    pub fn delta(&self) -> f64 {
        2.0 / self.pathloss_exp
    }

    pub fn with_sinr_threshold(&self, sinr_threshold: f64) -> Result<Self> {
        Self::new(
            self.tx_power,
            self.bs_density,
            self.pathloss_exp,
            self.active_prob,
            sinr_threshold,
        )
    }

    pub fn with_bs_density(&self, bs_density: f64) -> Result<Self> {
        Self::new(
            self.tx_power,
            bs_density,
            self.pathloss_exp,
            self.active_prob,
            self.sinr_threshold,
        )
    }

    pub fn with_tx_power(&self, tx_power: f64) -> Result<Self> {
        Self::new(
            tx_power,
            self.bs_density,
            self.pathloss_exp,
            self.active_prob,
            self.sinr_threshold,
        )
    }

    pub fn with_active_prob(&self, active_prob: f64) -> Result<Self> {
        Self::new(
            self.tx_power,
            self.bs_density,
            self.pathloss_exp,
            active_prob,
            self.sinr_threshold,
        )
    }

    pub fn with_pathloss_exp(&self, pathloss_exp: f64) -> Result<Self> {
        Self::new(
            self.tx_power,
            self.bs_density,
            pathloss_exp,
            self.active_prob,
            self.sinr_threshold,
        )
    }
}

/// Bernoulli arrival process of status updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficParams {
    arrival_rate: f64,
}

impl TrafficParams {
    pub fn new(arrival_rate: f64) -> Result<Self> {
        if !(arrival_rate > 0.0 && arrival_rate < 1.0) {
            return Err(Error::domain(format!(
                "arrival_rate must lie in (0, 1), got {arrival_rate}"
            )));
        }
        Ok(Self { arrival_rate })
    }

    pub fn arrival_rate(&self) -> f64 {
        self.arrival_rate
    }
}

/// Zipf popularity `p_f = f^-skew / sum_j j^-skew`, files indexed from 1.
pub fn zipf_popularity(num_files: usize, skew: f64) -> Result<Vec<f64>> {
    if num_files == 0 {
        return Err(Error::domain("zipf_popularity requires at least one file"));
    }
    if !(skew >= 0.0) || !skew.is_finite() {
        return Err(Error::domain(format!(
            "zipf skew must be finite and non-negative, got {skew}"
        )));
    }
    let weights: Vec<f64> = (1..=num_files).map(|f| (f as f64).powf(-skew)).collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// File universe with popularity and per-BS cache capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    popularity: Vec<f64>,
    cache_size: usize,
}

impl Catalog {
    /// Validates, never renormalizes, the popularity vector.
    pub fn new(popularity: Vec<f64>, cache_size: usize) -> Result<Self> {
        if popularity.is_empty() {
            return Err(Error::domain("catalog needs at least one file"));
        }
        if let Some((i, p)) = popularity
            .iter()
            .enumerate()
            .find(|(_, p)| !(**p >= 0.0) || !p.is_finite())
        {
            return Err(Error::domain(format!("popularity[{i}] = {p} is not a probability")));
        }
        let total: f64 = popularity.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "popularity must sum to 1 within 1e-12, sums to {total}"
            )));
        }
        if let Some(i) = popularity.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::domain(format!(
                "popularity must be non-increasing, popularity[{}] > popularity[{i}]",
                i + 1
            )));
        }
        if cache_size == 0 || cache_size > popularity.len() {
            return Err(Error::domain(format!(
                "cache_size must lie in [1, {}], got {cache_size}",
                popularity.len()
            )));
        }
        Ok(Self {
            popularity,
            cache_size,
        })
    }

    pub fn zipf(num_files: usize, skew: f64, cache_size: usize) -> Result<Self> {
        Self::new(zipf_popularity(num_files, skew)?, cache_size)
    }

    /// 30 files, Zipf skew 0.8, with the given cache size.
    pub fn reference(cache_size: usize) -> Result<Self> {
        Self::zipf(30, 0.8, cache_size)
    }

    pub fn num_files(&self) -> usize {
        self.popularity.len()
    }

    pub fn popularity(&self) -> &[f64] {
        &self.popularity
    }

    pub fn cache_size(&self) -> usize {
        self.cache_size
    }

    pub fn with_cache_size(&self, cache_size: usize) -> Result<Self> {
        Self::new(self.popularity.clone(), cache_size)
    }
}

/// Per-file caching probabilities satisfying the box and capacity constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct CachingPolicy {
    probs: Vec<f64>,
    cache_size: usize,
}

/// Tolerance on `sum(q) = C`.
pub const CAPACITY_TOL: f64 = 1e-9;

impl CachingPolicy {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cache_size(&self) -> usize {
        self.cache_size
    }

    pub fn num_files(&self) -> usize {
        self.probs.len()
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }
}

/// Validates `0 <= q_f <= 1` and `sum q_f = C` (within [`CAPACITY_TOL`]).
pub fn make_policy(probs: Vec<f64>, cache_size: usize) -> Result<CachingPolicy> {
    if let Some((index, &value)) = probs
        .iter()
        .enumerate()
        .find(|(_, q)| !(**q >= 0.0 && **q <= 1.0))
    {
        return Err(Error::BoxViolation { index, value });
    }
    let sum: f64 = probs.iter().sum();
    if (sum - cache_size as f64).abs() > CAPACITY_TOL {
        return Err(Error::CapacityViolation { sum, cache_size });
    }
    Ok(CachingPolicy { probs, cache_size })
}
