use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::spatial::SpatialRealization;
use super::stats::Estimate;
use super::temporal::{conditional_stp, probe_stp, run_queue, sir_attempt, QueueSettings, TraceStats};
use crate::error::{Error, Result};
use crate::model::{CachingPolicy, Catalog, PhyParams, TrafficParams};

/// Spatial layout simulated around the typical user at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// Poisson BS field in a disc, caches drawn from the policy.
    Ppp,
    /// One BS at the given distance holding every file, no interferers.
    IsolatedBs { distance: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrackFiles {
    All,
    List(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub region_radius: f64,
    pub num_realizations: usize,
    pub slots_per_realization: u64,
    pub warmup_slots: u64,
    pub rng_seed: u64,
    pub track_files: TrackFiles,
    pub scenario: Scenario,
    /// Queue length at which a trace is declared unstable and abandoned.
    pub queue_limit: usize,
}

/// Smallest admissible expected BS count in the simulation disc.
pub const MIN_EXPECTED_BS: f64 = 100.0;

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            region_radius: 2500.0,
            num_realizations: 200,
            slots_per_realization: 20_000,
            warmup_slots: 2_000,
            rng_seed: 1,
            track_files: TrackFiles::All,
            scenario: Scenario::Ppp,
            queue_limit: 1_000_000,
        }
    }
}

impl SimConfig {
    pub fn validate(&self, phy: &PhyParams) -> Result<()> {
        if self.warmup_slots >= self.slots_per_realization {
            return Err(Error::domain(format!(
                "warmup_slots ({}) must be below slots_per_realization ({})",
                self.warmup_slots, self.slots_per_realization
            )));
        }
        if self.num_realizations == 0 {
            return Err(Error::domain("num_realizations must be positive"));
        }
        match self.scenario {
            Scenario::Ppp => {
                let expected = phy.bs_density() * std::f64::consts::PI * self.region_radius.powi(2);
                if !(expected >= MIN_EXPECTED_BS) {
                    return Err(Error::domain(format!(
                        "region radius {} m holds {expected:.1} BSs on average; at least {MIN_EXPECTED_BS} are required",
                        self.region_radius
                    )));
                }
            }
            Scenario::IsolatedBs { distance } => {
                if !(distance > 0.0 && distance.is_finite()) {
                    return Err(Error::domain("isolated BS distance must be positive"));
                }
            }
        }
        Ok(())
    }

    fn queue_settings(&self, traffic: &TrafficParams) -> QueueSettings {
        QueueSettings {
            arrival_rate: traffic.arrival_rate(),
            slots: self.slots_per_realization,
            warmup: self.warmup_slots,
            queue_limit: self.queue_limit,
        }
    }
}

/// Pooled simulator output for the tracked files.
///
/// Peak-age and mean-age estimates average the per-realization means over
/// stable realizations, i.e. those whose exact conditional service probability
/// exceeds the arrival rate and whose queue stayed below the limit; an unstable
/// realization has an infinite conditional peak age and is only counted.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub files: Vec<usize>,
    pub per_file_stp: Vec<Option<Estimate>>,
    pub per_file_peak_age: Vec<Option<Estimate>>,
    pub per_file_mean_age: Vec<Option<Estimate>>,
    /// Files for which no realization produced a stable trace.
    pub unstable_files: Vec<usize>,
    /// Peak-age samples recorded per file across stable realizations.
    pub sample_counts: Vec<u64>,
    pub unstable_realizations: Vec<usize>,
    pub uncovered_realizations: Vec<usize>,
}

impl SimResult {
    /// Popularity-weighted peak age over the tracked files that have an
    /// estimate, renormalised by their total popularity.
    pub fn weighted_peak_age(&self, popularity: &[f64]) -> Option<Estimate> {
        let (mut num, mut var, mut mass, mut n) = (0.0, 0.0, 0.0, usize::MAX);
        for (&f, est) in self.files.iter().zip(&self.per_file_peak_age) {
            if let Some(e) = est {
                let p = popularity[f];
                num += p * e.mean;
                var += (p * e.half_width).powi(2);
                mass += p;
                n = n.min(e.n);
            }
        }
        (mass > 0.0).then(|| Estimate {
            mean: num / mass,
            half_width: var.sqrt() / mass,
            n,
        })
    }
}

enum FileOutcome {
    Uncovered,
    Trace { stats: TraceStats, stable: bool },
}

/// Independent stream for `(seed, realization, file)`; `file = u64::MAX` keys
/// the spatial draw itself.
pub fn stream(seed: u64, realization: u64, file: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&realization.to_le_bytes());
    key[16..24].copy_from_slice(&file.to_le_bytes());
    key[24..].copy_from_slice(b"paoi-sim");
    ChaCha8Rng::from_seed(key)
}

fn realize(
    policy: &CachingPolicy,
    phy: &PhyParams,
    config: &SimConfig,
    realization: u64,
) -> SpatialRealization {
    match config.scenario {
        Scenario::Ppp => {
            let mut rng = stream(config.rng_seed, realization, u64::MAX);
            SpatialRealization::sample(policy, phy.bs_density(), config.region_radius, &mut rng)
        }
        Scenario::IsolatedBs { distance } => {
            let f = policy.num_files();
            SpatialRealization::new(vec![[distance, 0.0]], vec![(0..f).collect()], f)
        }
    }
}

/// Interferer gains sorted in decreasing order, so failing attempts stop early.
fn sorted_gains(real: &SpatialRealization, file: usize, phy: &PhyParams) -> Option<Vec<f64>> {
    let mut g = real.interference_gains(file, phy.pathloss_exp())?;
    g.sort_by(|a, b| b.total_cmp(a));
    Some(g)
}

fn tracked(config: &SimConfig, num_files: usize) -> Result<Vec<usize>> {
    match &config.track_files {
        TrackFiles::All => Ok((0..num_files).collect()),
        TrackFiles::List(v) => {
            if v.is_empty() {
                return Err(Error::domain("track_files list is empty"));
            }
            if let Some(&bad) = v.iter().find(|&&f| f >= num_files) {
                return Err(Error::domain(format!(
                    "tracked file {bad} outside catalog of {num_files} files"
                )));
            }
            Ok(v.clone())
        }
    }
}

/// Runs `num_realizations` spatial draws, each with one temporal trace per
/// tracked file, in parallel. Results depend only on the seed.
pub fn estimate(
    policy: &CachingPolicy,
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
    config: &SimConfig,
) -> Result<SimResult> {
    config.validate(phy)?;
    if policy.num_files() != catalog.num_files() {
        return Err(Error::domain("policy and catalog sizes differ"));
    }
    let files = tracked(config, catalog.num_files())?;
    let settings = config.queue_settings(traffic);
    let zeta = traffic.arrival_rate();
    let (beta, theta) = (phy.active_prob(), phy.sinr_threshold());

    let outcomes: Vec<Vec<FileOutcome>> = (0..config.num_realizations as u64)
        .into_par_iter()
        .map(|r| {
            let real = realize(policy, phy, config, r);
            files
                .iter()
                .map(|&f| match sorted_gains(&real, f, phy) {
                    None => FileOutcome::Uncovered,
                    Some(gains) => {
                        let mut rng = stream(config.rng_seed, r, f as u64);
                        let stats = run_queue(&settings, &mut rng, |rng| {
                            sir_attempt(&gains, beta, theta, rng)
                        });
                        let stable = !stats.overflowed && conditional_stp(&gains, beta, theta) > zeta;
                        FileOutcome::Trace { stats, stable }
                    }
                })
                .collect()
        })
        .collect();

    let k = files.len();
    let mut stp = vec![Vec::new(); k];
    let mut peak = vec![Vec::new(); k];
    let mut age = vec![Vec::new(); k];
    let mut samples = vec![0u64; k];
    let mut unstable = vec![0usize; k];
    let mut uncovered = vec![0usize; k];
    for per_real in &outcomes {
        for (i, o) in per_real.iter().enumerate() {
            match o {
                FileOutcome::Uncovered => uncovered[i] += 1,
                FileOutcome::Trace { stats, stable } => {
                    debug_assert_eq!(stats.arrivals, stats.departures + stats.final_queue);
                    if let Some(s) = stats.stp() {
                        stp[i].push(s);
                    }
                    if !stable {
                        unstable[i] += 1;
                        continue;
                    }
                    if let Some(a) = stats.mean_peak_age() {
                        peak[i].push(a);
                        samples[i] += stats.peak_count;
                    }
                    if let Some(a) = stats.mean_age() {
                        age[i].push(a);
                    }
                }
            }
        }
    }
    let per_file_peak_age: Vec<Option<Estimate>> = peak.iter().map(|v| Estimate::from_samples(v)).collect();
    let unstable_files: Vec<usize> = files
        .iter()
        .zip(&per_file_peak_age)
        .filter(|(_, e)| e.is_none())
        .map(|(&f, _)| f)
        .collect();
    if unstable_files.len() == k {
        return Err(Error::EmptyEstimate);
    }
    Ok(SimResult {
        per_file_stp: stp.iter().map(|v| Estimate::from_samples(v)).collect(),
        per_file_peak_age,
        per_file_mean_age: age.iter().map(|v| Estimate::from_samples(v)).collect(),
        unstable_files,
        sample_counts: samples,
        unstable_realizations: unstable,
        uncovered_realizations: uncovered,
        files,
    })
}

/// Spatially averaged per-slot success probability of `file`, estimated by
/// `probes` independent SIR trials per realization. Uncovered realizations
/// count as failures.
pub fn estimate_stp(
    policy: &CachingPolicy,
    phy: &PhyParams,
    config: &SimConfig,
    file: usize,
    probes: u64,
) -> Result<Estimate> {
    config.validate(phy)?;
    if file >= policy.num_files() || probes == 0 {
        return Err(Error::domain("estimate_stp needs a valid file and at least one probe"));
    }
    let (beta, theta) = (phy.active_prob(), phy.sinr_threshold());
    let per_real: Vec<f64> = (0..config.num_realizations as u64)
        .into_par_iter()
        .map(|r| {
            let real = realize(policy, phy, config, r);
            match sorted_gains(&real, file, phy) {
                None => 0.0,
                Some(g) => {
                    let mut rng = stream(config.rng_seed, r, file as u64);
                    probe_stp(&g, beta, theta, probes, &mut rng) as f64 / probes as f64
                }
            }
        })
        .collect();
    Estimate::from_samples(&per_real).ok_or(Error::EmptyEstimate)
}
