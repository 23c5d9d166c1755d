//! TOML experiment configuration.
//!
//! Every field has a default, so an empty file is a valid configuration. Power
//! is given in dBm and the SINR threshold in dB; both are converted once, when
//! the physical parameters are built.

use serde::{Deserialize, Serialize};

use super::grid::check_grid;
use crate::error::{Error, Result};
use crate::model::{Catalog, PhyParams, TrafficParams, REFERENCE_DENSITY};
use crate::sim::{Scenario, SimConfig, TrackFiles};
use crate::specialfn::SeriesControl;

/// A scalar or a list of values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, OneOrMany::Many(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StrategyName {
    Optimal,
    Mpc,
    Uc,
}

impl StrategyName {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyName::Optimal => "optimal",
            StrategyName::Mpc => "mpc",
            StrategyName::Uc => "uc",
        }
    }
}

/// Either a named strategy or an explicit caching vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StrategySpec {
    Named(StrategyName),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhySection {
    pub tx_power_dbm: f64,
    pub bs_density: f64,
    pub pathloss_exp: f64,
    pub active_prob: f64,
    pub sinr_threshold_db: OneOrMany<f64>,
}

impl Default for PhySection {
    fn default() -> Self {
        Self {
            tx_power_dbm: 23.0,
            bs_density: REFERENCE_DENSITY,
            pathloss_exp: 4.5,
            active_prob: 0.5,
            sinr_threshold_db: OneOrMany::One(-3.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrafficSection {
    pub arrival_rate: OneOrMany<f64>,
}

impl Default for TrafficSection {
    fn default() -> Self {
        Self {
            arrival_rate: OneOrMany::One(0.02),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CatalogSection {
    pub num_files: usize,
    pub skew: f64,
    pub cache_size: OneOrMany<usize>,
}

impl Default for CatalogSection {
    fn default() -> Self {
        Self {
            num_files: 30,
            skew: 0.8,
            cache_size: OneOrMany::One(25),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioName {
    Ppp,
    Isolated,
}

/// `"all"` or a list of file indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrackSpec {
    Keyword(String),
    List(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub region_radius_m: f64,
    pub num_realizations: usize,
    pub slots_per_realization: u64,
    pub warmup_slots: u64,
    pub seed: u64,
    pub track_files: TrackSpec,
    pub queue_limit: usize,
    pub scenario: ScenarioName,
    pub isolated_distance_m: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        let d = SimConfig::default();
        Self {
            region_radius_m: d.region_radius,
            num_realizations: d.num_realizations,
            slots_per_realization: d.slots_per_realization,
            warmup_slots: d.warmup_slots,
            seed: d.rng_seed,
            track_files: TrackSpec::List(vec![0]),
            queue_limit: d.queue_limit,
            scenario: ScenarioName::Ppp,
            isolated_distance_m: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeriesSection {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesSection {
    fn default() -> Self {
        let c = SeriesControl::default();
        Self {
            rel_tol: c.rel_tol(),
            max_terms: c.max_terms(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub output: Option<String>,
    pub strategy: StrategySpec,
    /// Strategies compared by `sweep-cache`.
    pub strategies: Vec<StrategyName>,
    pub phy: PhySection,
    pub traffic: TrafficSection,
    pub catalog: CatalogSection,
    pub series: SeriesSection,
    pub sim: Option<SimSection>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            output: None,
            strategy: StrategySpec::Named(StrategyName::Optimal),
            strategies: vec![StrategyName::Optimal, StrategyName::Mpc, StrategyName::Uc],
            phy: PhySection::default(),
            traffic: TrafficSection::default(),
            catalog: CatalogSection::default(),
            series: SeriesSection::default(),
            sim: None,
        }
    }
}

/// Which dimensions a command lets vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPolicy {
    pub theta: bool,
    pub zeta: bool,
    pub cache: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let path = e
                .span()
                .map(|s| format!("bytes {}..{}", s.start, s.end))
                .unwrap_or_else(|| "<root>".into());
            Error::config(path, e.message().to_string())
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<serialize>", e.to_string()))
    }

    /// Structural checks that do not depend on the command.
    pub fn check(&self) -> Result<()> {
        let grid = |path: &str, v: &[f64]| check_grid(v).map_err(|e| Error::config(path, e.to_string()));
        grid("phy.sinr_threshold_db", &self.phy.sinr_threshold_db.values())?;
        grid("traffic.arrival_rate", &self.traffic.arrival_rate.values())?;
        let caches: Vec<f64> = self.catalog.cache_size.values().iter().map(|&c| c as f64).collect();
        grid("catalog.cache_size", &caches)?;
        for &z in &self.traffic.arrival_rate.values() {
            TrafficParams::new(z).map_err(|e| Error::config("traffic.arrival_rate", e.to_string()))?;
        }
        for &t in &self.phy.sinr_threshold_db.values() {
            self.phy_at(t)?;
        }
        for &c in &self.catalog.cache_size.values() {
            self.catalog_at(c)?;
        }
        if self.strategies.is_empty() {
            return Err(Error::config("strategies", "at least one strategy is required"));
        }
        SeriesControl::new(self.series.rel_tol, self.series.max_terms)
            .map_err(|e| Error::config("series", e.to_string()))?;
        if let Some(sim) = &self.sim {
            if let TrackSpec::Keyword(k) = &sim.track_files {
                if k != "all" {
                    return Err(Error::config("sim.track_files", "expected \"all\" or a list of indices"));
                }
            }
            let theta = self.phy.sinr_threshold_db.values()[0];
            self.sim_config()?
                .validate(&self.phy_at(theta)?)
                .map_err(|e| Error::config("sim", e.to_string()))?;
        }
        Ok(())
    }

    /// Rejects grids in dimensions the command does not sweep.
    pub fn require_grids(&self, allowed: GridPolicy) -> Result<()> {
        let pairs = [
            ("phy.sinr_threshold_db", self.phy.sinr_threshold_db.is_grid(), allowed.theta),
            ("traffic.arrival_rate", self.traffic.arrival_rate.is_grid(), allowed.zeta),
            ("catalog.cache_size", self.catalog.cache_size.is_grid(), allowed.cache),
        ];
        for (path, is_grid, ok) in pairs {
            if is_grid && !ok {
                return Err(Error::config(path, "this command expects a single value here"));
            }
        }
        Ok(())
    }

    pub fn phy_at(&self, theta_db: f64) -> Result<PhyParams> {
        let p = &self.phy;
        PhyParams::from_db_units(p.tx_power_dbm, p.bs_density, p.pathloss_exp, p.active_prob, theta_db)
            .map_err(|e| Error::config("phy", e.to_string()))
    }

    pub fn catalog_at(&self, cache_size: usize) -> Result<Catalog> {
        Catalog::zipf(self.catalog.num_files, self.catalog.skew, cache_size)
            .map_err(|e| Error::config("catalog", e.to_string()))
    }

    pub fn series_control(&self) -> SeriesControl {
        SeriesControl::new(self.series.rel_tol, self.series.max_terms).expect("checked at load time")
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let s = self
            .sim
            .as_ref()
            .ok_or_else(|| Error::config("sim", "this command needs a [sim] section"))?;
        Ok(SimConfig {
            region_radius: s.region_radius_m,
            num_realizations: s.num_realizations,
            slots_per_realization: s.slots_per_realization,
            warmup_slots: s.warmup_slots,
            rng_seed: s.seed,
            track_files: match &s.track_files {
                TrackSpec::Keyword(_) => TrackFiles::All,
                TrackSpec::List(v) => TrackFiles::List(v.clone()),
            },
            scenario: match s.scenario {
                ScenarioName::Ppp => Scenario::Ppp,
                ScenarioName::Isolated => Scenario::IsolatedBs {
                    distance: s.isolated_distance_m,
                },
            },
            queue_limit: s.queue_limit,
        })
    }
}
