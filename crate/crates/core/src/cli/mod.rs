//! Command-line front end of the `paoi` binary.
//!
//! Subcommands read a TOML [`ExperimentConfig`] (every key optional), apply
//! flag overrides, and write CSV either to the configured output path or to
//! standard output. Warnings go to standard error.
//!
//! Exit status: 0 success, 1 configuration or numerical error, 2 infeasible
//! configuration, 3 failed validation. `PAOI_THREADS` caps the worker count.

mod commands;
mod config;
mod grid;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, EXIT_VALIDATION, VALIDATION_BAND};
pub use config::{
    CatalogSection, ExperimentConfig, GridPolicy, OneOrMany, PhySection, ScenarioName, SeriesSection,
    SimSection, StrategyName, StrategySpec, TrackSpec, TrafficSection,
};
pub use grid::{check_grid, parse_grid, parse_int_grid, parse_policy, MAX_GRID_POINTS};
pub use output::{fmt_num, write_csv};

use crate::analytic::DenominatorSign;
use crate::error::{Error, Result};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "PAOI_THREADS";

#[derive(Debug, Parser)]
#[command(name = "paoi", version, about = "Peak age of information in cache-enabled cellular networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PAoI versus SINR threshold, one curve per arrival rate.
    SweepTheta(CommonArgs),
    /// PAoI versus cache size for each caching strategy.
    SweepCache(CommonArgs),
    /// Optimal caching probabilities for a single configuration.
    Optimize(CommonArgs),
    /// Analytic values against the Monte Carlo simulator.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML configuration file; built-in defaults are used when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// SINR threshold grid in dB (`x`, `a,b,c` or `start:step:stop`).
    #[arg(long, allow_hyphen_values = true)]
    pub theta_db: Option<String>,
    /// Arrival-rate grid.
    #[arg(long)]
    pub zeta: Option<String>,
    /// Cache-size grid.
    #[arg(long)]
    pub cache_size: Option<String>,
    /// Catalog size F.
    #[arg(long)]
    pub num_files: Option<usize>,
    /// Zipf popularity exponent.
    #[arg(long)]
    pub skew: Option<f64>,
    /// Probability that an interfering base station transmits.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Path-loss exponent (greater than 2).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Transmit power in dBm.
    #[arg(long, allow_hyphen_values = true)]
    pub tx_power_dbm: Option<f64>,
    /// Base-station density per square metre.
    #[arg(long)]
    pub density: Option<f64>,
    /// Caching strategy used by `sweep-theta`, `optimize` and `validate`.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyName>,
    /// File holding an explicit caching vector; overrides `--strategy`.
    #[arg(long)]
    pub policy_file: Option<PathBuf>,
    /// Strategies compared by `sweep-cache`, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub strategies: Option<Vec<StrategyName>>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub output: Option<String>,
    /// Simulation seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Spatial realizations per simulated point.
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Time slots per realization.
    #[arg(long)]
    pub slots: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignChoice {
    Subtract,
    PrintedPlus,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Debug: sign of the interference terms in the analytic denominator.
    /// `printed-plus` is a negative control that should fail validation.
    #[arg(long, value_enum, default_value = "subtract")]
    pub denominator_sign: SignChoice,
}

impl CommonArgs {
    /// Loads the configuration and applies every override flag.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_path(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(t) = &self.theta_db {
            cfg.phy.sinr_threshold_db = many(parse_grid(t)?);
        }
        if let Some(z) = &self.zeta {
            cfg.traffic.arrival_rate = many(parse_grid(z)?);
        }
        if let Some(c) = &self.cache_size {
            cfg.catalog.cache_size = many(parse_int_grid(c)?);
        }
        if let Some(f) = self.num_files {
            cfg.catalog.num_files = f;
        }
        if let Some(s) = self.skew {
            cfg.catalog.skew = s;
        }
        if let Some(b) = self.beta {
            cfg.phy.active_prob = b;
        }
        if let Some(a) = self.alpha {
            cfg.phy.pathloss_exp = a;
        }
        if let Some(p) = self.tx_power_dbm {
            cfg.phy.tx_power_dbm = p;
        }
        if let Some(d) = self.density {
            cfg.phy.bs_density = d;
        }
        if let Some(s) = self.strategy {
            cfg.strategy = StrategySpec::Named(s);
        }
        if let Some(p) = &self.policy_file {
            let text = std::fs::read_to_string(p).map_err(|e| Error::config(p.display().to_string(), e.to_string()))?;
            cfg.strategy = StrategySpec::Explicit(parse_policy(&text)?);
        }
        if let Some(s) = &self.strategies {
            cfg.strategies = s.clone();
        }
        if let Some(o) = &self.output {
            cfg.output = Some(o.clone());
        }
        if self.seed.is_some() || self.realizations.is_some() || self.slots.is_some() {
            let sim = cfg.sim.get_or_insert_with(SimSection::default);
            if let Some(s) = self.seed {
                sim.seed = s;
            }
            if let Some(r) = self.realizations {
                sim.num_realizations = r;
            }
            if let Some(s) = self.slots {
                sim.slots_per_realization = s;
            }
        }
        cfg.check()?;
        Ok(cfg)
    }
}

fn many<T: Clone>(v: Vec<T>) -> OneOrMany<T> {
    if v.len() == 1 {
        OneOrMany::One(v[0].clone())
    } else {
        OneOrMany::Many(v)
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::config(THREADS_ENV, format!("`{raw}` is not a positive integer")))?;
    // A pool built earlier in the process (tests) is kept as is.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> u8 {
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::SweepTheta(a) => commands::sweep_theta(&a.resolve()?),
        Command::SweepCache(a) => commands::sweep_cache(&a.resolve()?),
        Command::Optimize(a) => commands::optimize(&a.resolve()?),
        Command::Validate(v) => {
            let sign = match v.denominator_sign {
                SignChoice::Subtract => DenominatorSign::Subtract,
                SignChoice::PrintedPlus => DenominatorSign::PrintedPlus,
            };
            let mut cfg = v.common.resolve()?;
            if cfg.sim.is_none() {
                cfg.sim = Some(SimSection::default());
                cfg.check()?;
            }
            commands::validate(&cfg, sign)
        }
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Infeasible(_) => EXIT_INFEASIBLE,
                _ => EXIT_CONFIG,
            }
        }
    }
}
