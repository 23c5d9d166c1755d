use rayon::prelude::*;

use super::config::{ExperimentConfig, GridPolicy, StrategyName, StrategySpec};
use super::output::{fmt_num, write_csv};
use crate::analytic::{paoi_corollary1, paoi_theorem1_with_sign, DenominatorSign, PaoiReport};
use crate::error::{Error, Result};
use crate::model::{make_policy, CachingPolicy, Catalog, PhyParams, TrafficParams};
use crate::optimize::{checked_optimal_caching, mpc_policy, optimal_caching, uc_policy};
use crate::sim::{estimate, Scenario};

/// Process exit status of a command.
pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;

/// Policy for a strategy at one grid point; `None` when the optimiser finds
/// the point infeasible.
fn policy_for(
    spec: &StrategySpec,
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
) -> Result<Option<CachingPolicy>> {
    match spec {
        StrategySpec::Named(StrategyName::Mpc) => Ok(Some(mpc_policy(catalog))),
        StrategySpec::Named(StrategyName::Uc) => Ok(Some(uc_policy(catalog))),
        StrategySpec::Named(StrategyName::Optimal) => match optimal_caching(catalog, phy, traffic) {
            Ok(r) => Ok(Some(r.policy)),
            Err(Error::Infeasible(msg)) => {
                eprintln!("warning: optimiser infeasible at C = {}: {msg}", catalog.cache_size());
                Ok(None)
            }
            Err(e) => Err(e),
        },
        StrategySpec::Explicit(v) => {
            if v.len() != catalog.num_files() {
                return Err(Error::config(
                    "strategy",
                    format!("explicit vector has {} entries, catalog has {}", v.len(), catalog.num_files()),
                ));
            }
            make_policy(v.clone(), catalog.cache_size())
                .map(Some)
                .map_err(|e| Error::config("strategy", e.to_string()))
        }
    }
}

fn theorem_report(
    cfg: &ExperimentConfig,
    policy: &CachingPolicy,
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
    sign: DenominatorSign,
) -> Result<PaoiReport> {
    let report = paoi_theorem1_with_sign(policy, catalog, phy, traffic, &cfg.series_control(), sign)?;
    if report.truncation_terms_used >= cfg.series.max_terms {
        eprintln!(
            "warning: interference series used all {} terms at theta = {} (linear)",
            report.truncation_terms_used,
            phy.sinr_threshold()
        );
    }
    Ok(report)
}

/// Compares the closed-form optimum with the projected-gradient solver once,
/// at the first grid point where the problem is feasible.
fn startup_self_check(cfg: &ExperimentConfig, points: &[(f64, f64, usize)]) -> Result<()> {
    if cfg.strategy != StrategySpec::Named(StrategyName::Optimal)
        && !cfg.strategies.contains(&StrategyName::Optimal)
    {
        return Ok(());
    }
    for &(theta_db, zeta, c) in points {
        let (phy, traffic, catalog) = (cfg.phy_at(theta_db)?, TrafficParams::new(zeta)?, cfg.catalog_at(c)?);
        match checked_optimal_caching(&catalog, &phy, &traffic) {
            Ok((_, gap)) => {
                if gap > 1e-4 {
                    eprintln!("warning: closed-form optimum deviates from the numeric solver by {gap:e}; numeric result is authoritative");
                }
                return Ok(());
            }
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

pub fn sweep_theta(cfg: &ExperimentConfig) -> Result<u8> {
    cfg.require_grids(GridPolicy { theta: true, zeta: true, cache: false })?;
    let c = cfg.catalog.cache_size.values()[0];
    let catalog = cfg.catalog_at(c)?;
    let points: Vec<(f64, f64)> = cfg
        .traffic
        .arrival_rate
        .values()
        .into_iter()
        .flat_map(|z| cfg.phy.sinr_threshold_db.values().into_iter().map(move |t| (t, z)))
        .collect();
    if cfg.strategy == StrategySpec::Named(StrategyName::Optimal) {
        let pts: Vec<_> = points.iter().map(|&(t, z)| (t, z, c)).collect();
        startup_self_check(cfg, &pts)?;
    }
    let rows = points
        .par_iter()
        .map(|&(theta_db, zeta)| -> Result<Vec<String>> {
            let phy = cfg.phy_at(theta_db)?;
            let traffic = TrafficParams::new(zeta)?;
            let value = match policy_for(&cfg.strategy, &catalog, &phy, &traffic)? {
                Some(p) => theorem_report(cfg, &p, &catalog, &phy, &traffic, DenominatorSign::Subtract)?.weighted_paoi,
                None => f64::INFINITY,
            };
            Ok(vec![
                fmt_num(theta_db)?,
                fmt_num(zeta)?,
                fmt_num(value)?,
                if value.is_finite() { "1" } else { "0" }.to_string(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(cfg.output.as_deref(), &["theta_db", "zeta", "paoi_weighted", "feasible"], &rows)?;
    Ok(EXIT_OK)
}

pub fn sweep_cache(cfg: &ExperimentConfig) -> Result<u8> {
    cfg.require_grids(GridPolicy { theta: false, zeta: false, cache: true })?;
    let theta_db = cfg.phy.sinr_threshold_db.values()[0];
    let zeta = cfg.traffic.arrival_rate.values()[0];
    let phy = cfg.phy_at(theta_db)?;
    let traffic = TrafficParams::new(zeta)?;
    let points: Vec<(usize, StrategyName)> = cfg
        .catalog
        .cache_size
        .values()
        .into_iter()
        .flat_map(|c| cfg.strategies.iter().map(move |&s| (c, s)))
        .collect();
    let checks: Vec<_> = cfg.catalog.cache_size.values().into_iter().map(|c| (theta_db, zeta, c)).collect();
    startup_self_check(cfg, &checks)?;
    let rows = points
        .par_iter()
        .map(|&(c, s)| -> Result<Vec<String>> {
            let catalog = cfg.catalog_at(c)?;
            let value = match policy_for(&StrategySpec::Named(s), &catalog, &phy, &traffic)? {
                Some(p) => theorem_report(cfg, &p, &catalog, &phy, &traffic, DenominatorSign::Subtract)?.weighted_paoi,
                None => f64::INFINITY,
            };
            Ok(vec![c.to_string(), s.as_str().to_string(), fmt_num(value)?])
        })
        .collect::<Result<Vec<_>>>()?;
    write_csv(cfg.output.as_deref(), &["cache_size", "strategy", "paoi_weighted"], &rows)?;
    Ok(EXIT_OK)
}

pub fn optimize(cfg: &ExperimentConfig) -> Result<u8> {
    cfg.require_grids(GridPolicy { theta: false, zeta: false, cache: false })?;
    let phy = cfg.phy_at(cfg.phy.sinr_threshold_db.values()[0])?;
    let traffic = TrafficParams::new(cfg.traffic.arrival_rate.values()[0])?;
    let catalog = cfg.catalog_at(cfg.catalog.cache_size.values()[0])?;
    let (r, gap) = match checked_optimal_caching(&catalog, &phy, &traffic) {
        Ok(x) => x,
        Err(Error::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e),
    };
    let probs = r.policy.probs();
    let solver = if gap > 1e-4 { "projected gradient" } else { "closed form" };
    println!("solver: {solver} (closed form vs numeric max gap {})", fmt_num(gap)?);
    println!("multiplier: {}", fmt_num(r.multiplier)?);
    println!("objective: {}", fmt_num(r.objective)?);
    println!("sum: {}", fmt_num(probs.iter().sum())?);
    println!("clamped_low: {:?}", r.clamped_low);
    println!("clamped_high: {:?}", r.clamped_high);
    for (f, q) in probs.iter().enumerate() {
        println!("q[{f}] = {}", fmt_num(*q)?);
    }
    if let Some(path) = cfg.output.as_deref() {
        let rows = probs
            .iter()
            .zip(catalog.popularity())
            .enumerate()
            .map(|(f, (&q, &p))| Ok(vec![f.to_string(), fmt_num(p)?, fmt_num(q)?]))
            .collect::<Result<Vec<_>>>()?;
        write_csv(Some(path), &["file", "popularity", "q"], &rows)?;
    }
    Ok(EXIT_OK)
}

/// Relative half-band allowed between analytic and simulated peak age.
pub const VALIDATION_BAND: f64 = 0.05;

pub fn validate(cfg: &ExperimentConfig, sign: DenominatorSign) -> Result<u8> {
    cfg.require_grids(GridPolicy { theta: true, zeta: true, cache: false })?;
    let sim_cfg = cfg.sim_config()?;
    let catalog = cfg.catalog_at(cfg.catalog.cache_size.values()[0])?;
    let isolated = matches!(sim_cfg.scenario, Scenario::IsolatedBs { .. });
    // The summary shares standard output only when the CSV goes to a file.
    let to_file = cfg.output.is_some();
    let say = |line: String| {
        if to_file {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    let mut rows = Vec::new();
    let mut all_pass = true;
    for zeta in cfg.traffic.arrival_rate.values() {
        for theta_db in cfg.phy.sinr_threshold_db.values() {
            let phy = cfg.phy_at(theta_db)?;
            let traffic = TrafficParams::new(zeta)?;
            // Without interferers the analytic side is its interference-free limit.
            let phy_analytic = if isolated { phy.with_sinr_threshold(1e-12)? } else { phy };
            let Some(policy) = policy_for(&cfg.strategy, &catalog, &phy, &traffic)? else {
                all_pass = false;
                rows.push(vec![fmt_num(theta_db)?, fmt_num(zeta)?, "inf".into(), "inf".into(), "inf".into(), "inf".into(), "0".into(), "0".into()]);
                say(format!("theta = {theta_db} dB, zeta = {zeta}: FAIL (no feasible policy)"));
                continue;
            };
            let thm = theorem_report(cfg, &policy, &catalog, &phy_analytic, &traffic, sign)?;
            let cor = paoi_corollary1(&policy, &catalog, &phy_analytic, &traffic)?;
            let (sim_mean, sim_hw, unstable, tracked) = match estimate(&policy, &catalog, &phy, &traffic, &sim_cfg) {
                Ok(s) => {
                    let w = s.weighted_peak_age(catalog.popularity());
                    let u: usize = s.unstable_realizations.iter().sum();
                    let (m, h) = w.map(|e| (e.mean, e.half_width)).unwrap_or((f64::INFINITY, f64::INFINITY));
                    (m, h, u, s.files)
                }
                Err(Error::EmptyEstimate) => (f64::INFINITY, f64::INFINITY, sim_cfg.num_realizations, vec![]),
                Err(e) => return Err(e),
            };
            let weighted = |r: &PaoiReport| -> f64 {
                let (mut num, mut mass) = (0.0, 0.0);
                for &f in &tracked {
                    num += catalog.popularity()[f] * r.per_file_paoi[f];
                    mass += catalog.popularity()[f];
                }
                if mass > 0.0 { num / mass } else { f64::INFINITY }
            };
            let (t1, c1) = (weighted(&thm), weighted(&cor));
            let pass = t1.is_finite()
                && sim_mean.is_finite()
                && (t1 - sim_mean).abs() <= VALIDATION_BAND * sim_mean + sim_hw;
            all_pass &= pass;
            say(format!(
                "theta = {theta_db} dB, zeta = {zeta}: theorem {} corollary {} sim {} +- {} ({} unstable realizations): {}",
                fmt_num(t1)?,
                fmt_num(c1)?,
                fmt_num(sim_mean)?,
                fmt_num(sim_hw)?,
                unstable,
                if pass { "PASS" } else { "FAIL" }
            ));
            rows.push(vec![
                fmt_num(theta_db)?,
                fmt_num(zeta)?,
                fmt_num(t1)?,
                fmt_num(c1)?,
                fmt_num(sim_mean)?,
                fmt_num(sim_hw)?,
                unstable.to_string(),
                if pass { "1" } else { "0" }.to_string(),
            ]);
        }
    }
    write_csv(
        cfg.output.as_deref(),
        &["theta_db", "zeta", "theorem1", "corollary1", "sim_mean", "sim_half_width", "unstable_realizations", "pass"],
        &rows,
    )?;
    Ok(if all_pass { EXIT_OK } else { EXIT_VALIDATION })
}
