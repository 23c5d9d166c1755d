//! End-to-end acceptance run: ten criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_RED` are reported as failures together with the
//! reason; they do not fail the run. Any other failure does.

// Negated comparisons keep NaN on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::time::Instant;

use common::*;
use paoi::analytic::{
    critical_theta, mean_stp, CorollaryCoefficients, mean_stp_with_argument, paoi_theorem1, queue_peak_age,
    stability_thresholds, LaplaceArgument, Theorem1Coefficients,
};
use paoi::model::{make_policy, Catalog, PhyParams, TrafficParams, REFERENCE_DENSITY};
use paoi::optimize::{
    mpc_policy, numeric_optimal_caching, optimal_caching, optimal_caching_with_form, uc_policy, LemmaForm,
    Objective,
};
use paoi::sim::{
    estimate, estimate_stp, simulate_bernoulli_queue, stats::ks_test, stream, QueueSettings, SimConfig,
    SpatialRealization, TrackFiles,
};
use paoi::specialfn::{beta, gauss_2f1, gauss_2f1_pfaff, gauss_2f1_series, SeriesControl};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail, with the reason printed next to them.
const KNOWN_RED: &[(u32, &str)] = &[
    (
        5,
        "at beta = 0.5 the series form puts theta = 3 dB on the infinite side of its stability \
         boundary for every caching probability, while the simulated queues stay stable, and at \
         theta = 0 dB, zeta = 0.05 it sits about 11% above the simulated mean",
    ),
    (
        6,
        "the two-term form keeps one denominator per inverse moment of the success probability; \
         the second one turns negative wherever that moment diverges, while the resummed series \
         stays finite, and the finite cases reach the 1% boundary",
    ),
];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

fn single_file(q: f64) -> (Catalog, paoi::model::CachingPolicy) {
    // F = n, C = 1 uniform caching gives q = 1/n for every file.
    let n = (1.0 / q).round() as usize;
    let cat = Catalog::new(vec![1.0 / n as f64; n], 1).unwrap();
    let pol = uc_policy(&cat);
    assert!((pol.probs()[0] - q).abs() < 1e-12);
    (cat, pol)
}

fn c1_special_functions() -> Outcome {
    let c = ctl();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let (a, b, cc) = (rng.random_range(0.05..6.0), rng.random_range(0.05..6.0), rng.random_range(0.3..7.0));
        worst = worst.max((gauss_2f1(a, b, cc, 0.0, &c).unwrap() - 1.0).abs());
    }
    for i in 1..=500 {
        let z = -5.0 * i as f64 / 500.0;
        worst = worst.max(rel(gauss_2f1(1.0, 1.0, 2.0, z, &c).unwrap(), -(1.0 - z).ln() / z));
    }
    worst = worst.max(rel(beta(0.5, 0.5).unwrap(), std::f64::consts::PI));
    worst = worst.max(rel(beta(1.0, 1.0).unwrap(), 1.0));
    for _ in 0..2000 {
        let (a, b, cc) = (rng.random_range(0.05..6.0), rng.random_range(0.05..6.0), rng.random_range(0.3..7.0));
        let z = -rng.random_range(0.0..30.0f64);
        let x = gauss_2f1(a, b, cc, z, &c).unwrap();
        worst = worst.max(rel(gauss_2f1(b, a, cc, z, &c).unwrap(), x));
        if z >= -5.0 {
            worst = worst.max(rel(gauss_2f1_pfaff(a, b, cc, z, &c).unwrap(), x));
        } else if cc > b + 1.0 && b >= 1.0 {
            // Euler integral, smooth at both ends for these exponents.
            let f = |t: f64, s: f64| t.powf(b - 1.0) * s.powf(cc - b - 1.0) * (1.0 - z * t).powf(-a);
            let euler = tanh_sinh(f, 0.0, 1.0) / beta(b, cc - b).unwrap();
            worst = worst.max(rel(euler, x));
        }
        let zs = -rng.random_range(1e-6..0.5f64);
        let d = gauss_2f1_series(a, b, cc, zs, &c).unwrap();
        worst = worst.max(rel(gauss_2f1_pfaff(a, b, cc, zs, &c).unwrap(), d));
    }
    outcome(worst < 1e-9, format!("max relative error {worst:.2e} (tolerance 1e-9)"))
}

fn c2_queue_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for (i, &z) in [0.1, 0.2, 0.3].iter().enumerate() {
        for (j, &mu) in [0.4, 0.6, 0.9].iter().enumerate() {
            let s = QueueSettings { arrival_rate: z, slots: 1_000_000, warmup: 10_000, queue_limit: 1_000_000 };
            let mut rng = stream(202, i as u64, j as u64);
            let st = simulate_bernoulli_queue(&s, mu, &mut rng);
            worst = worst.max(rel(st.mean_peak_age().unwrap(), queue_peak_age(z, mu).unwrap()));
        }
    }
    outcome(worst < 0.01, format!("max relative gap {:.3}% over 9 pairs (tolerance 1%)", 100.0 * worst))
}

fn c3_distance_law() -> Outcome {
    let density = REFERENCE_DENSITY;
    let radius = 1500.0;
    let mut details = Vec::new();
    let mut pass = true;
    for (k, &q) in [0.2, 0.5, 1.0].iter().enumerate() {
        let (_, pol) = single_file(q);
        let dists: Vec<f64> = (0..10_000u64)
            .filter_map(|r| {
                let mut rng = stream(303, r, k as u64);
                SpatialRealization::sample(&pol, density, radius, &mut rng).serving_distance(0)
            })
            .collect();
        let cdf = |x: f64| 1.0 - (-std::f64::consts::PI * density * q * x * x).exp();
        let (d, p) = ks_test(&dists, cdf);
        pass &= p > 0.01 && dists.len() == 10_000;
        details.push(format!("q={q}: D={d:.4} p={p:.3}"));
    }
    outcome(pass, details.join(", "))
}

fn c4_stp_arbitration() -> Outcome {
    // (beta, alpha, theta dB, q)
    let configs = [
        (0.5, 4.5, 5.0, 1.0),
        (0.5, 4.5, 0.0, 0.3),
        (0.5, 3.5, -5.0, 1.0),
        (0.5, 3.5, 5.0, 0.3),
        (1.0, 4.5, 0.0, 1.0),
        (1.0, 3.5, 5.0, 0.3),
        (1.0, 4.5, -5.0, 0.3),
        (0.5, 4.5, -5.0, 0.3),
        (1.0, 3.5, 0.0, 1.0),
        (0.5, 3.5, 0.0, 1.0),
    ];
    let c = ctl();
    let (mut adopted_ok, mut rejected_fails) = (0, 0);
    let mut worst = 0.0f64;
    for (i, &(b, alpha, tdb, q)) in configs.iter().enumerate() {
        let p = phy(alpha, b, tdb);
        let pol = if q == 1.0 {
            single_file(1.0).1
        } else {
            make_policy(vec![0.3; 10], 3).unwrap()
        };
        // A larger disc for the slower path-loss decay keeps the ignored far
        // interference well below the tolerance.
        let radius = if alpha < 4.0 { 6000.0 } else { 2500.0 };
        let cfg = SimConfig { region_radius: radius, num_realizations: 20_000, rng_seed: 404 + i as u64, ..SimConfig::default() };
        let mc = estimate_stp(&pol, &p, &cfg, 0, 8).unwrap();
        let adopted = mean_stp(q, &p, &c).unwrap();
        let rejected = mean_stp_with_argument(q, &p, LaplaceArgument::MutingScaled, &c).unwrap();
        if mc.contains(adopted, 0.02 * adopted) {
            adopted_ok += 1;
        }
        if b < 1.0 && !mc.contains(rejected, 0.02 * rejected) {
            rejected_fails += 1;
        }
        worst = worst.max(((adopted - mc.mean).abs() - mc.half_width).max(0.0) / adopted);
    }
    outcome(
        adopted_ok == configs.len() && rejected_fails >= 1,
        format!(
            "argument -theta inside CI+2% on {adopted_ok}/10 (worst excess {:.2}%); argument -(1-beta)theta rejected on {rejected_fails} beta<1 configs",
            100.0 * worst
        ),
    )
}

fn c5_paoi_arbitration() -> Outcome {
    let cat = Catalog::reference(30).unwrap();
    let pol = uc_policy(&cat);
    let c = ctl();
    let mut passed = 0;
    let mut parts = Vec::new();
    for (i, &z) in [0.02, 0.05].iter().enumerate() {
        for (j, &tdb) in [-3.0, 0.0, 3.0].iter().enumerate() {
            let p = phy(4.5, 0.5, tdb);
            let t = TrafficParams::new(z).unwrap();
            let a = paoi_theorem1(&pol, &cat, &p, &t, &c).unwrap().weighted_paoi;
            let cfg = SimConfig {
                num_realizations: 400,
                track_files: TrackFiles::List(vec![0]),
                rng_seed: 500 + (3 * i + j) as u64,
                ..SimConfig::default()
            };
            let s = estimate(&pol, &cat, &p, &t, &cfg).unwrap();
            let e = s.per_file_peak_age[0].unwrap();
            let ok = a.is_finite() && e.contains(a, 0.05 * e.mean);
            passed += ok as usize;
            parts.push(format!(
                "zeta={z} theta={tdb}dB: theory {} sim {:.2}+-{:.2}",
                if a.is_finite() { format!("{a:.2}") } else { "inf".into() },
                e.mean,
                e.half_width
            ));
        }
    }
    outcome(passed == 6, format!("{passed}/6 within 5% + CI; {}", parts.join("; ")))
}

fn c6_corollary_regime() -> Outcome {
    let c = ctl();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut accepted, mut within, mut diverged, mut tries) = (0, 0, 0, 0);
    let mut worst_finite = 0.0f64;
    while accepted < 50 && tries < 100_000 {
        tries += 1;
        let alpha = rng.random_range(3.0..5.0);
        let b = rng.random_range(0.3..1.0);
        let tdb = rng.random_range(-10.0..5.0);
        let z = rng.random_range(0.001..0.05);
        let q = rng.random_range(0.05..1.0);
        let p = phy(alpha, b, tdb);
        let t = TrafficParams::new(z).unwrap();
        if mean_stp(q, &p, &c).unwrap() < 20.0 * z {
            continue;
        }
        // Only configurations where the full series gives a finite value.
        let Ok(coef) = Theorem1Coefficients::new(&p, &t, &c) else { continue };
        let thm = match coef.per_file(q) {
            Ok(v) if v.is_finite() => v,
            _ => continue,
        };
        let cor = 1.0 / z + CorollaryCoefficients::new(&p, &t, &c).unwrap().excess(q);
        accepted += 1;
        if !cor.is_finite() {
            diverged += 1;
            continue;
        }
        let gap = rel(cor, thm);
        worst_finite = worst_finite.max(gap);
        within += (gap < 0.01) as usize;
    }
    outcome(
        accepted == 50 && within == 50,
        format!(
            "{within}/{accepted} within 1%; {diverged} infinite under the two-term form (second denominator <= 0); \
             worst finite gap {:.2}%",
            100.0 * worst_finite
        ),
    )
}

fn c7_stability_thresholds() -> Outcome {
    let c = ctl();
    let configs = [(4.5, 0.5, 0.0, 0.05), (4.5, 0.5, -3.0, 0.02), (4.0, 0.7, -5.0, 0.01), (3.5, 0.9, -2.0, 0.03), (5.0, 0.6, -1.0, 0.08)];
    let (mut worst_q, mut worst_t) = (0.0f64, 0.0f64);
    for &(alpha, b, tdb, z) in &configs {
        let p = phy(alpha, b, tdb);
        let t = TrafficParams::new(z).unwrap();
        let th = stability_thresholds(&p, &t, 1, true, &c).unwrap();
        let finite_q = |q: f64| {
            let cat = Catalog::new(vec![0.5, 0.5], 1).unwrap();
            let pol = make_policy(vec![q, 1.0 - q], 1).unwrap();
            paoi_theorem1(&pol, &cat, &p, &t, &c).unwrap().per_file_feasible[0]
        };
        let (mut lo, mut hi) = (1e-9, 1.0);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if finite_q(m) { hi = m } else { lo = m }
        }
        worst_q = worst_q.max((0.5 * (lo + hi) - th.critical_q_value()).abs());

        let full = Catalog::new(vec![1.0], 1).unwrap();
        let pol = make_policy(vec![1.0], 1).unwrap();
        let finite_t = |theta: f64| {
            paoi_theorem1(&pol, &full, &p.with_sinr_threshold(theta).unwrap(), &t, &c)
                .map(|r| r.per_file_feasible[0])
                .unwrap_or(false)
        };
        let (mut lo, mut hi) = (1e-3f64, 1e3f64);
        for _ in 0..100 {
            let m = (lo * hi).sqrt();
            if finite_t(m) { lo = m } else { hi = m }
        }
        let theta_c = critical_theta(&p, &t, &c).unwrap();
        worst_t = worst_t.max((0.5 * (lo + hi) - theta_c).abs());
        assert_eq!(th.critical_theta, Some(theta_c));
    }
    outcome(
        worst_q < 1e-3 && worst_t < 1e-3,
        format!("max |q flip - q^c| = {worst_q:.1e}, max |theta flip - theta_c| = {worst_t:.1e} (tolerance 1e-3)"),
    )
}

/// Random instance for which the optimiser is feasible.
fn random_instance(rng: &mut ChaCha8Rng) -> (Catalog, PhyParams, TrafficParams) {
    loop {
        let f = rng.random_range(5..=40usize);
        let skew = rng.random_range(0.0..1.5);
        let p = phy(rng.random_range(3.0..5.0), rng.random_range(0.3..1.0), rng.random_range(-10.0..0.0));
        let t = TrafficParams::new(rng.random_range(0.005..0.05)).unwrap();
        let Ok(th) = stability_thresholds(&p, &t, 1, false, &ctl()) else { continue };
        let qc = th.critical_q_value();
        let lo = (f as f64 * qc).floor() as usize + 1;
        if qc >= 1.0 || lo >= f {
            continue;
        }
        let cap = rng.random_range(lo..f);
        return (Catalog::zipf(f, skew, cap).unwrap(), p, t);
    }
}

fn c8_optimizer_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let (mut worst_gap, mut worst_kkt) = (0.0f64, 0.0f64);
    let (mut printed_missed, mut printed_failed) = (0, 0);
    for _ in 0..20 {
        let (cat, p, t) = random_instance(&mut rng);
        let fast = optimal_caching(&cat, &p, &t).unwrap();
        let slow = numeric_optimal_caching(&cat, &p, &t, Objective::Theorem1).unwrap();
        let gap = fast.policy.probs().iter().zip(slow.policy.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_gap = worst_gap.max(gap);
        if let Ok(pr) = optimal_caching_with_form(&cat, &p, &t, LemmaForm::Printed) {
            let g = pr.policy.probs().iter().zip(slow.policy.probs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            printed_missed += (g > 1e-4) as usize;
        } else {
            printed_failed += 1;
        }
        // Equal marginals across interior coordinates (central differences).
        let coef = Theorem1Coefficients::new(&p, &t, &ctl()).unwrap();
        let q = fast.policy.probs();
        let marg: Vec<f64> = q
            .iter()
            .zip(cat.popularity())
            .filter(|(&qi, _)| qi < 1.0 - 1e-9)
            .map(|(&qi, &pi)| {
                let h = 1e-6 * qi;
                pi * (coef.excess(qi + h).unwrap() - coef.excess(qi - h).unwrap()) / (2.0 * h)
            })
            .collect();
        if let (Some(mx), Some(mn)) = (
            marg.iter().copied().reduce(f64::max),
            marg.iter().copied().reduce(f64::min),
        ) {
            worst_kkt = worst_kkt.max((mx - mn).abs() / mn.abs());
        }
    }
    outcome(
        worst_gap < 1e-4 && worst_kkt < 1e-3,
        format!(
            "closed form vs projected gradient max gap {worst_gap:.1e}, KKT marginal spread {worst_kkt:.1e}; printed coefficients miss the optimum on {printed_missed}/20 and find no multiplier on {printed_failed}/20"
        ),
    )
}

fn c9_model_properties() -> Outcome {
    let c = ctl();
    let mut fails = Vec::new();
    // (a) density invariance
    let cat = Catalog::reference(30).unwrap();
    let pol = uc_policy(&cat);
    let t = TrafficParams::new(0.02).unwrap();
    let p1 = phy(4.5, 0.5, -3.0);
    let p2 = p1.with_bs_density(2.0 * REFERENCE_DENSITY).unwrap();
    let a1 = paoi_theorem1(&pol, &cat, &p1, &t, &c).unwrap();
    let a2 = paoi_theorem1(&pol, &cat, &p2, &t, &c).unwrap();
    if a1.weighted_paoi.to_bits() != a2.weighted_paoi.to_bits() {
        fails.push("analytic density invariance".to_string());
    }
    let cfg = SimConfig { num_realizations: 400, track_files: TrackFiles::List(vec![0]), rng_seed: 909, ..SimConfig::default() };
    let cfg2 = SimConfig { region_radius: 2500.0 / 2f64.sqrt(), rng_seed: 910, ..cfg.clone() };
    let s1 = estimate(&pol, &cat, &p1, &t, &cfg).unwrap().per_file_peak_age[0].unwrap();
    let s2 = estimate(&pol, &cat, &p2, &t, &cfg2).unwrap().per_file_peak_age[0].unwrap();
    let sigma = s1.std_error().hypot(s2.std_error());
    let shift = (s1.mean - s2.mean).abs() / sigma;
    if shift >= 2.0 {
        fails.push(format!("simulated density shift {shift:.2} sigma"));
    }
    // (b) non-decreasing in theta
    for cap in [25, 30] {
        let cat = Catalog::reference(cap).unwrap();
        let pol = uc_policy(&cat);
        for z in [0.02, 0.05] {
            let t = TrafficParams::new(z).unwrap();
            let vals: Vec<f64> = (0..=26)
                .map(|k| -10.0 + 0.5 * k as f64)
                .map(|tdb| paoi_theorem1(&pol, &cat, &phy(4.5, 0.5, tdb), &t, &c).unwrap().weighted_paoi)
                .collect();
            if vals.windows(2).any(|w| !(w[1] >= w[0])) {
                fails.push(format!("theta monotonicity C={cap} zeta={z}"));
            }
        }
    }
    // (c) non-increasing in q above q^c
    for (tdb, z) in [(-3.0, 0.02), (0.0, 0.05), (-6.0, 0.01)] {
        let p = phy(4.5, 0.5, tdb);
        let t = TrafficParams::new(z).unwrap();
        let coef = Theorem1Coefficients::new(&p, &t, &c).unwrap();
        let qc = stability_thresholds(&p, &t, 1, false, &c).unwrap().critical_q_value();
        let vals: Vec<f64> = (1..=100).map(|k| qc + (1.0 - qc) * k as f64 / 100.0).map(|q| coef.per_file(q).unwrap()).collect();
        if vals.windows(2).any(|w| w[1] > w[0]) {
            fails.push(format!("q monotonicity theta={tdb} zeta={z}"));
        }
    }
    // (d) critical theta decreases with zeta
    let p = phy(4.5, 0.5, 0.0);
    let th: Vec<f64> = [0.005, 0.01, 0.02, 0.05, 0.1]
        .iter()
        .map(|&z| critical_theta(&p, &TrafficParams::new(z).unwrap(), &c).unwrap())
        .collect();
    if th.windows(2).any(|w| !(w[1] < w[0])) {
        fails.push("critical theta ordering".into());
    }
    // (e) optimal <= UC, larger gap at small C; (f) MPC cached-file PAoI non-decreasing in C
    let p = phy(4.5, 0.5, -3.0);
    let t = TrafficParams::new(0.02).unwrap();
    let mut gaps = Vec::new();
    let mut mpc_cached = Vec::new();
    for cap in 1..=30 {
        let cat = Catalog::reference(cap).unwrap();
        let coef = Theorem1Coefficients::new(&p, &t, &c).unwrap();
        let uc = coef.weighted(cat.popularity(), uc_policy(&cat).probs()).unwrap();
        if let Ok(opt) = optimal_caching(&cat, &p, &t) {
            if opt.objective > uc + 1e-9 {
                fails.push(format!("optimal above UC at C={cap}"));
            }
            gaps.push(uc - opt.objective);
        }
        let mpc = mpc_policy(&cat);
        mpc_cached.push(paoi_theorem1(&mpc, &cat, &p, &t, &c).unwrap().weighted_paoi_cached);
    }
    if gaps.len() < 2 || !(gaps[0] > *gaps.last().unwrap()) {
        fails.push("optimal-UC gap not larger at small C".into());
    }
    if mpc_cached.windows(2).any(|w| w[1] < w[0] - 1e-12) {
        fails.push("MPC cached-file PAoI decreases with C".into());
    }
    let detail = if fails.is_empty() {
        format!("(a)-(f) hold; simulated density shift {shift:.2} sigma")
    } else {
        fails.join("; ")
    };
    outcome(fails.is_empty(), detail)
}

fn c10_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_paoi");
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(
        &cfg,
        "[phy]\nsinr_threshold_db = [-6.0, -3.0, 0.0]\n[traffic]\narrival_rate = [0.02, 0.05]\n[catalog]\ncache_size = 30\n[sim]\nnum_realizations = 40\nslots_per_realization = 4000\nwarmup_slots = 400\n",
    )
    .unwrap();
    let run = |args: &[&str], out: &str, threads: &str| -> Vec<u8> {
        let path = dir.path().join(out);
        let st = std::process::Command::new(exe)
            .args(args)
            .arg("--config")
            .arg(&cfg)
            .arg("--output")
            .arg(&path)
            .env("PAOI_THREADS", threads)
            .output()
            .unwrap();
        let mut bytes = std::fs::read(&path).unwrap_or_default();
        bytes.extend_from_slice(&st.stdout);
        bytes
    };
    let commands: [&[&str]; 4] = [
        &["sweep-theta", "--strategy", "uc"],
        &["sweep-cache", "--theta-db", "-3", "--zeta", "0.02", "--cache-size", "20:2:30"],
        &["optimize", "--theta-db", "-3", "--zeta", "0.02", "--cache-size", "25"],
        &["validate", "--strategy", "uc", "--seed", "17"],
    ];
    let mut same = 0;
    for (i, args) in commands.iter().enumerate() {
        let a = run(args, &format!("a{i}.csv"), "1");
        let b = run(args, &format!("b{i}.csv"), "4");
        let c2 = run(args, &format!("c{i}.csv"), "4");
        if !a.is_empty() && a == b && b == c2 {
            same += 1;
        }
    }
    outcome(same == commands.len(), format!("{same}/{} commands byte-identical across runs and thread counts", commands.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "special-function identities", c1_special_functions),
        (2, "queue oracle", c2_queue_oracle),
        (3, "serving-distance law", c3_distance_law),
        (4, "success-probability arbitration", c4_stp_arbitration),
        (5, "PAoI arbitration against simulation", c5_paoi_arbitration),
        (6, "two-term regime", c6_corollary_regime),
        (7, "stability thresholds", c7_stability_thresholds),
        (8, "optimizer equivalence", c8_optimizer_equivalence),
        (9, "model properties", c9_model_properties),
        (10, "determinism", c10_determinism),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t0 = Instant::now();
        let o = run();
        let secs = t0.elapsed().as_secs_f64();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{status}] {name} ({secs:.1}s): {}", o.detail);
        match (o.pass, KNOWN_RED.iter().find(|(k, _)| *k == id)) {
            (false, Some((_, why))) => println!("             known failure: {why}"),
            (false, None) => unexpected.push(id),
            (true, Some(_)) => println!("             note: listed as a known failure but passed"),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance failures: {unexpected:?}");
        std::process::exit(1);
    }
}
