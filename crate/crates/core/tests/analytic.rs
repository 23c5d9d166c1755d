mod common;

use common::*;
use paoi::analytic::{
    critical_theta, paoi_corollary1, paoi_theorem1, queue_peak_age, stability_thresholds, CorollaryCoefficients,
    Theorem1Coefficients,
};
use paoi::model::{make_policy, Catalog, TrafficParams, REFERENCE_DENSITY};
use paoi::optimize::uc_policy;
use paoi::specialfn::SeriesControl;

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

#[test]
fn density_and_power_leave_paoi_bitwise_unchanged() {
    let cat = Catalog::reference(25).unwrap();
    let pol = uc_policy(&cat);
    for (alpha, b, tdb, z) in [(4.5, 0.5, -3.0, 0.02), (3.5, 0.8, -6.0, 0.01), (4.0, 1.0, 0.0, 0.05)] {
        let p = phy(alpha, b, tdb);
        let t = TrafficParams::new(z).unwrap();
        let base = paoi_theorem1(&pol, &cat, &p, &t, &ctl()).unwrap();
        for scale in [0.1, 3.0, 1e4] {
            let dense = p.with_bs_density(scale * REFERENCE_DENSITY).unwrap();
            let loud = p.with_tx_power(scale * p.tx_power()).unwrap();
            for variant in [dense, loud] {
                let r = paoi_theorem1(&pol, &cat, &variant, &t, &ctl()).unwrap();
                assert_eq!(r.weighted_paoi.to_bits(), base.weighted_paoi.to_bits());
                assert_eq!(r.per_file_paoi, base.per_file_paoi);
            }
        }
    }
}

#[test]
fn weighted_paoi_never_decreases_with_threshold() {
    let cat = Catalog::reference(30).unwrap();
    let pol = uc_policy(&cat);
    for z in [0.01, 0.02, 0.05] {
        let t = TrafficParams::new(z).unwrap();
        let mut last = 0.0;
        for k in 0..=40 {
            let tdb = -12.0 + 0.4 * k as f64;
            let v = paoi_theorem1(&pol, &cat, &phy(4.5, 0.5, tdb), &t, &ctl()).unwrap().weighted_paoi;
            assert!(v >= last, "zeta {z}, theta {tdb} dB: {v} < {last}");
            last = v;
        }
    }
}

#[test]
fn per_file_paoi_falls_as_caching_probability_rises() {
    let p = phy(4.5, 0.5, -3.0);
    let t = TrafficParams::new(0.02).unwrap();
    let coef = Theorem1Coefficients::new(&p, &t, &ctl()).unwrap();
    let qc = stability_thresholds(&p, &t, 1, false, &ctl()).unwrap().critical_q_value();
    let mut last = f64::INFINITY;
    for k in 1..=50 {
        let q = qc + (1.0 - qc) * k as f64 / 50.0;
        let v = coef.per_file(q).unwrap();
        assert!(v <= last);
        last = v;
    }
    assert!(coef.per_file(0.999 * qc).unwrap().is_infinite());
}

#[test]
fn uncached_files_sit_at_the_arrival_baseline() {
    let cat = Catalog::zipf(4, 0.8, 2).unwrap();
    let pol = make_policy(vec![1.0, 1.0, 0.0, 0.0], 2).unwrap();
    let t = TrafficParams::new(0.02).unwrap();
    let r = paoi_theorem1(&pol, &cat, &phy(4.5, 0.5, -3.0), &t, &ctl()).unwrap();
    assert!(r.per_file_paoi[2].is_infinite());
    assert!(!r.per_file_feasible[3]);
    let excess = r.per_file_paoi[0] - 50.0;
    let cached_mass = cat.popularity()[0] + cat.popularity()[1];
    assert!(rel(r.weighted_paoi, 50.0 + cached_mass * excess) < 1e-12);
    assert!(rel(r.weighted_paoi_cached, r.per_file_paoi[0]) < 1e-12);
}

#[test]
fn two_term_form_tracks_series_at_low_threshold() {
    let cat = Catalog::reference(30).unwrap();
    let pol = uc_policy(&cat);
    let p = phy(4.5, 0.8, -10.0);
    let t = TrafficParams::new(0.005).unwrap();
    let a = paoi_theorem1(&pol, &cat, &p, &t, &ctl()).unwrap().weighted_paoi;
    let b = paoi_corollary1(&pol, &cat, &p, &t).unwrap().weighted_paoi;
    assert!(a.is_finite() && rel(a, b) < 0.01, "{a} vs {b}");
}

#[test]
fn two_term_floor_is_at_least_first_denominator_root() {
    let p = phy(4.5, 0.5, -3.0);
    let t = TrafficParams::new(0.02).unwrap();
    let cc = CorollaryCoefficients::new(&p, &t, &ctl()).unwrap();
    let q = cc.critical_q();
    let (d1, d2) = cc.denominators(q + 1e-9);
    assert!(d1 > 0.0 && d2 > 0.0);
    assert!(cc.excess(q - 1e-6).is_infinite());
}

#[test]
fn critical_theta_orders_with_arrival_rate_and_sits_at_boundary() {
    let p = phy(4.5, 0.5, 0.0);
    let full = Catalog::new(vec![1.0], 1).unwrap();
    let pol = make_policy(vec![1.0], 1).unwrap();
    let mut last = f64::INFINITY;
    for z in [0.005, 0.01, 0.02, 0.05, 0.1] {
        let t = TrafficParams::new(z).unwrap();
        let th = critical_theta(&p, &t, &ctl()).unwrap();
        assert!(th < last);
        last = th;
        let below = p.with_sinr_threshold(th * 0.999).unwrap();
        let above = p.with_sinr_threshold(th * 1.001).unwrap();
        assert!(paoi_theorem1(&pol, &full, &below, &t, &ctl()).unwrap().per_file_feasible[0]);
        let r = paoi_theorem1(&pol, &full, &above, &t, &ctl());
        assert!(r.map(|r| !r.per_file_feasible[0]).unwrap_or(true));
    }
}

#[test]
fn queue_peak_age_limits() {
    assert_eq!(queue_peak_age(0.02, 1.0).unwrap(), 1.0 / 0.02 + 1.0);
    assert!(queue_peak_age(0.3, 0.3).unwrap().is_infinite());
    assert!(queue_peak_age(0.0, 0.5).is_err());
    assert!(queue_peak_age(0.2, 1.5).is_err());
    // Decreasing in the service probability.
    assert!(queue_peak_age(0.1, 0.4).unwrap() > queue_peak_age(0.1, 0.6).unwrap());
}
