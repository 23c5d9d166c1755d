//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use paoi::model::{db_to_linear, PhyParams, REFERENCE_DENSITY};

/// Double-exponential (tanh-sinh) quadrature on `[a, b]`.
///
/// The integrand receives `(x - a, b - x)`, both computed without cancellation,
/// so endpoint singularities such as `t^(-delta)` or `(1 - t)^(-1/2)` keep full
/// relative accuracy near the ends.
pub fn tanh_sinh(f: impl Fn(f64, f64) -> f64, a: f64, b: f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let h = 1.0 / 128.0;
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    let kmax = (4.5 / h) as i64;
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let from_a = (b - a) / (1.0 + (-2.0 * u).exp());
        let to_b = (b - a) / (1.0 + (2.0 * u).exp());
        if from_a <= 0.0 || to_b <= 0.0 {
            continue;
        }
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2) * half;
        if w == 0.0 {
            continue;
        }
        sum += w * f(from_a, to_b);
    }
    sum * h
}

/// `2F1(m, m - delta; m - delta + 1; z) = (m - delta) int_0^1 t^(m-delta-1) (1 - z t)^(-m) dt`.
pub fn w_by_quadrature(m: f64, delta: f64, z: f64) -> f64 {
    let b = m - delta;
    b * tanh_sinh(|t, _| t.powf(b - 1.0) * (1.0 - z * t).powf(-m), 0.0, 1.0)
}

/// `B(a, b) = int_0^1 t^(a-1) (1 - t)^(b-1) dt`.
pub fn beta_by_quadrature(a: f64, b: f64) -> f64 {
    tanh_sinh(|t, s| t.powf(a - 1.0) * s.powf(b - 1.0), 0.0, 1.0)
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Reference physical layer with the given activity, threshold (dB) and exponent.
pub fn phy(alpha: f64, beta: f64, theta_db: f64) -> PhyParams {
    PhyParams::from_db_units(23.0, REFERENCE_DENSITY, alpha, beta, theta_db).unwrap()
}

pub fn phy_linear(alpha: f64, beta: f64, theta: f64) -> PhyParams {
    PhyParams::new(0.2, REFERENCE_DENSITY, alpha, beta, theta).unwrap()
}

pub fn lin(db: f64) -> f64 {
    db_to_linear(db)
}
