//! Special-function kernel: log-gamma, Beta and the Gauss hypergeometric
//! function on the real, non-positive argument range.
//!
//! Only the domains reached by the interference integrals are supported:
//! `gauss_2f1` accepts `z <= 0` (possibly `|z| >> 1`), and Beta arguments
//! are strictly positive.

use crate::error::{Error, Result};

/// Truncation control for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-3) {
            return Err(Error::domain(format!(
                "series rel_tol must lie in (0, 1e-3), got {rel_tol}"
            )));
        }
        if max_terms < 50 {
            return Err(Error::domain(format!(
                "series max_terms must be at least 50, got {max_terms}"
            )));
        }
        Ok(Self { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 500,
        }
    }
}

const LANCZOS_G: f64 = 7.0;
// Published coefficients, kept digit for digit.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Lanczos approximation (g = 7, nine coefficients) with reflection below 1/2.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        // Gamma(x) Gamma(1 - x) = pi / sin(pi x), and sin(pi x) > 0 on (0, 1/2).
        return (PI / (PI * x).sin()).ln() - log_gamma_unchecked(1.0 - x);
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Beta function `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)`, evaluated in
/// log space so large arguments do not overflow.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "beta requires positive arguments, got ({a}, {b})"
        )));
    }
    Ok(log_beta_unchecked(a, b).exp())
}

pub(crate) fn log_beta_unchecked(a: f64, b: f64) -> f64 {
    log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(a + b)
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real `z <= 0`.
///
/// Routing:
/// * terminating (polynomial) cases and small `|z|` with moderate parameters
///   use the defining series directly;
/// * large `|z|` uses the `1/z` connection formula when `a - b` is safely away
///   from an integer;
/// * everything else goes through the Pfaff transformation
///   `2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))`, whose argument lies
///   in `[0, 1)` for every `z <= 0`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, control: &SeriesControl) -> Result<f64> {
    check_params(a, b, c)?;
    if !(z <= 0.0) || !z.is_finite() {
        return Err(Error::domain(format!(
            "gauss_2f1 is implemented for finite z <= 0, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    // 2F1 is symmetric in (a, b); fixing the order makes the evaluation route
    // (and therefore the rounding) identical for both orderings.
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if is_non_positive_integer(a) || is_non_positive_integer(b) {
        return series(a, b, c, z, control);
    }
    let moderate = a.abs().max(b.abs()).max(c.abs()) <= 10.0;
    let gap = b - a;
    if z > -0.5 && moderate {
        series(a, b, c, z, control)
    } else if z < -2.0 && (gap - gap.round()).abs() > 0.05 && moderate {
        inverse_argument(a, b, c, z, control)
    } else {
        pfaff(a, b, c, z, control, true)
    }
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `ln|Gamma(x)|` and the sign of `Gamma(x)` for real non-integer or positive `x`.
fn ln_gamma_signed(x: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    if x > 0.0 {
        return (log_gamma_unchecked(x), 1.0);
    }
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    let s = (PI * x).sin();
    ((PI / s.abs()).ln() - log_gamma_unchecked(1.0 - x), s.signum())
}

/// Connection formula to `1/z` (requires `a - b` not an integer):
///
/// `2F1(a,b;c;z) = G(c)G(b-a)/(G(b)G(c-a)) (-z)^(-a) 2F1(a, a-c+1; a-b+1; 1/z)
///              + G(c)G(a-b)/(G(a)G(c-b)) (-z)^(-b) 2F1(b, b-c+1; b-a+1; 1/z)`.
fn inverse_argument(a: f64, b: f64, c: f64, z: f64, control: &SeriesControl) -> Result<f64> {
    let u = 1.0 / z;
    let ln_mz = (-z).ln();
    let part = |p: f64, q: f64| -> Result<f64> {
        // Coefficient G(c) G(q - p) / (G(q) G(c - p)); a reciprocal gamma at a
        // non-positive integer makes the whole part vanish.
        if is_non_positive_integer(q) || is_non_positive_integer(c - p) {
            return Ok(0.0);
        }
        let (l1, s1) = ln_gamma_signed(c);
        let (l2, s2) = ln_gamma_signed(q - p);
        let (l3, s3) = ln_gamma_signed(q);
        let (l4, s4) = ln_gamma_signed(c - p);
        let coef = s1 * s2 * s3 * s4 * (l1 + l2 - l3 - l4 - p * ln_mz).exp();
        let f = series(p, p - c + 1.0, p - q + 1.0, u, control)?;
        Ok(coef * f)
    };
    Ok(part(a, b)? + part(b, a)?)
}

/// The defining power series, valid for `|z| < 1`.
pub fn gauss_2f1_series(a: f64, b: f64, c: f64, z: f64, control: &SeriesControl) -> Result<f64> {
    check_params(a, b, c)?;
    if !(z.abs() < 1.0) {
        return Err(Error::domain(format!(
            "direct 2F1 series requires |z| < 1, got {z}"
        )));
    }
    series(a, b, c, z, control)
}

/// Terms decay like `n^(a+b-c-1) |z|^n`, so close to the unit circle the
/// router raises the term budget to what that decay needs. The explicit
/// entry points keep the caller's cap.
fn stretched(control: &SeriesControl, a: f64, b: f64, c: f64, z: f64) -> SeriesControl {
    const MAX_BUDGET: f64 = 1e6;
    let needed = (40.0 + 10.0 * (a + b - c).max(0.0)) / -z.abs().ln();
    SeriesControl {
        rel_tol: control.rel_tol,
        max_terms: control.max_terms.max(needed.ceil().min(MAX_BUDGET) as usize),
    }
}

/// Evaluation through a Pfaff transformation, valid for `z <= 0`.
pub fn gauss_2f1_pfaff(a: f64, b: f64, c: f64, z: f64, control: &SeriesControl) -> Result<f64> {
    check_params(a, b, c)?;
    if !(z <= 0.0) || !z.is_finite() {
        return Err(Error::domain(format!(
            "Pfaff-transformed 2F1 requires finite z <= 0, got {z}"
        )));
    }
    pfaff(a, b, c, z, control, false)
}

fn check_params(a: f64, b: f64, c: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::domain("gauss_2f1 parameters must be finite"));
    }
    if c <= 0.0 && c == c.round() {
        return Err(Error::domain(format!(
            "gauss_2f1 undefined for non-positive integer c = {c}"
        )));
    }
    Ok(())
}

fn pfaff(a: f64, b: f64, c: f64, z: f64, control: &SeriesControl, stretch: bool) -> Result<f64> {
    let w = z / (z - 1.0);
    let log_one_minus_z = (-z).ln_1p();
    // Two Pfaff forms exist (transforming on a or on b). Prefer the one whose
    // series has non-negative terms, then the one whose terms decay fastest.
    let candidates = [(a, c - b, a), (c - a, b, b)];
    let score = |&(p, q, _): &(f64, f64, f64)| {
        let alternating = p < 0.0 || q < 0.0;
        (alternating, p + q - c)
    };
    let &(p, q, exponent) = candidates
        .iter()
        .min_by(|x, y| score(x).partial_cmp(&score(y)).unwrap())
        .unwrap();
    // For large |z| the transformed argument approaches 1.
    let budget = if stretch { stretched(control, p, q, c, w) } else { *control };
    let s = series(p, q, c, w, &budget)?;
    Ok((-exponent * log_one_minus_z).exp() * s)
}

fn series(a: f64, b: f64, c: f64, z: f64, control: &SeriesControl) -> Result<f64> {
    let mut sum = NeumaierSum::new(1.0);
    let mut term = 1.0_f64;
    for n in 0..control.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        if term == 0.0 {
            return Ok(sum.value());
        }
        sum.add(term);
        // Once successive ratios are below one they stay bounded by
        // max(|ratio|, |z|), which gives a geometric bound on the tail.
        let r = ratio.abs().max(z.abs());
        if r < 1.0 && ratio.abs() < 1.0 {
            let tail = term.abs() * r / (1.0 - r);
            if tail <= 0.1 * control.rel_tol * sum.value().abs() {
                return Ok(sum.value());
            }
        }
        if !term.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence {
        terms: control.max_terms,
        partial_sum: sum.value(),
    })
}

/// Compensated summation; the hypergeometric series alternate for `z < 0`.
struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    fn new(init: f64) -> Self {
        Self {
            sum: init,
            comp: 0.0,
        }
    }

    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
