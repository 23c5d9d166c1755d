use super::stp::{v_term, w_term};
use crate::error::{Error, Result};
use crate::model::{Catalog, CachingPolicy, PhyParams, TrafficParams};
use crate::specialfn::{gauss_2f1, log_beta_unchecked, SeriesControl};

/// Per-file and popularity-weighted peak age (slots).
#[derive(Debug, Clone, PartialEq)]
pub struct PaoiReport {
    /// `+inf` for files that are never delivered or whose queue is unstable.
    pub per_file_paoi: Vec<f64>,
    /// `1/zeta + sum_f p_f (PAoI_f - 1/zeta)`, where uncached files add nothing
    /// beyond the `1/zeta` baseline.
    pub weighted_paoi: f64,
    /// Same excess term, averaged over cached files only.
    pub weighted_paoi_cached: f64,
    pub per_file_feasible: Vec<bool>,
    pub truncation_terms_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStatus {
    Converged,
    /// Terms stopped decaying; the sums are unbounded.
    Diverged,
    /// Hit the term cap before reaching the tolerance; sums are partial.
    Truncated,
}

/// The two q-independent sums of the general PAoI series:
///
/// `G = sum_n zeta^n beta^(-n-1) delta sum_m C(n+1,m) (beta theta)^m W_m / (m - delta)`
/// `E = sum_n zeta^n beta^(-n-1) delta sum_m C(n+1,m) beta^m theta^delta V_m`
///
/// so that the per-file denominator is `q - q G - (1 - q) E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceSeries {
    pub g: f64,
    pub e: f64,
    pub terms: usize,
    pub status: SeriesStatus,
}

/// Largest log-magnitude a series term may reach before it is declared divergent.
const LOG_TERM_CEILING: f64 = 690.0;

pub fn interference_series(
    phy: &PhyParams,
    traffic: &TrafficParams,
    control: &SeriesControl,
) -> Result<InterferenceSeries> {
    let d = phy.delta();
    let b = phy.active_prob();
    let theta = phy.sinr_threshold();
    let zeta = traffic.arrival_rate();

    let ln_zeta = zeta.ln();
    let ln_beta = b.ln();
    let ln_beta_theta = (b * theta).ln();
    let ln_theta_delta = d * theta.ln();
    let ln_delta = d.ln();

    // ln(W_m / (m - delta)) and ln(V_m), grown as the outer index grows.
    let mut ln_w: Vec<f64> = Vec::new();
    let mut ln_v: Vec<f64> = Vec::new();

    let (mut g, mut e) = (0.0f64, 0.0f64);
    let mut prev_term = f64::NAN;
    let mut rising = 0usize;

    for n in 0..control.max_terms() {
        let big_n = n + 1;
        let m_new = big_n as u32;
        let w = w_term(m_new, phy, control)?;
        ln_w.push(w.ln() - (f64::from(m_new) - d).ln());
        ln_v.push(log_beta_unchecked(d, f64::from(m_new) - d));

        // log-sum-exp over m of ln C(N,m) + m ln(beta theta) + ln(W_m/(m-delta)), and
        // the matching E sum.
        let mut ln_binom = 0.0f64;
        let mut g_parts = Vec::with_capacity(big_n);
        let mut e_parts = Vec::with_capacity(big_n);
        for m in 1..=big_n {
            ln_binom += ((big_n - m + 1) as f64).ln() - (m as f64).ln();
            let mf = m as f64;
            g_parts.push(ln_binom + mf * ln_beta_theta + ln_w[m - 1]);
            e_parts.push(ln_binom + mf * ln_beta + ln_theta_delta + ln_v[m - 1]);
        }
        let prefix = n as f64 * ln_zeta - big_n as f64 * ln_beta + ln_delta;
        let ln_g_term = prefix + log_sum_exp(&g_parts);
        let ln_e_term = prefix + log_sum_exp(&e_parts);

        if ln_g_term.max(ln_e_term) > LOG_TERM_CEILING {
            return Ok(InterferenceSeries {
                g: f64::INFINITY,
                e: f64::INFINITY,
                terms: big_n,
                status: SeriesStatus::Diverged,
            });
        }
        let (gt, et) = (ln_g_term.exp(), ln_e_term.exp());
        g += gt;
        e += et;
        let term = gt + et;

        if n > 0 {
            let ratio = term / prev_term;
            if ratio >= 1.0 {
                rising += 1;
                // Terms grow like r^n with r >= 1 once the binomial transient has passed.
                if rising >= 8 && n >= 16 {
                    return Ok(InterferenceSeries {
                        g: f64::INFINITY,
                        e: f64::INFINITY,
                        terms: big_n,
                        status: SeriesStatus::Diverged,
                    });
                }
            } else {
                rising = 0;
                let tail = term * ratio / (1.0 - ratio);
                if term.max(tail) <= control.rel_tol() * (g + e) {
                    return Ok(InterferenceSeries {
                        g,
                        e,
                        terms: big_n,
                        status: SeriesStatus::Converged,
                    });
                }
            }
        }
        prev_term = term;
    }
    Ok(InterferenceSeries {
        g,
        e,
        terms: control.max_terms(),
        status: SeriesStatus::Truncated,
    })
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Sign placed in front of the interference sums in the per-file denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorSign {
    /// `q - q G - (1 - q) E`: the convergent radial integral.
    Subtract,
    /// `q + q G + (1 - q) E`: the exponent signs taken literally. Only useful as a
    /// negative control for the validation harness.
    PrintedPlus,
}

/// Evaluator for the general-form PAoI once the q-independent sums are known.
#[derive(Debug, Clone, Copy)]
pub struct Theorem1Coefficients {
    series: InterferenceSeries,
    arrival_rate: f64,
    sign: DenominatorSign,
}

impl Theorem1Coefficients {
    pub fn new(phy: &PhyParams, traffic: &TrafficParams, control: &SeriesControl) -> Result<Self> {
        Self::with_sign(phy, traffic, control, DenominatorSign::Subtract)
    }

    pub fn with_sign(
        phy: &PhyParams,
        traffic: &TrafficParams,
        control: &SeriesControl,
        sign: DenominatorSign,
    ) -> Result<Self> {
        Ok(Self {
            series: interference_series(phy, traffic, control)?,
            arrival_rate: traffic.arrival_rate(),
            sign,
        })
    }

    pub fn series(&self) -> &InterferenceSeries {
        &self.series
    }

    /// Per-file denominator; `-inf` when the sums diverge.
    pub fn denominator(&self, q: f64) -> f64 {
        let s = &self.series;
        if s.status == SeriesStatus::Diverged {
            return match self.sign {
                DenominatorSign::Subtract => f64::NEG_INFINITY,
                DenominatorSign::PrintedPlus => f64::INFINITY,
            };
        }
        match self.sign {
            DenominatorSign::Subtract => q - q * s.g - (1.0 - q) * s.e,
            DenominatorSign::PrintedPlus => q + q * s.g + (1.0 - q) * s.e,
        }
    }

    /// Excess of the per-file PAoI over `1/zeta`: `(1 - zeta) q / denominator`,
    /// `+inf` if the denominator is not positive.
    pub fn excess(&self, q: f64) -> Result<f64> {
        if q <= 0.0 {
            return Ok(f64::INFINITY);
        }
        let den = self.denominator(q);
        if self.series.status == SeriesStatus::Truncated && den > 0.0 {
            // Remaining terms are positive and could still flip the sign.
            return Err(Error::NonConvergence {
                terms: self.series.terms,
                partial_sum: self.series.g + self.series.e,
            });
        }
        if den > 0.0 {
            Ok((1.0 - self.arrival_rate) * q / den)
        } else {
            Ok(f64::INFINITY)
        }
    }

    pub fn per_file(&self, q: f64) -> Result<f64> {
        Ok(1.0 / self.arrival_rate + self.excess(q)?)
    }

    /// Popularity-weighted PAoI under the literal convention (uncached files add
    /// only the `1/zeta` baseline).
    pub fn weighted(&self, popularity: &[f64], probs: &[f64]) -> Result<f64> {
        let mut total = 1.0 / self.arrival_rate;
        for (&p, &q) in popularity.iter().zip(probs) {
            if q > 0.0 {
                total += p * self.excess(q)?;
            }
        }
        Ok(total)
    }

    pub fn report(&self, catalog: &Catalog, policy: &CachingPolicy) -> Result<PaoiReport> {
        let excess = policy
            .probs()
            .iter()
            .map(|&q| self.excess(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(assemble_report(
            catalog,
            policy,
            self.arrival_rate,
            &excess,
            self.series.terms,
        ))
    }
}

fn assemble_report(
    catalog: &Catalog,
    policy: &CachingPolicy,
    arrival_rate: f64,
    excess: &[f64],
    terms: usize,
) -> PaoiReport {
    let base = 1.0 / arrival_rate;
    let per_file_paoi: Vec<f64> = excess.iter().map(|x| base + x).collect();
    let per_file_feasible = per_file_paoi.iter().map(|a| a.is_finite()).collect();
    let (mut weighted_excess, mut cached_mass) = (0.0, 0.0);
    for ((&p, &q), &x) in catalog.popularity().iter().zip(policy.probs()).zip(excess) {
        if q > 0.0 {
            weighted_excess += p * x;
            cached_mass += p;
        }
    }
    let weighted_paoi_cached = if cached_mass > 0.0 {
        base + weighted_excess / cached_mass
    } else {
        f64::INFINITY
    };
    PaoiReport {
        per_file_paoi,
        weighted_paoi: base + weighted_excess,
        weighted_paoi_cached,
        per_file_feasible,
        truncation_terms_used: terms,
    }
}

fn check_shapes(policy: &CachingPolicy, catalog: &Catalog) -> Result<()> {
    if policy.num_files() != catalog.num_files() {
        return Err(Error::domain(format!(
            "policy covers {} files, catalog has {}",
            policy.num_files(),
            catalog.num_files()
        )));
    }
    Ok(())
}

/// General-form PAoI with the adaptively truncated series.
pub fn paoi_theorem1(
    policy: &CachingPolicy,
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
    control: &SeriesControl,
) -> Result<PaoiReport> {
    paoi_theorem1_with_sign(policy, catalog, phy, traffic, control, DenominatorSign::Subtract)
}

pub fn paoi_theorem1_with_sign(
    policy: &CachingPolicy,
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
    control: &SeriesControl,
    sign: DenominatorSign,
) -> Result<PaoiReport> {
    check_shapes(policy, catalog)?;
    Theorem1Coefficients::with_sign(phy, traffic, control, sign)?.report(catalog, policy)
}

/// Coefficients of the two-term simplification, valid when the success
/// probability is far above the arrival rate.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryCoefficients {
    arrival_rate: f64,
    /// `theta * delta / (1 - delta) * W_1`
    first_same: f64,
    /// `delta * theta^delta * V_1`
    first_other: f64,
    /// `theta * (delta/(1-delta) W_1 + theta delta/(2-delta) W_2)`
    second_same: f64,
    /// `delta * theta^delta * (V_1 + V_2)`
    second_other: f64,
}

impl CorollaryCoefficients {
    pub fn new(phy: &PhyParams, traffic: &TrafficParams, control: &SeriesControl) -> Result<Self> {
        let d = phy.delta();
        let theta = phy.sinr_threshold();
        let z = -(1.0 - phy.active_prob()) * theta;
        let w1 = gauss_2f1(1.0, 1.0 - d, 2.0 - d, z, control)?;
        let w2 = gauss_2f1(2.0, 2.0 - d, 3.0 - d, z, control)?;
        let v1 = v_term(1, phy)?;
        let v2 = v_term(2, phy)?;
        // delta/(1-delta) = 2/(alpha-2) and delta/(2-delta) = 1/(alpha-1).
        let k1 = d / (1.0 - d);
        let k2 = d / (2.0 - d);
        let td = theta.powf(d);
        Ok(Self {
            arrival_rate: traffic.arrival_rate(),
            first_same: theta * k1 * w1,
            first_other: d * td * v1,
            second_same: theta * (k1 * w1 + theta * k2 * w2),
            second_other: d * td * (v1 + v2),
        })
    }

    pub fn denominators(&self, q: f64) -> (f64, f64) {
        (
            q - q * self.first_same - (1.0 - q) * self.first_other,
            q - q * self.second_same - (1.0 - q) * self.second_other,
        )
    }

    /// Smallest `q` for which both denominators are positive (infinite when
    /// neither ever is on `(0, 1]`).
    pub fn critical_q(&self) -> f64 {
        let root = |same: f64, other: f64| {
            let k = 1.0 - same + other;
            if k > 0.0 {
                other / k
            } else {
                f64::INFINITY
            }
        };
        root(self.first_same, self.first_other).max(root(self.second_same, self.second_other))
    }

    pub fn excess(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return f64::INFINITY;
        }
        let z = self.arrival_rate;
        let (d1, d2) = self.denominators(q);
        if d1 > 0.0 && d2 > 0.0 {
            (1.0 - z) * q / d1 + (1.0 - z) * z * q / d2
        } else {
            f64::INFINITY
        }
    }

    pub fn weighted(&self, popularity: &[f64], probs: &[f64]) -> f64 {
        let mut total = 1.0 / self.arrival_rate;
        for (&p, &q) in popularity.iter().zip(probs) {
            if q > 0.0 {
                total += p * self.excess(q);
            }
        }
        total
    }
}

/// Two-term PAoI: `1/zeta + sum_f p_f [(1-zeta) q_f / D1 + (1-zeta) zeta q_f / D2]`.
pub fn paoi_corollary1(
    policy: &CachingPolicy,
    catalog: &Catalog,
    phy: &PhyParams,
    traffic: &TrafficParams,
) -> Result<PaoiReport> {
    check_shapes(policy, catalog)?;
    let coeffs = CorollaryCoefficients::new(phy, traffic, &SeriesControl::default())?;
    let excess: Vec<f64> = policy.probs().iter().map(|&q| coeffs.excess(q)).collect();
    Ok(assemble_report(
        catalog,
        policy,
        traffic.arrival_rate(),
        &excess,
        2,
    ))
}
