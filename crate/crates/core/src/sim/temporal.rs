use std::collections::VecDeque;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// Per-slot result of a transmission opportunity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attempt {
    /// The serving BS was muted in this slot.
    Muted,
    Failed,
    Delivered,
}

/// Sufficient statistics of one queue trace.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TraceStats {
    pub arrivals: u64,
    pub departures: u64,
    pub final_queue: u64,
    /// Slots (after warm-up) in which the queue held a packet.
    pub busy_slots: u64,
    /// Deliveries in those slots.
    pub successes: u64,
    pub peak_sum: f64,
    pub peak_count: u64,
    pub age_sum: f64,
    pub age_slots: u64,
    /// The queue exceeded the configured limit and the trace was abandoned.
    pub overflowed: bool,
}

impl TraceStats {
    pub fn mean_peak_age(&self) -> Option<f64> {
        (self.peak_count > 0).then(|| self.peak_sum / self.peak_count as f64)
    }

    pub fn mean_age(&self) -> Option<f64> {
        (self.age_slots > 0).then(|| self.age_sum / self.age_slots as f64)
    }

    pub fn stp(&self) -> Option<f64> {
        (self.busy_slots > 0).then(|| self.successes as f64 / self.busy_slots as f64)
    }
}

/// Queue parameters shared by all traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueSettings {
    pub arrival_rate: f64,
    pub slots: u64,
    pub warmup: u64,
    pub queue_limit: usize,
}

/// Slot loop of the FIFO update queue at the serving BS.
///
/// In every slot a packet arrives with probability `zeta` (stamped with the
/// slot index), then, if the queue is non-empty, `attempt` decides the fate of
/// the head packet. When packet `k` generated at `g_k` is delivered in slot `t`,
/// the receiver's age just before the reset equals `t - g_{k-1} + 1`: that value
/// is the recorded peak-age sample. The age itself restarts at `t - g_k + 1`.
pub fn run_queue<R, F>(settings: &QueueSettings, rng: &mut R, mut attempt: F) -> TraceStats
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Attempt,
{
    let mut st = TraceStats::default();
    let mut queue: VecDeque<u64> = VecDeque::new();
    let mut last_gen: Option<u64> = None;
    let mut age: Option<u64> = None;
    for t in 0..settings.slots {
        let counted = t >= settings.warmup;
        if rng.random_bool(settings.arrival_rate) {
            queue.push_back(t);
            st.arrivals += 1;
            if queue.len() > settings.queue_limit {
                st.overflowed = true;
                break;
            }
        }
        let mut delivered = None;
        if let Some(&head) = queue.front() {
            let outcome = attempt(rng);
            if counted {
                st.busy_slots += 1;
            }
            if outcome == Attempt::Delivered {
                queue.pop_front();
                st.departures += 1;
                if counted {
                    st.successes += 1;
                }
                delivered = Some(head);
            }
        }
        if let Some(g) = delivered {
            if let (Some(prev), true) = (last_gen, counted) {
                st.peak_sum += (t - prev + 1) as f64;
                st.peak_count += 1;
            }
            last_gen = Some(g);
            age = Some(t - g + 1);
        } else if let Some(a) = age.as_mut() {
            *a += 1;
        }
        if let (Some(a), true) = (age, counted) {
            st.age_sum += a as f64;
            st.age_slots += 1;
        }
    }
    st.final_queue = queue.len() as u64;
    st
}

/// Rayleigh-faded SIR test with independent muting of every BS.
///
/// `gains` holds `(r / x_i)^alpha` for each interferer, so the serving link has
/// unit gain: success iff `h0 > theta * sum_i h_i g_i` over active interferers.
pub fn sir_attempt<R: Rng + ?Sized>(gains: &[f64], active_prob: f64, theta: f64, rng: &mut R) -> Attempt {
    if !rng.random_bool(active_prob) {
        return Attempt::Muted;
    }
    let h0: f64 = Exp1.sample(rng);
    let budget = h0 / theta;
    let mut interference = 0.0;
    for &g in gains {
        if active_prob >= 1.0 || rng.random_bool(active_prob) {
            let h: f64 = Exp1.sample(rng);
            interference += h * g;
            if interference >= budget {
                return Attempt::Failed;
            }
        }
    }
    Attempt::Delivered
}

/// Exact per-slot success probability given the geometry:
/// `beta * prod_i (1 - beta + beta / (1 + theta g_i))`.
pub fn conditional_stp(gains: &[f64], active_prob: f64, theta: f64) -> f64 {
    let log: f64 = gains
        .iter()
        .map(|g| (1.0 - active_prob + active_prob / (1.0 + theta * g)).ln())
        .sum();
    active_prob * log.exp()
}

/// Fraction of `probes` independent slots with a successful transmission.
pub fn probe_stp<R: Rng + ?Sized>(
    gains: &[f64],
    active_prob: f64,
    theta: f64,
    probes: u64,
    rng: &mut R,
) -> u64 {
    (0..probes)
        .filter(|_| sir_attempt(gains, active_prob, theta, rng) == Attempt::Delivered)
        .count() as u64
}

/// Isolated Bernoulli-arrival / Bernoulli-service queue.
pub fn simulate_bernoulli_queue<R: Rng + ?Sized>(
    settings: &QueueSettings,
    service_prob: f64,
    rng: &mut R,
) -> TraceStats {
    run_queue(settings, rng, |r| {
        if r.random_bool(service_prob) {
            Attempt::Delivered
        } else {
            Attempt::Failed
        }
    })
}
