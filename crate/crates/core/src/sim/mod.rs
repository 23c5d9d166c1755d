//! Monte Carlo ground truth.
//!
//! A realization draws the BS field and the cache contents; each tracked file
//! then gets its own slot-level trace of the update queue at its serving BS.
//! Every random stream is keyed by `(seed, realization, file)`, so results do
//! not depend on how rayon schedules the realizations.

mod estimate;
mod spatial;
pub mod stats;
mod temporal;

pub use estimate::{estimate, estimate_stp, stream, Scenario, SimConfig, SimResult, TrackFiles, MIN_EXPECTED_BS};
pub use spatial::{assign_caches, sample_ppp, Point, SpatialRealization};
pub use stats::Estimate;
pub use temporal::{
    conditional_stp, probe_stp, run_queue, simulate_bernoulli_queue, sir_attempt, Attempt,
    QueueSettings, TraceStats,
};
