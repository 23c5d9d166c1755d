//! Peak age of information (PAoI) for cache-enabled Poisson cellular networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`specialfn`]: log-gamma, Beta and Gauss hypergeometric kernels.
//! * [`model`]: physical-layer, traffic, catalog and caching-policy types.
//! * [`analytic`]: closed-form PAoI, success probability and stability thresholds.
//! * [`optimize`]: KKT closed form, projected-gradient cross-check, MPC/UC baselines.
//! * [`sim`]: spatial-temporal Monte Carlo engine used as ground truth.
//! * [`cli`]: configuration parsing, sweeps and CSV emission behind the `paoi` binary.

// `!(x > 0.0)` is used on purpose throughout: it rejects NaN along with the
// out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod model;
pub mod optimize;
pub mod sim;
pub mod specialfn;

pub use error::{Error, Result};
