//! Slotted Monte Carlo simulation of the broadcast system.
//!
//! Each slot the base station samples per-receiver Bernoulli connectivity,
//! picks a block through the configured scheduling heuristic, and delivers
//! one coded packet to every connected receiver waiting on that block.
//! Trials are embarrassingly parallel: each one derives its random stream
//! from `(master_seed, trial_index)`, so results are identical regardless of
//! execution order or thread count.

mod config;
mod receiver;
mod sim;
mod stats;

pub use config::{Connectivity, InnovationMode, Policy, SystemConfig};
pub use receiver::ReceiverState;
pub use sim::{run_trial, run_trial_observed, select_batch_lr, select_batch_rs, SimResult};
pub use stats::{run_experiment, summarize, ExperimentStats};

use thiserror::Error;

/// Configuration and statistics errors from the simulation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("file size {file_size} is not a multiple of window {window}")]
    NonDivisorWindow { file_size: u64, window: u64 },

    #[error("connectivity probability {0} outside (0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("connectivity vector has {got} entries for {expected} receivers")]
    ConnectivityLength { got: usize, expected: usize },

    #[error("{name} must be positive")]
    NonPositive { name: &'static str },

    #[error("experiment statistics need at least two trials")]
    TooFewTrials,
}
