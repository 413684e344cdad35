//! Harness library behind the `rlnc-broadcast` binary: CSV row schema,
//! sweep orchestration, minimum-window searches, and the bundled reference
//! table generators.

pub mod error;
pub mod format;
pub mod minima;
pub mod reproduce;
pub mod row;
pub mod sweep;

pub use error::HarnessError;

/// Master seed used when the caller does not pass `--seed`.
pub const DEFAULT_SEED: u64 = 12345;

/// Trial count used when the caller does not pass `--trials`.
pub const DEFAULT_TRIALS: u64 = 10_000;
