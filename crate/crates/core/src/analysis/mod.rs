//! Closed-form completion-time formulas and the minimum-window solver.
//!
//! Everything in this module is a deterministic pure function of its
//! arguments; all routines are reentrant and safe to call from any number of
//! threads. Results follow a 64-bit floating point contract: quadrature
//! carries an absolute error budget of 1e-8 and the tail series a truncation
//! budget of 1e-12.

mod gaussian;
mod negbin;
mod special;
mod window;

pub use gaussian::{
    constant_a, gaussian_completion_block, gaussian_completion_file, gaussian_completion_opt,
    min_k_admissible, n_tilde, n_tilde_with_threshold, GaussianParams, TAIL_CONFIDENCE,
};
pub use negbin::{
    expected_completion_blocks, expected_completion_full, NegBinModel, DEFAULT_TAIL_TOL,
};
pub use window::{divisors, min_coding_window, MinKQuery, MinWindow};

use thiserror::Error;

/// Errors surfaced by the analytical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    /// A probability argument fell outside its admissible interval.
    #[error("success probability {value} outside {interval}")]
    ProbabilityOutOfRange {
        value: f64,
        interval: &'static str,
    },

    /// The coding window must divide the file size exactly.
    #[error("window {window} does not divide file size {file_size}")]
    NonDivisorWindow { file_size: u64, window: u64 },

    /// The window is too small for the Gaussian tail bound to hold
    /// (requires `K > n_tilde^2 * (1 - p)`).
    #[error(
        "window {window} violates the admissibility bound: need K > {bound} \
         for {receivers} receivers at p = {prob}"
    )]
    InadmissibleWindow {
        window: u64,
        bound: f64,
        receivers: u32,
        prob: f64,
    },

    /// No divisor of the file size satisfies the admissibility bound.
    #[error("no divisor of file size {file_size} exceeds the admissibility bound {bound}")]
    NoAdmissibleWindow { file_size: u64, bound: f64 },

    /// A structurally positive argument was zero.
    #[error("{name} must be positive")]
    NonPositive { name: &'static str },
}
