//! Minimum-window searches over the divisor grid.
//!
//! Three theory routes answer "smallest window within `(1 + epsilon)` of the
//! whole-file optimum": scanning the exact tail series, scanning the Gaussian
//! estimate, and the closed-form criterion. A fourth, simulation-backed
//! search scans Monte Carlo means. Divisor grids start at 2.

use rayon::prelude::*;

use rlnc_broadcast::analysis::{
    divisors, expected_completion_blocks, expected_completion_full, gaussian_completion_file,
    gaussian_completion_opt, min_coding_window, min_k_admissible, n_tilde, AnalysisError,
    MinKQuery, DEFAULT_TAIL_TOL,
};
use rlnc_broadcast::engine::{
    run_experiment, Connectivity, ExperimentStats, InnovationMode, Policy, SystemConfig,
};

use crate::error::HarnessError;

/// Divisors of `f` starting from 2 (the window sweep grid). `f` itself is
/// always included; for `f = 1` the only window is 1.
pub fn window_grid(f: u64) -> Vec<u64> {
    let grid: Vec<u64> = divisors(f).into_iter().filter(|&k| k >= 2).collect();
    if grid.is_empty() {
        vec![1]
    } else {
        grid
    }
}

/// Smallest grid window whose exact-series estimate stays within
/// `(1 + epsilon)` of the whole-file value.
pub fn search_min_k_negbin(
    file_size: u64,
    receivers: u32,
    p: f64,
    epsilon: f64,
) -> Result<u64, AnalysisError> {
    let opt = expected_completion_full(file_size, receivers, p, DEFAULT_TAIL_TOL)?;
    let budget = (1.0 + epsilon) * opt;
    for window in window_grid(file_size) {
        if expected_completion_blocks(file_size, window, receivers, p)? <= budget {
            return Ok(window);
        }
    }
    Ok(file_size)
}

/// Smallest admissible grid window whose Gaussian estimate stays within
/// `(1 + epsilon)` of the Gaussian whole-file optimum.
pub fn search_min_k_gauss(
    file_size: u64,
    receivers: u32,
    p: f64,
    epsilon: f64,
) -> Result<u64, AnalysisError> {
    let opt = gaussian_completion_opt(file_size, receivers, p)?;
    let budget = (1.0 + epsilon) * opt;
    let admissible = min_k_admissible(n_tilde(receivers), p)?;
    for window in window_grid(file_size) {
        if window < admissible {
            continue;
        }
        if gaussian_completion_file(file_size, window, receivers, p)? <= budget {
            return Ok(window);
        }
    }
    Ok(file_size)
}

/// Closed-form criterion solution.
pub fn search_min_k_closed(
    file_size: u64,
    receivers: u32,
    p: f64,
    epsilon: f64,
) -> Result<u64, AnalysisError> {
    Ok(min_coding_window(&MinKQuery::new(file_size, receivers, p, epsilon)?)?.window)
}

/// Monte Carlo completion statistics per grid window; the expensive part of
/// the simulated searches, cached by callers across epsilon values.
pub fn sim_stats_over_windows(
    file_size: u64,
    receivers: u32,
    p: f64,
    policy: Policy,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<(u64, ExperimentStats)>, HarnessError> {
    let windows = window_grid(file_size);
    windows
        .par_iter()
        .map(|&window| {
            let config = SystemConfig {
                receivers,
                file_size,
                window,
                connectivity: Connectivity::Uniform(p),
                policy,
                mode: InnovationMode::Ideal,
                trials,
                master_seed,
            };
            Ok((window, run_experiment(&config)?))
        })
        .collect()
}

/// Smallest window whose simulated mean stays within `(1 + epsilon)` of
/// `opt`; falls back to the largest grid window.
pub fn min_k_from_stats(
    stats: &[(u64, ExperimentStats)],
    opt: f64,
    epsilon: f64,
) -> (u64, ExperimentStats) {
    let budget = (1.0 + epsilon) * opt;
    stats
        .iter()
        .find(|(_, s)| s.mean <= budget)
        .or_else(|| stats.last())
        .map(|(window, s)| (*window, *s))
        .expect("non-empty window grid")
}
