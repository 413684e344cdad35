//! Monte Carlo aggregation.

use rayon::prelude::*;

use super::config::SystemConfig;
use super::sim::run_trial;
use super::EngineError;

const Z_95: f64 = 1.96;

/// Completion-time summary over a batch of independent trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentStats {
    pub mean: f64,
    /// Sample standard deviation.
    pub std_dev: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub trials: u64,
}

/// Runs `config.trials` independent trials in parallel and summarizes the
/// completion slots. Per-trial seeding keeps the output identical for any
/// thread count or execution order.
pub fn run_experiment(config: &SystemConfig) -> Result<ExperimentStats, EngineError> {
    config.validate()?;
    if config.trials < 2 {
        return Err(EngineError::TooFewTrials);
    }
    let completions: Vec<f64> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(config, trial).completion_slot as f64)
        .collect();
    Ok(summarize(&completions))
}

/// Mean, sample deviation, and a normal-approximation 95% interval.
/// Reduction order is fixed, so equal inputs give bit-identical output.
pub fn summarize(samples: &[f64]) -> ExperimentStats {
    assert!(samples.len() >= 2, "need at least two samples");
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let std_dev = variance.sqrt();
    let half_width = Z_95 * std_dev / n.sqrt();
    ExperimentStats {
        mean,
        std_dev,
        ci95_low: mean - half_width,
        ci95_high: mean + half_width,
        trials: samples.len() as u64,
    }
}
