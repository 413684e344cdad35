//! Sweep specification, config-file handling, and the grid runner.
//!
//! A sweep expands `(file size, window, receivers, probability, policy)`
//! cells, simulates each one in parallel, and writes rows sorted by cell key
//! so the output is independent of scheduling. Per-cell seeds are derived
//! from the master seed and the cell parameters, so adding grid points does
//! not change the rows of existing ones.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use rlnc_broadcast::engine::{
    run_experiment, Connectivity, InnovationMode, Policy, SystemConfig,
};

use crate::error::HarnessError;
use crate::minima::window_grid;
use crate::row::{ResultRow, TheoryColumns};

/// Window selection: the divisor grid of each file size, or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowRule {
    AllDivisors,
    Explicit(Vec<u64>),
}

/// Fully resolved sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub receivers: Vec<u32>,
    pub file_sizes: Vec<u64>,
    pub probs: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub windows: WindowRule,
    pub policies: Vec<Policy>,
    pub mode: InnovationMode,
    pub trials: u64,
    pub master_seed: u64,
    pub out: Option<PathBuf>,
}

/// Partial sweep fields from one source (config file or command line).
/// Later sources override earlier ones field by field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOverrides {
    pub receivers: Option<Vec<u32>>,
    pub file_size: Option<Vec<u64>>,
    pub window: Option<WindowRule>,
    pub prob: Option<Vec<f64>>,
    pub epsilon: Option<Vec<f64>>,
    pub policy: Option<Vec<Policy>>,
    pub mode: Option<InnovationMode>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl SweepOverrides {
    pub fn merge(base: Self, over: Self) -> Self {
        Self {
            receivers: over.receivers.or(base.receivers),
            file_size: over.file_size.or(base.file_size),
            window: over.window.or(base.window),
            prob: over.prob.or(base.prob),
            epsilon: over.epsilon.or(base.epsilon),
            policy: over.policy.or(base.policy),
            mode: over.mode.or(base.mode),
            trials: over.trials.or(base.trials),
            seed: over.seed.or(base.seed),
            out: over.out.or(base.out),
        }
    }

    pub fn resolve(self, default_trials: u64, default_seed: u64) -> Result<SweepSpec, HarnessError> {
        let missing = |name: &str| {
            HarnessError::InvalidConfig(format!("sweep needs `{name}` from a flag or config file"))
        };
        let spec = SweepSpec {
            receivers: self.receivers.ok_or_else(|| missing("receivers"))?,
            file_sizes: self.file_size.ok_or_else(|| missing("file-size"))?,
            probs: self.prob.ok_or_else(|| missing("prob"))?,
            epsilons: self.epsilon.unwrap_or_default(),
            windows: self.window.unwrap_or(WindowRule::AllDivisors),
            policies: self
                .policy
                .unwrap_or_else(|| vec![Policy::LeastReceived, Policy::RandomSelection]),
            mode: self.mode.unwrap_or(InnovationMode::Ideal),
            trials: self.trials.unwrap_or(default_trials),
            master_seed: self.seed.unwrap_or(default_seed),
            out: self.out,
        };
        if spec.receivers.is_empty() || spec.file_sizes.is_empty() || spec.probs.is_empty() {
            return Err(HarnessError::InvalidConfig(
                "sweep lists must be non-empty".into(),
            ));
        }
        if let WindowRule::Explicit(windows) = &spec.windows {
            for &f in &spec.file_sizes {
                for &k in windows {
                    if k == 0 || f % k != 0 {
                        return Err(HarnessError::InvalidConfig(format!(
                            "explicit window {k} does not divide file size {f}"
                        )));
                    }
                }
            }
        }
        Ok(spec)
    }
}

/// Parses a `key = value` config file; keys mirror the command-line flags
/// (`receivers`, `file-size`, `window`, `prob`, `epsilon`, `policy`, `mode`,
/// `trials`, `seed`, `out`). `#` starts a comment, lists are comma-separated,
/// `window` also accepts `all`.
pub fn parse_config_text(text: &str) -> Result<SweepOverrides, HarnessError> {
    let mut over = SweepOverrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            HarnessError::InvalidConfig(format!(
                "config line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "receivers" => over.receivers = Some(parse_list(value, "receivers")?),
            "file-size" | "file_size" => over.file_size = Some(parse_list(value, "file-size")?),
            "window" => over.window = Some(parse_window_rule(value)?),
            "prob" => over.prob = Some(parse_prob_list(value)?),
            "epsilon" => over.epsilon = Some(parse_prob_like_list(value, "epsilon")?),
            "policy" => over.policy = Some(parse_policies(value)?),
            "mode" => over.mode = Some(parse_mode(value)?),
            "trials" => over.trials = Some(parse_scalar(value, "trials")?),
            "seed" => over.seed = Some(parse_scalar(value, "seed")?),
            "out" => over.out = Some(PathBuf::from(value)),
            other => {
                return Err(HarnessError::InvalidConfig(format!(
                    "config line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(over)
}

pub fn load_config_file(path: &Path) -> Result<SweepOverrides, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config_text(&text)
}

pub fn parse_list<T: std::str::FromStr>(value: &str, name: &str) -> Result<Vec<T>, HarnessError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| HarnessError::InvalidConfig(format!("bad {name} entry `{s}`")))
        })
        .collect()
}

pub fn parse_scalar<T: std::str::FromStr>(value: &str, name: &str) -> Result<T, HarnessError> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| HarnessError::InvalidConfig(format!("bad {name} value `{value}`")))
}

pub fn parse_prob_list(value: &str) -> Result<Vec<f64>, HarnessError> {
    let probs: Vec<f64> = parse_list(value, "prob")?;
    for &p in &probs {
        if !(p > 0.0 && p <= 1.0) {
            return Err(HarnessError::InvalidConfig(format!(
                "probability {p} outside (0, 1]"
            )));
        }
    }
    Ok(probs)
}

fn parse_prob_like_list(value: &str, name: &str) -> Result<Vec<f64>, HarnessError> {
    let values: Vec<f64> = parse_list(value, name)?;
    for &v in &values {
        if !(v > 0.0) {
            return Err(HarnessError::InvalidConfig(format!(
                "{name} {v} must be positive"
            )));
        }
    }
    Ok(values)
}

pub fn parse_window_rule(value: &str) -> Result<WindowRule, HarnessError> {
    if value.trim() == "all" {
        Ok(WindowRule::AllDivisors)
    } else {
        Ok(WindowRule::Explicit(parse_list(value, "window")?))
    }
}

pub fn parse_policies(value: &str) -> Result<Vec<Policy>, HarnessError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s {
            "rs" => Ok(Policy::RandomSelection),
            "lr" => Ok(Policy::LeastReceived),
            other => Err(HarnessError::InvalidConfig(format!(
                "unknown policy `{other}` (expected rs or lr)"
            ))),
        })
        .collect()
}

pub fn parse_mode(value: &str) -> Result<InnovationMode, HarnessError> {
    match value.trim() {
        "ideal" => Ok(InnovationMode::Ideal),
        "field" => Ok(InnovationMode::FiniteField),
        other => Err(HarnessError::InvalidConfig(format!(
            "unknown mode `{other}` (expected ideal or field)"
        ))),
    }
}

/// Simulates one configuration under each requested policy and joins the
/// theory columns. `probs` is either one shared value or one per receiver.
pub fn simulate_rows(
    receivers: u32,
    file_size: u64,
    window: u64,
    probs: &[f64],
    policies: &[Policy],
    mode: InnovationMode,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<ResultRow>, HarnessError> {
    let connectivity = match probs {
        [] => {
            return Err(HarnessError::InvalidConfig(
                "at least one probability is required".into(),
            ))
        }
        [p] => Connectivity::Uniform(*p),
        many if many.len() == receivers as usize => Connectivity::PerReceiver(many.to_vec()),
        many => {
            return Err(HarnessError::InvalidConfig(format!(
                "got {} probabilities for {receivers} receivers \
                 (pass one value or one per receiver)",
                many.len()
            )))
        }
    };
    let theory = TheoryColumns::lenient(
        file_size,
        window,
        receivers,
        connectivity.uniform_prob(),
    );
    let mut rows = Vec::new();
    for &policy in policies {
        let config = SystemConfig {
            receivers,
            file_size,
            window,
            connectivity: connectivity.clone(),
            policy,
            mode,
            trials,
            master_seed,
        };
        config.validate()?;
        let stats = run_experiment(&config)?;
        rows.push(ResultRow {
            receivers,
            file_size,
            window,
            probs: probs.to_vec(),
            policy: Some(policy),
            trials: Some(trials),
            seed: Some(master_seed),
            sim: Some(stats),
            theory,
        });
    }
    Ok(rows)
}

/// Stable per-cell seed: mixes the master seed with the cell parameters so a
/// cell's rows do not depend on which other cells are in the grid.
fn cell_seed(master: u64, n: u32, f: u64, k: u64, p: f64, policy: Policy) -> u64 {
    let mut h = master ^ 0x9E37_79B9_7F4A_7C15;
    for word in [
        n as u64,
        f,
        k,
        p.to_bits(),
        policy.label().as_bytes()[0] as u64,
    ] {
        h ^= word;
        h = splitmix64(h);
    }
    h
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Expands the grid, runs every cell, and returns rows sorted by
/// `(f, k, n, p, policy)`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>, HarnessError> {
    let mut cells = Vec::new();
    for &f in &spec.file_sizes {
        let windows = match &spec.windows {
            WindowRule::AllDivisors => window_grid(f),
            WindowRule::Explicit(list) => list.clone(),
        };
        for &k in &windows {
            for &n in &spec.receivers {
                for &p in &spec.probs {
                    for &policy in &spec.policies {
                        cells.push((f, k, n, p, policy));
                    }
                }
            }
        }
    }

    let mut rows: Vec<ResultRow> = cells
        .par_iter()
        .map(|&(f, k, n, p, policy)| {
            let seed = cell_seed(spec.master_seed, n, f, k, p, policy);
            let produced = simulate_rows(n, f, k, &[p], &[policy], spec.mode, spec.trials, seed)?;
            Ok(produced.into_iter().next().expect("one policy, one row"))
        })
        .collect::<Result<_, HarnessError>>()?;

    rows.sort_by(|a, b| {
        (
            a.file_size,
            a.window,
            a.receivers,
            a.probs[0].to_bits(),
            a.policy.map(Policy::label),
        )
            .cmp(&(
                b.file_size,
                b.window,
                b.receivers,
                b.probs[0].to_bits(),
                b.policy.map(Policy::label),
            ))
    });
    Ok(rows)
}
