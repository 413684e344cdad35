//! Generators for the bundled reference tables and error curves.

use std::str::FromStr;

use rlnc_broadcast::analysis::{
    expected_completion_blocks, expected_completion_full, gaussian_completion_file,
    gaussian_completion_opt, min_k_admissible, n_tilde, DEFAULT_TAIL_TOL,
};
use rlnc_broadcast::engine::Policy;

use crate::error::HarnessError;
use crate::format::sig6;
use crate::minima::{
    min_k_from_stats, search_min_k_closed, search_min_k_gauss, search_min_k_negbin,
    sim_stats_over_windows, window_grid,
};

/// Delay budgets used by every minimum-window table, in row order.
pub const TABLE_EPSILONS: [f64; 4] = [0.10, 0.05, 0.01, 0.005];

/// Probability sweep of the admissible-window table.
pub const TABLE1_PROBS: [f64; 5] = [0.2, 0.4, 0.6, 0.7, 0.8];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReproduceTarget {
    Table1,
    Table2,
    Table3,
    Table4,
    Table5,
    ErrorCurves,
}

impl ReproduceTarget {
    pub fn default_file_name(self) -> &'static str {
        match self {
            ReproduceTarget::Table1 => "table1.csv",
            ReproduceTarget::Table2 => "table2.csv",
            ReproduceTarget::Table3 => "table3.csv",
            ReproduceTarget::Table4 => "table4.csv",
            ReproduceTarget::Table5 => "table5.csv",
            ReproduceTarget::ErrorCurves => "error_curves.csv",
        }
    }
}

impl FromStr for ReproduceTarget {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "table1" => Ok(ReproduceTarget::Table1),
            "table2" => Ok(ReproduceTarget::Table2),
            "table3" => Ok(ReproduceTarget::Table3),
            "table4" => Ok(ReproduceTarget::Table4),
            "table5" => Ok(ReproduceTarget::Table5),
            "error_curves" | "error-curves" => Ok(ReproduceTarget::ErrorCurves),
            other => Err(HarnessError::InvalidConfig(format!(
                "unknown reproduce target `{other}` \
                 (expected table1..table5 or error-curves)"
            ))),
        }
    }
}

/// Admissible-window table: rows are probabilities, columns the two
/// truncation spans that cover small and mid-size receiver counts.
pub fn table1_rows() -> Vec<(f64, u64, u64)> {
    TABLE1_PROBS
        .iter()
        .map(|&p| {
            (
                p,
                min_k_admissible(3, p).expect("p in (0,1)"),
                min_k_admissible(4, p).expect("p in (0,1)"),
            )
        })
        .collect()
}

pub fn render_table1() -> Vec<String> {
    let mut lines = vec!["p,k_min_span3,k_min_span4".to_string()];
    for (p, k3, k4) in table1_rows() {
        lines.push(format!("{},{k3},{k4}", sig6(p)));
    }
    lines
}

/// One minimum-window cell resolved along the three theory routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoryMinK {
    pub negbin_k: u64,
    pub gauss_k: u64,
    pub closed_k: u64,
}

pub fn theory_min_k(
    file_size: u64,
    receivers: u32,
    p: f64,
    epsilon: f64,
) -> Result<TheoryMinK, HarnessError> {
    Ok(TheoryMinK {
        negbin_k: search_min_k_negbin(file_size, receivers, p, epsilon)?,
        gauss_k: search_min_k_gauss(file_size, receivers, p, epsilon)?,
        closed_k: search_min_k_closed(file_size, receivers, p, epsilon)?,
    })
}

/// The minimum-window tables vary exactly one parameter; this names it.
#[derive(Debug, Clone, Copy)]
enum TableAxis {
    Prob,
    Receivers,
    FileSize,
}

struct MinKTableSpec {
    axis: TableAxis,
    /// (receivers, file_size, p) per column.
    columns: Vec<(u32, u64, f64)>,
    /// Simulated heuristic columns (RS and LR) included?
    simulate: bool,
}

fn table_spec(target: ReproduceTarget) -> MinKTableSpec {
    match target {
        ReproduceTarget::Table2 => MinKTableSpec {
            axis: TableAxis::Prob,
            columns: vec![(6, 500, 0.2), (6, 500, 0.8)],
            simulate: true,
        },
        ReproduceTarget::Table3 => MinKTableSpec {
            axis: TableAxis::Receivers,
            columns: vec![(6, 10_000, 0.2), (50, 10_000, 0.2)],
            simulate: true,
        },
        ReproduceTarget::Table4 => MinKTableSpec {
            axis: TableAxis::FileSize,
            columns: vec![(3, 400, 0.4), (3, 2_000, 0.4)],
            simulate: true,
        },
        ReproduceTarget::Table5 => MinKTableSpec {
            axis: TableAxis::FileSize,
            columns: vec![
                (50, 8_000, 0.6),
                (50, 10_000, 0.6),
                (50, 12_000, 0.6),
                (50, 14_000, 0.6),
            ],
            simulate: false,
        },
        _ => unreachable!("not a minimum-window table"),
    }
}

fn render_min_k_table(
    target: ReproduceTarget,
    trials: u64,
    seed: u64,
) -> Result<Vec<String>, HarnessError> {
    let spec = table_spec(target);
    let axis_name = match spec.axis {
        TableAxis::Prob => "p",
        TableAxis::Receivers => "n",
        TableAxis::FileSize => "f",
    };
    let mut header = format!("epsilon,{axis_name}");
    if spec.simulate {
        for policy in ["rs", "lr"] {
            header.push_str(&format!(
                ",{policy}_k,{policy}_pct,{policy}_mean,{policy}_ci95_low,{policy}_ci95_high"
            ));
        }
    }
    header.push_str(",negbin_k,negbin_pct,gauss_k,gauss_pct,closed_form_k,closed_form_pct");
    let mut lines = vec![header];

    for &(receivers, file_size, p) in &spec.columns {
        // The Monte Carlo runs per window are epsilon-independent; do them
        // once per column.
        let sim_stats = if spec.simulate {
            let opt = expected_completion_full(file_size, receivers, p, DEFAULT_TAIL_TOL)?;
            let mut per_policy = Vec::new();
            for policy in [Policy::RandomSelection, Policy::LeastReceived] {
                per_policy.push(sim_stats_over_windows(
                    file_size, receivers, p, policy, trials, seed,
                )?);
            }
            Some((opt, per_policy))
        } else {
            None
        };

        for &epsilon in &TABLE_EPSILONS {
            let axis_value = match spec.axis {
                TableAxis::Prob => sig6(p),
                TableAxis::Receivers => receivers.to_string(),
                TableAxis::FileSize => file_size.to_string(),
            };
            let mut line = format!("{},{axis_value}", sig6(epsilon));
            if let Some((opt, per_policy)) = &sim_stats {
                for stats in per_policy {
                    let (k, cell) = min_k_from_stats(stats, *opt, epsilon);
                    line.push_str(&format!(
                        ",{k},{},{},{},{}",
                        sig6(100.0 * k as f64 / file_size as f64),
                        sig6(cell.mean),
                        sig6(cell.ci95_low),
                        sig6(cell.ci95_high),
                    ));
                }
            }
            let theory = theory_min_k(file_size, receivers, p, epsilon)?;
            for k in [theory.negbin_k, theory.gauss_k, theory.closed_k] {
                line.push_str(&format!(
                    ",{k},{}",
                    sig6(100.0 * k as f64 / file_size as f64)
                ));
            }
            lines.push(line);
        }
    }
    Ok(lines)
}

/// Configurations behind the error-curve series.
pub const ERROR_CURVE_CONFIGS: [(u32, u64, f64); 4] = [
    (6, 500, 0.2),
    (6, 500, 0.8),
    (50, 10_000, 0.2),
    (3, 2_000, 0.4),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub window: u64,
    pub negbin: f64,
    pub gauss: f64,
    pub rel_err: f64,
}

/// Exact-series vs Gaussian block estimates over the admissible window grid.
pub fn error_curve_points(
    receivers: u32,
    file_size: u64,
    p: f64,
) -> Result<Vec<CurvePoint>, HarnessError> {
    let admissible = min_k_admissible(n_tilde(receivers), p)?;
    let mut points = Vec::new();
    for window in window_grid(file_size) {
        if window < admissible {
            continue;
        }
        let negbin = expected_completion_blocks(file_size, window, receivers, p)?;
        let gauss = gaussian_completion_file(file_size, window, receivers, p)?;
        points.push(CurvePoint {
            window,
            negbin,
            gauss,
            rel_err: (gauss - negbin).abs() / negbin,
        });
    }
    Ok(points)
}

fn render_error_curves() -> Result<Vec<String>, HarnessError> {
    let mut lines = vec![
        "n,f,p,k,theory_negbin,theory_gauss,rel_err,theory_opt_negbin,theory_opt_gauss,rel_err_opt"
            .to_string(),
    ];
    for &(receivers, file_size, p) in &ERROR_CURVE_CONFIGS {
        let opt_negbin = expected_completion_full(file_size, receivers, p, DEFAULT_TAIL_TOL)?;
        let opt_gauss = gaussian_completion_opt(file_size, receivers, p)?;
        let rel_err_opt = (opt_gauss - opt_negbin).abs() / opt_negbin;
        for point in error_curve_points(receivers, file_size, p)? {
            lines.push(format!(
                "{receivers},{file_size},{},{},{},{},{},{},{},{}",
                sig6(p),
                point.window,
                sig6(point.negbin),
                sig6(point.gauss),
                sig6(point.rel_err),
                sig6(opt_negbin),
                sig6(opt_gauss),
                sig6(rel_err_opt),
            ));
        }
    }
    Ok(lines)
}

/// Renders the named target as CSV lines, header first.
pub fn render_target(
    target: ReproduceTarget,
    trials: u64,
    seed: u64,
) -> Result<Vec<String>, HarnessError> {
    match target {
        ReproduceTarget::Table1 => Ok(render_table1()),
        ReproduceTarget::Table2
        | ReproduceTarget::Table3
        | ReproduceTarget::Table4
        | ReproduceTarget::Table5 => render_min_k_table(target, trials, seed),
        ReproduceTarget::ErrorCurves => render_error_curves(),
    }
}
