//! `rlnc-broadcast` — analysis and simulation of block-coded broadcast.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rlnc_broadcast::analysis::{gaussian_completion_block, min_coding_window, MinKQuery};
use rlnc_broadcast_cli::error::HarnessError;
use rlnc_broadcast_cli::format::{append_csv, sig6, write_lines};
use rlnc_broadcast_cli::reproduce::{render_target, ReproduceTarget};
use rlnc_broadcast_cli::row::{ResultRow, TheoryColumns, RESULT_HEADER};
use rlnc_broadcast_cli::sweep::{
    load_config_file, parse_list, parse_mode, parse_policies, parse_prob_list, parse_window_rule,
    run_sweep, simulate_rows, SweepOverrides,
};
use rlnc_broadcast_cli::{DEFAULT_SEED, DEFAULT_TRIALS};

#[derive(Parser)]
#[command(
    name = "rlnc-broadcast",
    version,
    about = "Completion-time analysis and Monte Carlo simulation of block-coded broadcast \
             over ON/OFF erasure channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form completion-time estimates for one configuration
    Theory(TheoryArgs),
    /// Solve for the smallest coding window meeting a delay budget
    #[command(name = "min-k")]
    MinK(MinKArgs),
    /// Simulate one configuration and append result rows to a CSV
    Simulate(SimulateArgs),
    /// Run a simulation grid over receivers, file sizes, probabilities, and windows
    Sweep(SweepArgs),
    /// Regenerate a bundled reference table or the error-curve series
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct TheoryArgs {
    /// File size in packets
    #[arg(long)]
    file_size: u64,
    /// Coding window in packets (must divide the file size)
    #[arg(long)]
    window: u64,
    /// Number of receivers
    #[arg(long)]
    receivers: u32,
    /// Per-slot connectivity probability
    #[arg(long)]
    prob: f64,
    /// Append the values as a CSV result row
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinKArgs {
    #[arg(long)]
    file_size: u64,
    #[arg(long)]
    receivers: u32,
    #[arg(long)]
    prob: f64,
    /// Allowed relative excess over the whole-file optimum (e.g. 0.1 for 10%)
    #[arg(long)]
    epsilon: f64,
    /// Append the solution as a CSV row
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    receivers: u32,
    #[arg(long)]
    file_size: u64,
    #[arg(long)]
    window: u64,
    /// Connectivity probability: one value, or one per receiver (comma list)
    #[arg(long)]
    prob: String,
    /// Scheduling policies to run: comma list of `rs`, `lr`
    #[arg(long, default_value = "lr,rs")]
    policy: String,
    /// Innovation accounting: `ideal` or `field`
    #[arg(long, default_value = "ideal")]
    mode: String,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// CSV file to append rows to (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// `key = value` config file; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma list of receiver counts
    #[arg(long)]
    receivers: Option<String>,
    /// Comma list of file sizes
    #[arg(long)]
    file_size: Option<String>,
    /// `all` for every divisor from 2, or an explicit comma list
    #[arg(long)]
    window: Option<String>,
    /// Comma list of symmetric connectivity probabilities
    #[arg(long)]
    prob: Option<String>,
    /// Comma list of delay budgets; adds a minimum-window summary
    #[arg(long)]
    epsilon: Option<String>,
    /// Comma list of policies (`rs`, `lr`)
    #[arg(long)]
    policy: Option<String>,
    /// `ideal` or `field`
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// table1, table2, table3, table4, table5, or error-curves
    target: String,
    /// Trials per simulated cell (tables 2-4)
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output CSV path (defaults to `<target>.csv`)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Theory(args) => run_theory(args),
        Command::MinK(args) => run_min_k(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Sweep(args) => run_sweep_cmd(args),
        Command::Reproduce(args) => run_reproduce(args),
    }
}

fn run_theory(args: TheoryArgs) -> Result<(), HarnessError> {
    // Surface an admissibility violation ahead of a divisibility one; the
    // block estimate checks the former without requiring the latter.
    gaussian_completion_block(args.window, args.receivers, args.prob)?;
    let theory = TheoryColumns::strict(args.file_size, args.window, args.receivers, args.prob)?;
    println!("n={} f={} k={} p={}", args.receivers, args.file_size, args.window, sig6(args.prob));
    println!("theory_negbin={}", sig6(theory.negbin.expect("strict")));
    println!("theory_gauss={}", sig6(theory.gauss.expect("strict")));
    println!("theory_opt_negbin={}", sig6(theory.opt_negbin.expect("strict")));
    println!("theory_opt_gauss={}", sig6(theory.opt_gauss.expect("strict")));
    println!(
        "rel_err_gauss_vs_negbin={}",
        sig6(theory.rel_err_gauss_vs_negbin.expect("strict"))
    );
    println!("rel_err_opt_gauss_vs_negbin={}", sig6(theory.rel_err_opt().expect("strict")));
    if let Some(path) = args.out {
        let row = ResultRow {
            receivers: args.receivers,
            file_size: args.file_size,
            window: args.window,
            probs: vec![args.prob],
            policy: None,
            trials: None,
            seed: None,
            sim: None,
            theory,
        };
        append_csv(&path, RESULT_HEADER, &[row.csv_line()])?;
    }
    Ok(())
}

fn run_min_k(args: MinKArgs) -> Result<(), HarnessError> {
    let query = MinKQuery::new(args.file_size, args.receivers, args.prob, args.epsilon)?;
    let solution = min_coding_window(&query)?;
    let pct = 100.0 * solution.window as f64 / args.file_size as f64;
    println!("window={}", solution.window);
    println!("pct={}", sig6(pct));
    println!("criterion_lhs={}", sig6(solution.criterion_lhs));
    if let Some(path) = args.out {
        let header = "f,n,p,epsilon,window,pct,criterion_lhs";
        let line = format!(
            "{},{},{},{},{},{},{}",
            args.file_size,
            args.receivers,
            sig6(args.prob),
            sig6(args.epsilon),
            solution.window,
            sig6(pct),
            sig6(solution.criterion_lhs),
        );
        append_csv(&path, header, &[line])?;
    }
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<(), HarnessError> {
    let probs = parse_prob_list(&args.prob)?;
    let policies = parse_policies(&args.policy)?;
    let mode = parse_mode(&args.mode)?;
    let rows = simulate_rows(
        args.receivers,
        args.file_size,
        args.window,
        &probs,
        &policies,
        mode,
        args.trials,
        args.seed,
    )?;
    emit_rows(args.out.as_deref(), &rows)
}

fn run_sweep_cmd(args: SweepArgs) -> Result<(), HarnessError> {
    let from_file = match &args.config {
        Some(path) => load_config_file(path)?,
        None => SweepOverrides::default(),
    };
    let from_flags = SweepOverrides {
        receivers: args
            .receivers
            .as_deref()
            .map(|v| parse_list(v, "receivers"))
            .transpose()?,
        file_size: args
            .file_size
            .as_deref()
            .map(|v| parse_list(v, "file-size"))
            .transpose()?,
        window: args.window.as_deref().map(parse_window_rule).transpose()?,
        prob: args.prob.as_deref().map(parse_prob_list).transpose()?,
        epsilon: args
            .epsilon
            .as_deref()
            .map(|v| parse_list(v, "epsilon"))
            .transpose()?,
        policy: args.policy.as_deref().map(parse_policies).transpose()?,
        mode: args.mode.as_deref().map(parse_mode).transpose()?,
        trials: args.trials,
        seed: args.seed,
        out: args.out,
    };
    let spec = SweepOverrides::merge(from_file, from_flags).resolve(DEFAULT_TRIALS, DEFAULT_SEED)?;

    let rows = run_sweep(&spec)?;
    emit_rows(spec.out.as_deref(), &rows)?;

    // Delay budgets, when present, add a closed-form minimum-window summary
    // on stdout next to the simulated rows.
    for &f in &spec.file_sizes {
        for &n in &spec.receivers {
            for &p in &spec.probs {
                for &eps in &spec.epsilons {
                    match MinKQuery::new(f, n, p, eps).and_then(|q| min_coding_window(&q)) {
                        Ok(sol) => println!(
                            "min_k f={f} n={n} p={} epsilon={}: window={} pct={}",
                            sig6(p),
                            sig6(eps),
                            sol.window,
                            sig6(100.0 * sol.window as f64 / f as f64)
                        ),
                        Err(err) => println!(
                            "min_k f={f} n={n} p={} epsilon={}: {err}",
                            sig6(p),
                            sig6(eps)
                        ),
                    }
                }
            }
        }
    }
    Ok(())
}

fn run_reproduce(args: ReproduceArgs) -> Result<(), HarnessError> {
    let target: ReproduceTarget = args.target.parse()?;
    let lines = render_target(target, args.trials, args.seed)?;
    let path = args
        .out
        .unwrap_or_else(|| PathBuf::from(target.default_file_name()));
    write_lines(&path, &lines)?;
    println!("wrote {} rows to {}", lines.len() - 1, path.display());
    Ok(())
}

fn emit_rows(out: Option<&std::path::Path>, rows: &[ResultRow]) -> Result<(), HarnessError> {
    let lines: Vec<String> = rows.iter().map(ResultRow::csv_line).collect();
    match out {
        Some(path) => append_csv(path, RESULT_HEADER, &lines),
        None => {
            println!("{RESULT_HEADER}");
            for line in &lines {
                println!("{line}");
            }
            Ok(())
        }
    }
}
