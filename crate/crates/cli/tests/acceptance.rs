//! Acceptance suite: one test per criterion, each printing a line with the
//! measured quantities before asserting the stated tolerance.
//!
//! Criterion 7 is a known-red check, kept faithful rather than loosened: the
//! balanced heuristic overlaps block phases whenever the trailing receiver
//! is disconnected while a leader is on, so at small windows its mean runs
//! up to ~12% below the lockstep block decomposition (most visible at
//! p = 0.2). The reference tables themselves carry the same signature — the
//! simulated-heuristic minimum-window column sits far below the
//! decomposition column at low connectivity. The remaining criteria pass.

use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rlnc_broadcast::analysis::{
    divisors, expected_completion_blocks, expected_completion_full, gaussian_completion_file,
    gaussian_completion_opt, min_coding_window, min_k_admissible, n_tilde, MinKQuery,
    DEFAULT_TAIL_TOL,
};
use rlnc_broadcast::codec::{encode, random_coefficients, CodedPacket, DecoderState, Gf256};
use rlnc_broadcast::engine::{
    run_experiment, run_trial, run_trial_observed, Connectivity, InnovationMode, Policy,
    SystemConfig,
};
use rlnc_broadcast_cli::reproduce::table1_rows;

const ACCEPTANCE_SEED: u64 = 0x5EED;

fn ideal_config(
    receivers: u32,
    file_size: u64,
    window: u64,
    p: f64,
    policy: Policy,
    trials: u64,
) -> SystemConfig {
    SystemConfig {
        receivers,
        file_size,
        window,
        connectivity: Connectivity::Uniform(p),
        policy,
        mode: InnovationMode::Ideal,
        trials,
        master_seed: ACCEPTANCE_SEED,
    }
}

#[test]
fn c01_admissible_window_table_exact() {
    let start = Instant::now();
    let expect = [
        (0.2, 8, 13),
        (0.4, 6, 10),
        (0.6, 4, 7),
        (0.7, 3, 5),
        (0.8, 2, 4),
    ];
    let rows = table1_rows();
    assert_eq!(rows.len(), expect.len());
    for ((p, k3, k4), (ep, ek3, ek4)) in rows.iter().zip(expect) {
        assert_eq!((*p, *k3, *k4), (ep, ek3, ek4), "cell mismatch at p = {ep}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "{elapsed:?}");
    println!("c01 PASS: all 10 admissible-window cells exact ({elapsed:?})");
}

#[test]
fn c02_span_breakpoints_exact() {
    let start = Instant::now();
    for n in [1, 2, 3] {
        assert_eq!(n_tilde(n), 3, "N = {n}");
    }
    assert_eq!(n_tilde(4), 4);
    assert_eq!(n_tilde(158), 4);
    assert_eq!(n_tilde(159), 5);
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "{elapsed:?}");
    println!("c02 PASS: span breakpoints 3|3|3|4|4|5 at N=1,2,3,4,158,159 ({elapsed:?})");
}

#[test]
fn c03_min_window_closed_form_reference_cells() {
    let start = Instant::now();
    // (file, receivers, p, epsilon, expected window, expected percent)
    let cells = [
        (500u64, 6u32, 0.2, 0.10, 100u64, 20.0),
        (500, 6, 0.8, 0.10, 20, 4.0),
        (500, 6, 0.2, 0.05, 125, 25.0),
        (500, 6, 0.8, 0.05, 100, 20.0),
        (500, 6, 0.2, 0.01, 500, 100.0),
        (500, 6, 0.8, 0.01, 500, 100.0),
        (500, 6, 0.2, 0.005, 500, 100.0),
        (500, 6, 0.8, 0.005, 500, 100.0),
        (10_000, 6, 0.2, 0.10, 125, 1.25),
        (10_000, 50, 0.2, 0.10, 400, 4.0),
        (400, 3, 0.4, 0.10, 25, 6.25),
        (2_000, 3, 0.4, 0.10, 40, 2.0),
    ];
    for (f, n, p, eps, want_k, want_pct) in cells {
        let got = min_coding_window(&MinKQuery::new(f, n, p, eps).unwrap()).unwrap();
        assert_eq!(
            got.window, want_k,
            "F={f} N={n} p={p} eps={eps}: got {}",
            got.window
        );
        let pct = 100.0 * got.window as f64 / f as f64;
        assert!((pct - want_pct).abs() < 1e-9, "{pct} vs {want_pct}");
        assert!(got.criterion_lhs <= eps);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "{elapsed:?}");
    println!(
        "c03 PASS: {} closed-form minimum-window cells exact ({elapsed:?})",
        cells.len()
    );
}

const ACCURACY_CONFIGS: [(u32, u64, f64); 4] = [
    (6, 500, 0.2),
    (6, 500, 0.8),
    (50, 10_000, 0.2),
    (3, 2_000, 0.4),
];

#[test]
fn c04_gaussian_accuracy_at_the_optimum() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (n, f, p) in ACCURACY_CONFIGS {
        let exact = expected_completion_full(f, n, p, DEFAULT_TAIL_TOL).unwrap();
        let gauss = gaussian_completion_opt(f, n, p).unwrap();
        let rel = (gauss - exact).abs() / exact;
        worst = worst.max(rel);
        assert!(
            rel <= 0.005,
            "N={n} F={f} p={p}: rel err {rel:.5} exceeds 0.5%"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
    println!(
        "c04 PASS: whole-file Gaussian error <= {:.3}% over 4 configs, bound 0.5% ({elapsed:?})",
        100.0 * worst
    );
}

#[test]
fn c05_gaussian_accuracy_over_the_window_grid() {
    let start = Instant::now();
    let mut worst_overall = 0.0f64;
    for (n, f, p) in ACCURACY_CONFIGS {
        let kmin = min_k_admissible(n_tilde(n), p).unwrap();
        let mut errors: Vec<(u64, f64)> = Vec::new();
        for k in divisors(f) {
            if k < kmin {
                continue;
            }
            let negbin = expected_completion_blocks(f, k, n, p).unwrap();
            let gauss = gaussian_completion_file(f, k, n, p).unwrap();
            errors.push((k, (gauss - negbin).abs() / negbin));
        }
        let max = errors.iter().map(|(_, e)| *e).fold(0.0, f64::max);
        worst_overall = worst_overall.max(max);
        assert!(max <= 0.08, "N={n} F={f} p={p}: max rel err {max:.4}");
        let below_f: Vec<f64> = errors
            .iter()
            .filter(|(k, _)| *k < f)
            .rev()
            .take(3)
            .map(|(_, e)| *e)
            .collect();
        assert_eq!(below_f.len(), 3);
        for err in below_f {
            assert!(
                err <= 0.01,
                "N={n} F={f} p={p}: top-divisor err {err:.4} exceeds 1%"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "{elapsed:?}");
    println!(
        "c05 PASS: block-curve Gaussian error max {:.2}% (bound 8%), top-3 divisors <= 1% ({elapsed:?})",
        100.0 * worst_overall
    );
}

#[test]
fn c06_simulation_matches_the_tail_series_at_whole_file_window() {
    let start = Instant::now();
    let exact = expected_completion_full(500, 6, 0.2, DEFAULT_TAIL_TOL).unwrap();
    let config = ideal_config(6, 500, 500, 0.2, Policy::LeastReceived, 100_000);
    let stats = run_experiment(&config).unwrap();
    let rel = (stats.mean - exact).abs() / exact;
    let elapsed = start.elapsed();
    assert!(
        rel <= 0.01,
        "sim {} vs series {exact}: rel {rel:.5}",
        stats.mean
    );
    assert!(elapsed < Duration::from_secs(60), "{elapsed:?}");
    println!(
        "c06 PASS: 1e5-trial mean {:.2} vs series {exact:.2} (rel {:.4}%, bound 1%) ({elapsed:?})",
        stats.mean,
        100.0 * rel
    );
}

#[test]
fn c07_lr_block_decomposition_accuracy_over_the_grid() {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut worst: (f64, String) = (0.0, String::new());
    for n in [3u32, 6] {
        for p in [0.2, 0.5, 0.8] {
            let kmin = min_k_admissible(n_tilde(n), p).unwrap();
            for k in divisors(500).into_iter().filter(|&k| k >= kmin) {
                let theory = expected_completion_blocks(500, k, n, p).unwrap();
                let config = ideal_config(n, 500, k, p, Policy::LeastReceived, 10_000);
                let mean = run_experiment(&config).unwrap().mean;
                let rel = (mean - theory).abs() / theory;
                let label = format!("N={n} p={p} K={k}");
                rows.push(format!(
                    "  {label}: sim {mean:.1} vs decomposition {theory:.1} (rel {:+.2}%)",
                    100.0 * (mean - theory) / theory
                ));
                if rel > worst.0 {
                    worst = (rel, label);
                }
            }
        }
    }
    for row in &rows {
        println!("{row}");
    }
    let elapsed = start.elapsed();
    let verdict = if worst.0 <= 0.05 { "PASS" } else { "FAIL" };
    println!(
        "c07 {verdict}: worst decomposition gap {:.2}% at {} (bound 5%, {} cells, {elapsed:?})",
        100.0 * worst.0,
        worst.1,
        rows.len()
    );
    assert!(elapsed < Duration::from_secs(300), "{elapsed:?}");
    assert!(
        worst.0 <= 0.05,
        "decomposition gap {:.2}% at {} exceeds the 5% bound \
         (block-phase overlap at small windows; see the per-cell table above)",
        100.0 * worst.0,
        worst.1
    );
}

#[test]
fn c08_least_received_dominates_random_selection() {
    let start = Instant::now();
    let lr = run_experiment(&ideal_config(6, 500, 25, 0.2, Policy::LeastReceived, 10_000)).unwrap();
    let rs = run_experiment(&ideal_config(
        6,
        500,
        25,
        0.2,
        Policy::RandomSelection,
        10_000,
    ))
    .unwrap();
    assert!(lr.mean < rs.mean, "LR {} vs RS {}", lr.mean, rs.mean);
    assert!(
        lr.ci95_high < rs.ci95_low,
        "intervals overlap: LR [{}, {}] vs RS [{}, {}]",
        lr.ci95_low,
        lr.ci95_high,
        rs.ci95_low,
        rs.ci95_high
    );
    let elapsed = start.elapsed();
    println!(
        "c08 PASS: LR {:.1} [{:.1}, {:.1}] < RS {:.1} [{:.1}, {:.1}] ({elapsed:?})",
        lr.mean, lr.ci95_low, lr.ci95_high, rs.mean, rs.ci95_low, rs.ci95_high
    );
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[test]
fn c09_determinism_and_per_slot_invariants() {
    let start = Instant::now();

    // Perfect channel: lockstep states, exact completion, no waste.
    let config = ideal_config(5, 60, 12, 1.0, Policy::LeastReceived, 2);
    let result = run_trial_observed(&config, 0, |_, states| {
        let first = &states[0];
        for state in states {
            state.check_invariants();
            assert_eq!(state.batch_id(), first.batch_id());
            assert_eq!(state.received_in_batch(), first.received_in_batch());
        }
    });
    assert_eq!(result.completion_slot, 60);
    assert_eq!(result.total_discarded, 0);
    assert_eq!(result.total_idle_slots, 0);
    assert_eq!(result.per_batch_finish, vec![12, 24, 36, 48, 60]);

    // Fixed seeds reproduce bit-identically.
    let config = ideal_config(4, 60, 10, 0.45, Policy::RandomSelection, 400);
    assert_eq!(run_experiment(&config), run_experiment(&config));
    assert_eq!(run_trial(&config, 17), run_trial(&config, 17));

    // Randomized configurations keep every per-slot state invariant.
    let mut state = 0xACCE_77ED_u64;
    for case in 0..100 {
        let receivers = 1 + (splitmix(&mut state) % 6) as u32;
        let window = 1 + splitmix(&mut state) % 8;
        let blocks = 1 + splitmix(&mut state) % 6;
        let p = 0.2 + 0.8 * (splitmix(&mut state) % 9) as f64 / 10.0;
        let policy = if splitmix(&mut state) % 2 == 0 {
            Policy::LeastReceived
        } else {
            Policy::RandomSelection
        };
        let mode = if splitmix(&mut state) % 2 == 0 {
            InnovationMode::Ideal
        } else {
            InnovationMode::FiniteField
        };
        let config = SystemConfig {
            receivers,
            file_size: window * blocks,
            window,
            connectivity: Connectivity::Uniform(p.min(1.0)),
            policy,
            mode,
            trials: 1,
            master_seed: splitmix(&mut state),
        };
        config.validate().unwrap();
        let mut prev_batches = vec![1u64; receivers as usize];
        let result = run_trial_observed(&config, case, |_, states| {
            for (state, prev) in states.iter().zip(prev_batches.iter_mut()) {
                state.check_invariants();
                let batch = state.batch_id();
                assert!(batch >= *prev && batch <= *prev + 1, "batch id jumped");
                assert!(state.received_in_batch() <= window);
                *prev = batch;
            }
        });
        assert!(result.completion_slot >= config.file_size);
        assert!(
            result.per_batch_finish.windows(2).all(|w| w[0] <= w[1]),
            "block finish slots must be non-decreasing"
        );
        assert_eq!(
            result.per_batch_finish.last().copied(),
            Some(result.completion_slot)
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "{elapsed:?}");
    println!(
        "c09 PASS: lockstep at p=1, bit-identical reruns, invariants over 100 random configs \
         ({elapsed:?})"
    );
}

#[test]
fn c10_codec_validation() {
    let start = Instant::now();

    // Field axioms, exhaustive over pairs.
    for a in 0..=255u8 {
        let ga = Gf256(a);
        assert_eq!(ga * Gf256::ONE, ga);
        assert_eq!(ga * Gf256::ZERO, Gf256::ZERO);
        if a != 0 {
            assert_eq!(ga * ga.inv(), Gf256::ONE);
        }
        for b in 0..=255u8 {
            let gb = Gf256(b);
            assert_eq!(ga * gb, gb * ga);
            let gc = Gf256(a.rotate_left(3) ^ b);
            assert_eq!(ga * (gb + gc), ga * gb + ga * gc);
            assert_eq!((ga * gb) * gc, ga * (gb * gc));
        }
    }

    // Round-trip over 1000 random generations.
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
    for case in 0..1000 {
        let window = 1 + case % 32;
        let payload_len = [1usize, 64, 1024][case % 3];
        let generation: Vec<Vec<u8>> = (0..window)
            .map(|_| {
                let mut buf = vec![0u8; payload_len];
                rng.fill_bytes(&mut buf);
                buf
            })
            .collect();
        let mut decoder = DecoderState::new(window);
        let decoded = loop {
            let coefficients = random_coefficients(window, &mut rng);
            let packet = encode(&generation, &coefficients).unwrap();
            if let Some(decoded) = decoder.absorb(&packet).unwrap().decoded {
                break decoded;
            }
        };
        assert_eq!(decoded, generation, "round-trip failed at case {case}");
    }

    // Full-rank frequency of random 8x8 systems vs the closed-form product.
    let expected: f64 = (1..=8).map(|i| 1.0 - 256f64.powi(-i)).product();
    let samples = 10_000u32;
    let mut full_rank = 0u32;
    for _ in 0..samples {
        let mut decoder = DecoderState::new(8);
        for _ in 0..8 {
            let packet = CodedPacket {
                coefficients: random_coefficients(8, &mut rng),
                payload: vec![],
            };
            decoder.absorb(&packet).unwrap();
        }
        if decoder.rank() == 8 {
            full_rank += 1;
        }
    }
    let rate = full_rank as f64 / samples as f64;
    let se = (expected * (1.0 - expected) / samples as f64).sqrt();
    assert!(
        (rate - expected).abs() <= 3.0 * se,
        "full-rank rate {rate:.5} vs {expected:.5} (3se = {:.5})",
        3.0 * se
    );

    // Ideal vs finite-field simulation means.
    let trials = 4_000;
    let ideal = run_experiment(&ideal_config(6, 500, 25, 0.5, Policy::LeastReceived, trials))
        .unwrap();
    let mut field_config = ideal_config(6, 500, 25, 0.5, Policy::LeastReceived, trials);
    field_config.mode = InnovationMode::FiniteField;
    let field = run_experiment(&field_config).unwrap();
    let gap = (ideal.mean - field.mean).abs() / ideal.mean;
    assert!(
        gap <= 0.01,
        "ideal {} vs finite-field {}: gap {gap:.5}",
        ideal.mean,
        field.mean
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "{elapsed:?}");
    println!(
        "c10 PASS: field axioms, 1000 round-trips, full-rank rate {rate:.4} vs {expected:.4}, \
         mode gap {:.3}% (bound 1%) ({elapsed:?})",
        100.0 * gap
    );
}

#[test]
fn c11_min_window_insensitive_to_file_size() {
    let start = Instant::now();
    let expect = [(8_000u64, 500u64), (10_000, 500), (12_000, 500), (14_000, 560)];
    for (f, want) in expect {
        let got = min_coding_window(&MinKQuery::new(f, 50, 0.6, 0.05).unwrap()).unwrap();
        assert_eq!(got.window, want, "F = {f}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "{elapsed:?}");
    println!("c11 PASS: minimum window (500, 500, 500, 560) across file sizes ({elapsed:?})");
}
