//! Property tests over the analysis formulas and the codec.

use proptest::prelude::*;

use rlnc_broadcast::analysis::{
    divisors, expected_completion_full, gaussian_completion_file, gaussian_completion_opt,
    min_coding_window, min_k_admissible, n_tilde, MinKQuery, NegBinModel, DEFAULT_TAIL_TOL,
};
use rlnc_broadcast::codec::{encode, random_coefficients, DecoderState};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    /// Round-trip: random generations decode byte-for-byte once the decoder
    /// reaches full rank, whatever the coefficient draws were.
    #[test]
    fn codec_round_trip(
        window in 1usize..=32,
        payload_len in prop_oneof![Just(1usize), Just(64), Just(1024)],
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let generation: Vec<Vec<u8>> = (0..window)
            .map(|_| {
                let mut buf = vec![0u8; payload_len];
                rng.fill_bytes(&mut buf);
                buf
            })
            .collect();
        let mut decoder = DecoderState::new(window);
        let mut innovative = 0usize;
        let decoded = loop {
            let packet = encode(&generation, &random_coefficients(window, &mut rng)).unwrap();
            let outcome = decoder.absorb(&packet).unwrap();
            if outcome.innovative {
                innovative += 1;
            }
            prop_assert_eq!(decoder.rank(), innovative);
            if let Some(decoded) = outcome.decoded {
                break decoded;
            }
        };
        prop_assert_eq!(decoded, generation);
    }

    /// The pmf sums to one under the documented truncation rule; the direct
    /// log-gamma evaluation is the summation route here.
    #[test]
    fn negbin_normalization(r in 1u64..2_000, p in 0.05f64..=1.0) {
        let model = NegBinModel::new(r, p).unwrap();
        let cutoff = model.mean_failures() + 10.0 * model.std_dev_failures();
        let mut total = 0.0f64;
        let mut x = 0u64;
        loop {
            let pmf = model.pmf(x);
            total += pmf;
            if (pmf < DEFAULT_TAIL_TOL && x as f64 > cutoff) || total >= 1.0 {
                break;
            }
            x += 1;
        }
        prop_assert!((1.0 - total).abs() <= 1e-9, "sum = {}", total);
    }

    /// Tightening the delay budget never shrinks the chosen window, and the
    /// achieved criterion value stays within the budget.
    #[test]
    fn min_window_monotone_in_budget(
        file_size in 2u64..4_000,
        receivers in 1u32..100,
        p in 0.1f64..0.9,
        eps_lo in 0.002f64..0.5,
        eps_gap in 0.001f64..1.0,
    ) {
        let span = n_tilde(receivers);
        prop_assume!(file_size as f64 > (span as f64) * (span as f64) * (1.0 - p));
        let tight = min_coding_window(
            &MinKQuery::new(file_size, receivers, p, eps_lo).unwrap(),
        ).unwrap();
        let loose = min_coding_window(
            &MinKQuery::new(file_size, receivers, p, eps_lo + eps_gap).unwrap(),
        ).unwrap();
        prop_assert!(tight.window >= loose.window);
        prop_assert!(tight.criterion_lhs <= eps_lo);
        prop_assert!(file_size % tight.window == 0);
    }

    /// The whole-file Gaussian estimate never exceeds the blocked one, with
    /// equality exactly at the single-block window, and the blocked estimate
    /// strictly decreases along the divisor chain.
    #[test]
    fn gaussian_block_estimate_dominates_optimum(
        file_size in 4u64..3_000,
        receivers in 1u32..60,
        p in 0.1f64..0.9,
    ) {
        let span = n_tilde(receivers);
        let admissible = min_k_admissible(span, p).unwrap();
        prop_assume!(file_size > admissible);
        let opt = gaussian_completion_opt(file_size, receivers, p).unwrap();
        let mut previous: Option<f64> = None;
        for window in divisors(file_size).into_iter().filter(|&k| k >= admissible) {
            let blocked = gaussian_completion_file(file_size, window, receivers, p).unwrap();
            if window == file_size {
                prop_assert!((blocked - opt).abs() <= 1e-9 * opt);
            } else {
                prop_assert!(blocked > opt);
            }
            if let Some(prev) = previous {
                prop_assert!(blocked < prev, "not decreasing at K = {}", window);
            }
            previous = Some(blocked);
        }
    }

    /// Completion time grows with the receiver count and shrinks with the
    /// connectivity probability.
    #[test]
    fn completion_monotone(n in 1u32..40, p in 0.15f64..0.95) {
        let base = expected_completion_full(60, n, p, DEFAULT_TAIL_TOL).unwrap();
        let more_receivers = expected_completion_full(60, n + 5, p, DEFAULT_TAIL_TOL).unwrap();
        let better_channel =
            expected_completion_full(60, n, (p + 0.05).min(1.0), DEFAULT_TAIL_TOL).unwrap();
        prop_assert!(more_receivers >= base);
        prop_assert!(better_channel <= base);
    }
}

/// Innovation odds: against a rank-r decoder, a uniformly random packet is
/// non-innovative with probability 256^(r - K).
#[test]
fn innovation_probability_matches_subspace_share() {
    let mut rng = ChaCha8Rng::seed_from_u64(1812);
    let window = 2;
    // Build a rank-1 state.
    let template = loop {
        let coeffs = random_coefficients(window, &mut rng);
        if coeffs.iter().any(|c| !c.is_zero()) {
            break coeffs;
        }
    };
    let samples = 40_000u32;
    let mut non_innovative = 0u32;
    for _ in 0..samples {
        let mut decoder = DecoderState::new(window);
        let seed_packet = rlnc_broadcast::codec::CodedPacket {
            coefficients: template.clone(),
            payload: vec![],
        };
        assert!(decoder.absorb(&seed_packet).unwrap().innovative);
        let probe = rlnc_broadcast::codec::CodedPacket {
            coefficients: random_coefficients(window, &mut rng),
            payload: vec![],
        };
        if !decoder.absorb(&probe).unwrap().innovative {
            non_innovative += 1;
        }
    }
    let expected = 256f64.powi(1 - window as i32);
    let rate = non_innovative as f64 / samples as f64;
    let se = (expected * (1.0 - expected) / samples as f64).sqrt();
    assert!(
        (rate - expected).abs() <= 3.0 * se,
        "rate {rate:.6} vs {expected:.6} (3se {:.6})",
        3.0 * se
    );
}

/// The real-valued window bound behind the divisor rounding settles as the
/// file grows, so the solved window stays flat up to divisor granularity.
#[test]
fn min_window_bound_converges_across_file_sizes() {
    let bounds: Vec<f64> = [8_000u64, 10_000, 12_000, 14_000]
        .iter()
        .map(|&f| {
            min_coding_window(&MinKQuery::new(f, 50, 0.6, 0.05).unwrap())
                .unwrap()
                .window_lower_bound
        })
        .collect();
    for pair in bounds.windows(2) {
        assert!(
            (pair[1] - pair[0]).abs() / pair[0] < 0.15,
            "bound jumped: {pair:?}"
        );
    }
    assert!(bounds.iter().all(|b| *b > 400.0 && *b < 600.0), "{bounds:?}");
}
