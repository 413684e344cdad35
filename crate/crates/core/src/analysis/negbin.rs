//! Negative-binomial completion-time model.
//!
//! A receiver on a Bernoulli channel with success probability `p` needs a
//! random number of extra slots (failures) before it has collected `r`
//! packets. Those failure counts are negative binomial, and the expected
//! completion time of a broadcast to `N` receivers is driven by the maximum
//! of `N` i.i.d. copies.

use super::AnalysisError;

/// Default truncation tolerance for the infinite tail series.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Negative binomial law for the number of failed slots before `successes`
/// packets are received on a channel with per-slot success probability
/// `success_prob`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegBinModel {
    successes: u64,
    success_prob: f64,
}

impl NegBinModel {
    pub fn new(successes: u64, success_prob: f64) -> Result<Self, AnalysisError> {
        if successes == 0 {
            return Err(AnalysisError::NonPositive { name: "successes" });
        }
        if !(success_prob > 0.0 && success_prob <= 1.0) {
            return Err(AnalysisError::ProbabilityOutOfRange {
                value: success_prob,
                interval: "(0, 1]",
            });
        }
        Ok(Self {
            successes,
            success_prob,
        })
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn success_prob(&self) -> f64 {
        self.success_prob
    }

    /// Probability of exactly `failures` failed slots:
    /// `C(x + r - 1, x) * p^r * (1 - p)^x`.
    ///
    /// Evaluated through log-gamma so it stays finite for `r` up to 1e5 and
    /// beyond.
    pub fn pmf(&self, failures: u64) -> f64 {
        let p = self.success_prob;
        if p == 1.0 {
            return if failures == 0 { 1.0 } else { 0.0 };
        }
        let r = self.successes as f64;
        let x = failures as f64;
        let log_comb = libm::lgamma(x + r) - libm::lgamma(x + 1.0) - libm::lgamma(r);
        (log_comb + r * p.ln() + x * (1.0 - p).ln()).exp()
    }

    /// Cumulative probability of at most `failures` failed slots.
    pub fn cdf(&self, failures: u64) -> f64 {
        let mut acc = 0.0;
        for (x, pmf) in self.pmf_iter().enumerate() {
            acc += pmf;
            if x as u64 >= failures {
                break;
            }
        }
        acc.min(1.0)
    }

    /// Closed-form mean of the failure count, `r (1 - p) / p`.
    pub fn mean_failures(&self) -> f64 {
        let p = self.success_prob;
        self.successes as f64 * (1.0 - p) / p
    }

    /// Closed-form standard deviation of the failure count.
    pub fn std_dev_failures(&self) -> f64 {
        let p = self.success_prob;
        (self.successes as f64 * (1.0 - p)).sqrt() / p
    }

    /// Iterator over `pmf(0), pmf(1), ...` using the stable log-space
    /// recurrence `ln f(x+1) = ln f(x) + ln(1-p) + ln((x+r)/(x+1))`, which
    /// avoids the underflow of `p^r` in linear space.
    pub(crate) fn pmf_iter(&self) -> PmfIter {
        PmfIter {
            log_pmf: self.successes as f64 * self.success_prob.ln(),
            log_q: (1.0 - self.success_prob).ln(),
            r: self.successes as f64,
            x: 0,
            degenerate: self.success_prob == 1.0,
        }
    }
}

pub(crate) struct PmfIter {
    log_pmf: f64,
    log_q: f64,
    r: f64,
    x: u64,
    degenerate: bool,
}

impl Iterator for PmfIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.degenerate {
            let value = if self.x == 0 { 1.0 } else { 0.0 };
            self.x += 1;
            return Some(value);
        }
        let value = self.log_pmf.exp();
        let x = self.x as f64;
        self.log_pmf += self.log_q + ((x + self.r) / (x + 1.0)).ln();
        self.x += 1;
        Some(value)
    }
}

/// Expected number of slots to deliver a whole generation of `file_size`
/// packets to every one of `receivers` when coding spans the entire file:
/// `F + sum_{z >= 0} (1 - F_X(z)^N)` with `X ~ NegBin(F, p)`.
///
/// The series is truncated once the summand falls below `tail_tol` *and* `z`
/// has passed the mean plus ten standard deviations of `X`.
pub fn expected_completion_full(
    file_size: u64,
    receivers: u32,
    p: f64,
    tail_tol: f64,
) -> Result<f64, AnalysisError> {
    if file_size == 0 {
        return Err(AnalysisError::NonPositive { name: "file_size" });
    }
    if receivers == 0 {
        return Err(AnalysisError::NonPositive { name: "receivers" });
    }
    if !(tail_tol > 0.0) {
        return Err(AnalysisError::NonPositive { name: "tail_tol" });
    }
    let model = NegBinModel::new(file_size, p)?;
    if p == 1.0 {
        return Ok(file_size as f64);
    }

    let cutoff = model.mean_failures() + 10.0 * model.std_dev_failures();
    let n_exp = receivers as i32;

    // Once the pmf falls this low the accumulated cdf is saturated to
    // machine precision and the remaining summands are pure rounding noise.
    const PMF_EXHAUSTED: f64 = 1e-18;

    // Compensated accumulation of the cdf keeps the survival term accurate
    // deep in the upper tail.
    let mut cdf = 0.0;
    let mut comp = 0.0;
    let mut tail_sum = 0.0;
    for (z, pmf) in model.pmf_iter().enumerate() {
        let y = pmf - comp;
        let t = cdf + y;
        comp = (t - cdf) - y;
        cdf = t;

        let survival = 1.0 - cdf.min(1.0).powi(n_exp);
        tail_sum += survival;
        if z as f64 > cutoff && (survival < tail_tol || pmf < PMF_EXHAUSTED) {
            break;
        }
    }
    Ok(file_size as f64 + tail_sum)
}

/// Block-decomposition estimate of the file completion time under the
/// balanced scheduling heuristic: `(F / K) * E[T_K]`.
pub fn expected_completion_blocks(
    file_size: u64,
    window: u64,
    receivers: u32,
    p: f64,
) -> Result<f64, AnalysisError> {
    if window == 0 {
        return Err(AnalysisError::NonPositive { name: "window" });
    }
    if file_size == 0 || file_size % window != 0 {
        return Err(AnalysisError::NonDivisorWindow { file_size, window });
    }
    let blocks = (file_size / window) as f64;
    Ok(blocks * expected_completion_full(window, receivers, p, DEFAULT_TAIL_TOL)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_zero_failures_is_p_to_the_r() {
        let model = NegBinModel::new(20, 0.3).unwrap();
        let expect = (20.0f64 * 0.3f64.ln()).exp();
        assert!((model.pmf(0) - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn pmf_hand_evaluated_point() {
        // r = 5, p = 0.5, x = 1: C(5,1) * 0.5^5 * 0.5 = 5/64.
        let model = NegBinModel::new(5, 0.5).unwrap();
        assert!((model.pmf(1) - 0.078125).abs() < 1e-12);
    }

    #[test]
    fn pmf_normalizes_under_truncation_rule() {
        let model = NegBinModel::new(10, 0.3).unwrap();
        let cutoff = model.mean_failures() + 10.0 * model.std_dev_failures();
        let mut total = 0.0;
        for (x, pmf) in model.pmf_iter().enumerate() {
            total += pmf;
            if pmf < DEFAULT_TAIL_TOL && x as f64 > cutoff {
                break;
            }
        }
        assert!((1.0 - total).abs() <= 1e-9, "sum = {total}");
    }

    #[test]
    fn pmf_matches_iterator_for_large_r() {
        let model = NegBinModel::new(100_000, 0.4).unwrap();
        let direct: Vec<f64> = (0..5).map(|x| model.pmf(150_000 + x)).collect();
        let from_iter: Vec<f64> = model.pmf_iter().skip(150_000).take(5).collect();
        for (a, b) in direct.iter().zip(&from_iter) {
            assert!((a - b).abs() <= 1e-8 * a.abs().max(1e-300), "{a} vs {b}");
        }
    }

    #[test]
    fn empirical_mean_matches_closed_form() {
        for (r, p) in [(7u64, 0.35), (100, 0.8), (100_000, 0.6)] {
            let model = NegBinModel::new(r, p).unwrap();
            let cutoff = model.mean_failures() + 12.0 * model.std_dev_failures();
            let mut mean = 0.0;
            for (x, pmf) in model.pmf_iter().enumerate() {
                mean += x as f64 * pmf;
                if pmf < 1e-16 && x as f64 > cutoff {
                    break;
                }
            }
            let closed = model.mean_failures();
            assert!(
                (mean - closed).abs() / closed < 1e-9,
                "r={r} p={p}: {mean} vs {closed}"
            );
        }
    }

    #[test]
    fn degenerate_channel_is_a_point_mass() {
        let model = NegBinModel::new(12, 1.0).unwrap();
        assert_eq!(model.pmf(0), 1.0);
        assert_eq!(model.pmf(3), 0.0);
        assert_eq!(model.cdf(0), 1.0);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(NegBinModel::new(0, 0.5).is_err());
        assert!(NegBinModel::new(5, 0.0).is_err());
        assert!(NegBinModel::new(5, 1.2).is_err());
        assert!(expected_completion_full(100, 1, 0.0, 1e-12).is_err());
    }

    #[test]
    fn single_receiver_completion_is_f_over_p() {
        let got = expected_completion_full(100, 1, 0.5, DEFAULT_TAIL_TOL).unwrap();
        assert!((got - 200.0).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn perfect_channel_completion_is_exactly_f() {
        assert_eq!(
            expected_completion_full(100, 10, 1.0, DEFAULT_TAIL_TOL).unwrap(),
            100.0
        );
    }

    #[test]
    fn block_decomposition_reduces_to_full_when_single_block() {
        let full = expected_completion_full(500, 6, 0.2, DEFAULT_TAIL_TOL).unwrap();
        let blocks = expected_completion_blocks(500, 500, 6, 0.2).unwrap();
        assert_eq!(full, blocks);
    }

    #[test]
    fn block_decomposition_exact_for_single_receiver() {
        let got = expected_completion_blocks(100, 50, 1, 0.5).unwrap();
        assert!((got - 200.0).abs() < 1e-6);
    }

    #[test]
    fn block_decomposition_rejects_non_divisor() {
        assert_eq!(
            expected_completion_blocks(100, 33, 4, 0.5),
            Err(AnalysisError::NonDivisorWindow {
                file_size: 100,
                window: 33
            })
        );
    }

    #[test]
    fn completion_monotone_in_receivers_and_prob() {
        let mut prev = 0.0;
        for n in 1..=50 {
            let v = expected_completion_full(50, n, 0.4, DEFAULT_TAIL_TOL).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for p in [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8] {
            let v = expected_completion_full(50, 8, p, DEFAULT_TAIL_TOL).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }
}
