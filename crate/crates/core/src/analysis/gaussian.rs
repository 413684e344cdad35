//! Gaussian order-statistic approximation of the completion time.
//!
//! For a window of `K` packets on a channel with success probability `p`, the
//! per-receiver slot count is approximately normal with `mu = K / p` and
//! `sigma = sqrt(K (1 - p)) / p`. The expected maximum over `N` receivers is
//! then `mu + n_tilde * sigma - sigma * A`, where `n_tilde` truncates the
//! support to `mu ± n_tilde * sigma` and `A` is the integral of the truncated
//! cdf raised to the `N`-th power.

use std::f64::consts::SQRT_2;

use super::special::{normal_cdf, simpson};
use super::AnalysisError;

/// Joint-coverage threshold used when sizing the truncation span: the
/// `N`-receiver maximum must fall inside `mu ± n_tilde * sigma` with at least
/// this probability.
pub const TAIL_CONFIDENCE: f64 = 0.99;

/// Panel budget for the outer quadrature; sized so the absolute error is
/// below 1e-8 across the supported receiver range.
const QUADRATURE_PANELS: usize = 4096;

/// Smallest positive integer `n` with `erf(n / sqrt(2))^N >= 0.99`.
pub fn n_tilde(receivers: u32) -> u32 {
    n_tilde_with_threshold(receivers, TAIL_CONFIDENCE)
}

/// Same search with a caller-supplied coverage threshold in (0, 1).
pub fn n_tilde_with_threshold(receivers: u32, threshold: f64) -> u32 {
    assert!(receivers >= 1, "receiver count must be positive");
    assert!(
        threshold > 0.0 && threshold < 1.0,
        "coverage threshold must lie in (0, 1)"
    );
    let log_threshold = threshold.ln();
    let mut n = 1u32;
    loop {
        let erf = libm::erf(n as f64 / SQRT_2);
        if erf > 0.0 && receivers as f64 * erf.ln() >= log_threshold {
            return n;
        }
        n += 1;
    }
}

/// Order-statistic correction constant
/// `A = integral_{-n_tilde}^{n_tilde} (Phi(z) - Phi(-n_tilde))^N dz`.
///
/// The inner integral is the closed-form normal cdf difference; only the
/// outer integral is evaluated numerically.
pub fn constant_a(receivers: u32, n_tilde: u32) -> f64 {
    let span = n_tilde as f64;
    let floor = normal_cdf(-span);
    let n_exp = receivers as i32;
    simpson(
        |z| (normal_cdf(z) - floor).max(0.0).powi(n_exp),
        -span,
        span,
        QUADRATURE_PANELS,
    )
}

/// Smallest integer window strictly above `n_tilde^2 * (1 - p)`, the bound
/// that keeps the truncated support positive.
pub fn min_k_admissible(n_tilde: u32, p: f64) -> Result<u64, AnalysisError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(AnalysisError::ProbabilityOutOfRange {
            value: p,
            interval: "(0, 1)",
        });
    }
    let bound = (n_tilde as f64) * (n_tilde as f64) * (1.0 - p);
    Ok(bound.floor() as u64 + 1)
}

/// Bundled Gaussian parameters for one `(F, K, N, p)` configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    /// Mean slots per block, `K / p`.
    pub mu: f64,
    /// Slot deviation per block, `sqrt(K (1 - p)) / p`.
    pub sigma: f64,
    /// Number of blocks, `F / K`.
    pub block_count: u64,
    /// Truncation span in standard deviations.
    pub n_tilde: u32,
    /// Order-statistic correction constant.
    pub a: f64,
}

impl GaussianParams {
    /// Derives and validates the parameter bundle. Requires `0 < p < 1`,
    /// `K | F`, and window admissibility.
    pub fn derive(
        file_size: u64,
        window: u64,
        receivers: u32,
        p: f64,
    ) -> Result<Self, AnalysisError> {
        if receivers == 0 {
            return Err(AnalysisError::NonPositive { name: "receivers" });
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(AnalysisError::ProbabilityOutOfRange {
                value: p,
                interval: "(0, 1)",
            });
        }
        if window == 0 {
            return Err(AnalysisError::NonPositive { name: "window" });
        }
        if file_size == 0 || file_size % window != 0 {
            return Err(AnalysisError::NonDivisorWindow { file_size, window });
        }
        let span = n_tilde(receivers);
        let bound = (span as f64) * (span as f64) * (1.0 - p);
        if window as f64 <= bound {
            return Err(AnalysisError::InadmissibleWindow {
                window,
                bound,
                receivers,
                prob: p,
            });
        }
        let mu = window as f64 / p;
        let sigma = (window as f64 * (1.0 - p)).sqrt() / p;
        debug_assert!(mu - span as f64 * sigma > 0.0);
        Ok(Self {
            mu,
            sigma,
            block_count: file_size / window,
            n_tilde: span,
            a: constant_a(receivers, span),
        })
    }

    /// Expected slots for one block: `mu + n_tilde sigma - sigma A`.
    pub fn block_completion(&self) -> f64 {
        self.mu + self.n_tilde as f64 * self.sigma - self.sigma * self.a
    }

    /// Expected slots for the whole file: `b (mu + n_tilde sigma - sigma A)`.
    pub fn file_completion(&self) -> f64 {
        self.block_count as f64 * self.block_completion()
    }
}

/// Gaussian estimate of the expected slots to deliver one block of `window`
/// packets to every receiver.
pub fn gaussian_completion_block(
    window: u64,
    receivers: u32,
    p: f64,
) -> Result<f64, AnalysisError> {
    if receivers == 0 {
        return Err(AnalysisError::NonPositive { name: "receivers" });
    }
    if p == 1.0 {
        if window == 0 {
            return Err(AnalysisError::NonPositive { name: "window" });
        }
        return Ok(window as f64);
    }
    Ok(GaussianParams::derive(window, window, receivers, p)?.block_completion())
}

/// Gaussian estimate of the expected slots to deliver the whole file when
/// scheduling keeps the blocks in lockstep.
pub fn gaussian_completion_file(
    file_size: u64,
    window: u64,
    receivers: u32,
    p: f64,
) -> Result<f64, AnalysisError> {
    if receivers == 0 {
        return Err(AnalysisError::NonPositive { name: "receivers" });
    }
    if p == 1.0 {
        if window == 0 {
            return Err(AnalysisError::NonPositive { name: "window" });
        }
        if file_size == 0 || file_size % window != 0 {
            return Err(AnalysisError::NonDivisorWindow { file_size, window });
        }
        return Ok(file_size as f64);
    }
    Ok(GaussianParams::derive(file_size, window, receivers, p)?.file_completion())
}

/// Gaussian estimate of the minimum achievable expected completion time,
/// reached when the window spans the whole file:
/// `F / p + sqrt(F (1 - p)) (n_tilde - A) / p`.
pub fn gaussian_completion_opt(
    file_size: u64,
    receivers: u32,
    p: f64,
) -> Result<f64, AnalysisError> {
    if file_size == 0 {
        return Err(AnalysisError::NonPositive { name: "file_size" });
    }
    if receivers == 0 {
        return Err(AnalysisError::NonPositive { name: "receivers" });
    }
    if p == 1.0 {
        return Ok(file_size as f64);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(AnalysisError::ProbabilityOutOfRange {
            value: p,
            interval: "(0, 1)",
        });
    }
    let span = n_tilde(receivers);
    let bound = (span as f64) * (span as f64) * (1.0 - p);
    if file_size as f64 <= bound {
        return Err(AnalysisError::InadmissibleWindow {
            window: file_size,
            bound,
            receivers,
            prob: p,
        });
    }
    let a = constant_a(receivers, span);
    let f = file_size as f64;
    Ok(f / p + (f * (1.0 - p)).sqrt() * (span as f64 - a) / p)
}
