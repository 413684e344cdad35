//! Scalar numeric helpers shared by the analysis routines.

use std::f64::consts::SQRT_2;

/// Standard normal cumulative distribution function.
#[inline]
pub(crate) fn normal_cdf(z: f64) -> f64 {
    // erfc keeps full precision in the tails where 1 - erf would cancel.
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Composite Simpson rule over `[a, b]`.
///
/// `panels` is rounded up to the next even count; the caller picks a panel
/// budget large enough for its error target.
pub(crate) fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = {
        let p = panels.max(2);
        p + p % 2
    };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(a + h * i as f64);
    }
    acc * h / 3.0
}
