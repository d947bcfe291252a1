//! Deterministic inputs shared by the benchmarks.

use num_complex::Complex64;
use opa_core::CoeffSeries;

/// Degree-`d` polynomial with a dominant constant term, so it has no zeros
/// in the closed disc and every Gram system is well conditioned.
pub fn test_polynomial(d: usize) -> CoeffSeries {
    let coeffs = (0..=d)
        .map(|k| {
            if k == 0 {
                Complex64::new(2.0, 0.0)
            } else {
                let t = k as f64;
                Complex64::new((1.3 * t).sin(), (0.7 * t).cos()) / (t * t + 1.0)
            }
        })
        .collect();
    CoeffSeries::polynomial(coeffs)
}

/// Smooth series of truncation degree `n` with geometrically decaying
/// coefficients, used as an exponent.
pub fn decaying_series(n: usize) -> CoeffSeries {
    let coeffs = (0..=n).map(|k| Complex64::from_polar(0.8f64.powi(k as i32), 0.3 * k as f64)).collect();
    CoeffSeries::polynomial(coeffs)
}
