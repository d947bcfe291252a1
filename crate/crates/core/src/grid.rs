//! Uniform circle grids and the FFT plumbing behind them.
//!
//! Grid node `j` of a size-`G` grid is `θ_j = 2πj/G`. Evaluating a
//! polynomial on the grid is an unnormalised inverse DFT of its coefficients
//! folded modulo `G`; the discrete Fourier coefficients of grid samples are
//! the forward DFT divided by `G`.

use std::cell::RefCell;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place forward DFT, `X_k = Σ_j x_j e^{-2πijk/n}`.
pub fn fft_forward(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// In-place unnormalised inverse DFT, `x_j = Σ_k X_k e^{2πijk/n}`.
pub fn fft_inverse(buf: &mut [Complex64]) {
    if buf.len() <= 1 {
        return;
    }
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Angle of node `j` on a size-`g` grid.
pub fn node(j: usize, g: usize) -> f64 {
    TAU * j as f64 / g as f64
}

/// Values `Σ_k c_k r^k e^{ikθ_j}` at the `g` grid nodes. Coefficients of
/// index `≥ g` are folded onto `k mod g`, so the result is exact for any
/// degree.
pub fn circle_values_scaled(coeffs: &[Complex64], r: f64, g: usize) -> Vec<Complex64> {
    assert!(g > 0, "grid size must be positive");
    let mut buf = vec![Complex64::new(0.0, 0.0); g];
    if r == 1.0 {
        for (k, c) in coeffs.iter().enumerate() {
            buf[k % g] += c;
        }
    } else {
        let mut rk = 1.0;
        for (k, c) in coeffs.iter().enumerate() {
            buf[k % g] += c * rk;
            rk *= r;
            if rk == 0.0 {
                break;
            }
        }
    }
    fft_inverse(&mut buf);
    buf
}

pub fn circle_values(coeffs: &[Complex64], g: usize) -> Vec<Complex64> {
    circle_values_scaled(coeffs, 1.0, g)
}

/// Discrete Fourier coefficients `û_k = (1/G) Σ_j u_j e^{-ikθ_j}`, indexed
/// `0..G` (negative frequencies wrap to the upper half).
pub fn fourier_coefficients(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    fft_forward(&mut buf);
    let scale = 1.0 / values.len() as f64;
    for x in &mut buf {
        *x *= scale;
    }
    buf
}

/// Full linear convolution (Cauchy product) of two coefficient vectors.
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 48 || n <= 256 {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, x) in a.iter().enumerate() {
            if *x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let size = next_pow2(n);
    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = vec![Complex64::new(0.0, 0.0); size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    fft_forward(&mut fa);
    fft_forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    fft_inverse(&mut fa);
    let scale = 1.0 / size as f64;
    fa.truncate(n);
    for x in &mut fa {
        *x *= scale;
    }
    fa
}

/// Lagged inner products `r_d = Σ_m f_{m+d} conj(f_m)` for `d = 0..=max_lag`.
pub fn autocorrelation(f: &[Complex64], max_lag: usize) -> Vec<Complex64> {
    let n = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); max_lag + 1];
    if n == 0 {
        return out;
    }
    if (n as u64) * (max_lag as u64 + 1) <= 1 << 16 {
        for (d, o) in out.iter_mut().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for m in 0..n.saturating_sub(d) {
                s += f[m + d] * f[m].conj();
            }
            *o = s;
        }
        return out;
    }
    let size = next_pow2(2 * n);
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    buf[..n].copy_from_slice(f);
    fft_forward(&mut buf);
    for x in &mut buf {
        *x = Complex64::new(x.norm_sqr(), 0.0);
    }
    // Inverse of |F|^2 gives Σ_m f_{m+d} conj(f_m) at index d.
    fft_inverse(&mut buf);
    let scale = 1.0 / size as f64;
    for (d, o) in out.iter_mut().enumerate() {
        if d < n {
            *o = buf[d] * scale;
        }
    }
    out
}

/// Lagged products with a weighted leading factor,
/// `s_d = Σ_m (m+d) f_{m+d} conj(f_m)`.
pub fn weighted_autocorrelation(f: &[Complex64], max_lag: usize) -> Vec<Complex64> {
    let weighted: Vec<Complex64> = f.iter().enumerate().map(|(k, c)| c * k as f64).collect();
    cross_correlation(&weighted, f, max_lag)
}

/// `x_d = Σ_m a_{m+d} conj(b_m)` for `d = 0..=max_lag`.
pub fn cross_correlation(a: &[Complex64], b: &[Complex64], max_lag: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); max_lag + 1];
    if a.is_empty() || b.is_empty() {
        return out;
    }
    if (a.len() as u64) * (max_lag as u64 + 1) <= 1 << 16 {
        for (d, o) in out.iter_mut().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for m in 0..b.len() {
                if m + d < a.len() {
                    s += a[m + d] * b[m].conj();
                }
            }
            *o = s;
        }
        return out;
    }
    let size = next_pow2(a.len() + b.len());
    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = vec![Complex64::new(0.0, 0.0); size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    fft_forward(&mut fa);
    fft_forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y.conj();
    }
    fft_inverse(&mut fa);
    let scale = 1.0 / size as f64;
    for (d, o) in out.iter_mut().enumerate() {
        if d < a.len() {
            *o = fa[d] * scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn circle_values_match_horner() {
        let p = [c(1.0, 0.5), c(-2.0, 0.0), c(0.25, -1.0), c(0.0, 3.0)];
        let vals = circle_values(&p, 8);
        for (j, v) in vals.iter().enumerate() {
            let z = Complex64::from_polar(1.0, node(j, 8));
            let h = p.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a);
            assert!((v - h).norm() < 1e-13);
        }
    }

    #[test]
    fn folding_handles_degree_above_grid() {
        let p: Vec<Complex64> = (0..20).map(|k| c(1.0 / (k + 1) as f64, 0.0)).collect();
        let vals = circle_values(&p, 4);
        for (j, v) in vals.iter().enumerate() {
            let z = Complex64::from_polar(1.0, node(j, 4));
            let h = p.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a);
            assert!((v - h).norm() < 1e-12);
        }
    }

    #[test]
    fn fft_convolution_matches_direct() {
        let a: Vec<Complex64> = (0..300).map(|k| c((k as f64).sin(), (k as f64 * 0.3).cos())).collect();
        let b: Vec<Complex64> = (0..200).map(|k| c((k as f64 * 0.7).cos(), 0.1 * k as f64 / 200.0)).collect();
        let fast = convolve(&a, &b);
        let mut slow = vec![c(0.0, 0.0); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                slow[i + j] += x * y;
            }
        }
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn autocorrelation_paths_agree() {
        let f: Vec<Complex64> = (0..700).map(|k| c((k as f64 * 0.11).sin(), (k as f64 * 0.05).cos())).collect();
        let fast = autocorrelation(&f, 120);
        for d in [0usize, 1, 17, 120] {
            let mut s = c(0.0, 0.0);
            for m in 0..f.len() - d {
                s += f[m + d] * f[m].conj();
            }
            assert!((fast[d] - s).norm() < 1e-9 * s.norm().max(1.0));
        }
    }
}
