//! Truncated power series and polynomials with complex coefficients.
//!
//! A [`CoeffSeries`] stores `a_0..=a_N` together with a bound on the H² norm
//! of everything past index `N`. A zero bound marks an exact polynomial.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid;

/// Truncation degree used by [`multiply`] when neither operand is longer.
pub const DEFAULT_TRUNCATION: usize = 256;

/// Degree above which [`exp_series`] switches from the recurrence to the
/// spectral route.
pub const EXP_RECURRENCE_MAX: usize = 512;

/// Initial and maximal grid sizes for [`zero_free_on_closed_disc`].
pub const ZERO_FREE_GRID_MIN: usize = 1 << 14;
pub const ZERO_FREE_GRID_MAX: usize = 1 << 20;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries {
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl CoeffSeries {
    /// Checked constructor. `coeffs` must be nonempty and finite and
    /// `tail_bound` finite and nonnegative.
    pub fn new(coeffs: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("coefficient vector is empty".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        if !(tail_bound.is_finite() && tail_bound >= 0.0) {
            return Err(Error::InvalidInput(format!("tail_bound {tail_bound} must be finite and nonnegative")));
        }
        Ok(Self { coeffs, tail_bound })
    }

    /// Exact polynomial. An empty vector is read as the zero polynomial.
    pub fn polynomial(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs, tail_bound: 0.0 }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn zeros(n: usize) -> Self {
        Self::polynomial(vec![ZERO; n + 1])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ZERO; k + 1];
        c[k] = ONE;
        Self::polynomial(c)
    }

    pub(crate) fn from_parts(coeffs: Vec<Complex64>, tail_bound: f64) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs, tail_bound }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn truncation_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_exact(&self) -> bool {
        self.tail_bound == 0.0
    }

    /// Coefficient `a_k`, zero past the stored range.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Index of the last nonzero stored coefficient, `None` if all vanish.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    /// True when the stored coefficients are all zero and the tail is exact.
    pub fn is_zero(&self) -> bool {
        self.degree().is_none() && self.is_exact()
    }

    pub fn norm_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// H² norm of the stored part.
    pub fn norm_h2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ k|a_k|`, a bound for `|d/dθ a(e^{iθ})|`.
    pub fn derivative_bound(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, c)| k as f64 * c.norm()).sum()
    }

    /// `Σ k²|a_k|`, a bound for the second θ-derivative on the circle.
    pub fn second_derivative_bound(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, c)| (k * k) as f64 * c.norm()).sum()
    }

    /// Drops trailing zero coefficients, keeping at least one entry.
    pub fn trimmed(&self) -> Self {
        let len = self.degree().map_or(1, |d| d + 1);
        Self::from_parts(self.coeffs[..len].to_vec(), self.tail_bound)
    }

    /// Keeps `a_0..=a_n`. Discarded stored coefficients are added to the
    /// tail bound; shorter series are zero-padded.
    pub fn truncate(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        let mut tail = self.tail_bound;
        if coeffs.len() > n + 1 {
            let dropped: f64 = coeffs[n + 1..].iter().map(|c| c.norm_sqr()).sum();
            tail += dropped.sqrt();
            coeffs.truncate(n + 1);
        } else {
            coeffs.resize(n + 1, ZERO);
        }
        Self::from_parts(coeffs, tail)
    }

    /// Same coefficients with the tail bound cleared.
    pub fn to_exact(&self) -> Self {
        Self::from_parts(self.coeffs.clone(), 0.0)
    }

    /// `c + a`.
    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        Self::from_parts(coeffs, self.tail_bound)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts(self.coeffs.iter().map(|a| a * c).collect(), self.tail_bound * c.norm())
    }

    /// Coefficients of `z·a'(z)`, i.e. `k a_k`. The tail bound is not
    /// carried over.
    pub fn z_derivative(&self) -> Self {
        Self::from_parts(self.coeffs.iter().enumerate().map(|(k, c)| c * k as f64).collect(), 0.0)
    }

    /// Values on the uniform grid of size `g`.
    pub fn circle_values(&self, g: usize) -> Vec<Complex64> {
        grid::circle_values(&self.coeffs, g)
    }

    /// Values on the circle of radius `r` sampled at the uniform grid of size `g`.
    pub fn circle_values_at_radius(&self, r: f64, g: usize) -> Vec<Complex64> {
        grid::circle_values_scaled(&self.coeffs, r, g)
    }
}

fn combine(a: &CoeffSeries, b: &CoeffSeries, sign: f64) -> CoeffSeries {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n).map(|k| a.coeff(k) + b.coeff(k) * sign).collect();
    CoeffSeries::from_parts(coeffs, a.tail_bound + b.tail_bound)
}

impl Add for &CoeffSeries {
    type Output = CoeffSeries;
    fn add(self, rhs: &CoeffSeries) -> CoeffSeries {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &CoeffSeries {
    type Output = CoeffSeries;
    fn sub(self, rhs: &CoeffSeries) -> CoeffSeries {
        combine(self, rhs, -1.0)
    }
}

impl Neg for &CoeffSeries {
    type Output = CoeffSeries;
    fn neg(self) -> CoeffSeries {
        self.scale(-ONE)
    }
}

impl Mul<Complex64> for &CoeffSeries {
    type Output = CoeffSeries;
    fn mul(self, rhs: Complex64) -> CoeffSeries {
        self.scale(rhs)
    }
}

impl Mul for &CoeffSeries {
    type Output = CoeffSeries;
    fn mul(self, rhs: &CoeffSeries) -> CoeffSeries {
        multiply(self, rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffSeriesRepr {
    coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    tail_bound: f64,
}

impl Serialize for CoeffSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffSeriesRepr { coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(), tail_bound: self.tail_bound }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CoeffSeriesRepr::deserialize(d)?;
        let coeffs = repr.coeffs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        CoeffSeries::new(coeffs, repr.tail_bound).map_err(serde::de::Error::custom)
    }
}

/// Cauchy product.
///
/// The output degree is the exact product degree when both inputs are exact,
/// never below either input's truncation degree, and capped at
/// [`DEFAULT_TRUNCATION`] unless an input is longer. An inexact operand caps
/// the degree at its own truncation degree, since later coefficients are
/// unknown.
pub fn multiply(a: &CoeffSeries, b: &CoeffSeries) -> CoeffSeries {
    let na = a.truncation_degree();
    let nb = b.truncation_degree();
    let natural = a.degree().unwrap_or(0) + b.degree().unwrap_or(0);
    let mut n = natural.max(na).max(nb).min(DEFAULT_TRUNCATION.max(na).max(nb));
    if !a.is_exact() {
        n = n.min(na);
    }
    if !b.is_exact() {
        n = n.min(nb);
    }
    multiply_to(a, b, n)
}

/// Cauchy product truncated at degree `n`.
///
/// Tail bound: `‖a‖₁·tail(b) + ‖b‖₁·tail(a) + tail(a)·tail(b)` plus the
/// exact ℓ² mass of computed coefficients past `n`. The ℓ¹ norm dominates the
/// multiplier norm on H², so the first two terms are rigorous; the product of
/// two tails has no H² bound in general and the last term is an estimate.
pub fn multiply_to(a: &CoeffSeries, b: &CoeffSeries, n: usize) -> CoeffSeries {
    let la = a.degree().map_or(1, |d| d + 1);
    let lb = b.degree().map_or(1, |d| d + 1);
    let mut full = grid::convolve(&a.coeffs[..la], &b.coeffs[..lb]);
    let mut dropped = 0.0;
    if full.len() > n + 1 {
        dropped = full[n + 1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        full.truncate(n + 1);
    }
    full.resize(n + 1, ZERO);
    let tail = a.norm_l1() * b.tail_bound + b.norm_l1() * a.tail_bound + a.tail_bound * b.tail_bound + dropped;
    CoeffSeries::from_parts(full, tail)
}

/// `exp(a)` truncated at the truncation degree of `a`.
///
/// Degrees up to [`EXP_RECURRENCE_MAX`] use the recurrence
/// `k b_k = Σ_{j=1}^k j a_j b_{k−j}`, `b_0 = exp(a_0)`. Larger degrees take
/// the spectral route: exponentiate samples on an oversampled circle grid
/// and transform back. Both routes set the tail bound to a spectral estimate
/// of the discarded coefficients plus a first-order term for the input tail.
pub fn exp_series(a: &CoeffSeries) -> CoeffSeries {
    let n = a.truncation_degree();
    let (coeffs, spectral_tail) =
        if n <= EXP_RECURRENCE_MAX { (exp_recurrence(a.coeffs()), exp_spectral_tail(a.coeffs(), n)) } else { exp_spectral(a.coeffs(), n) };
    let sup = (a.coeff(0).re + a.norm_l1()).exp();
    let tail = spectral_tail + if a.is_exact() { 0.0 } else { a.tail_bound * sup };
    CoeffSeries::from_parts(coeffs, tail)
}

/// Recurrence route of [`exp_series`], exposed for cross-checks.
pub fn exp_recurrence(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let ja: Vec<Complex64> = a.iter().enumerate().map(|(j, c)| c * j as f64).collect();
    let mut b = vec![ZERO; n + 1];
    b[0] = a[0].exp();
    for k in 1..=n {
        let mut s = ZERO;
        for j in 1..=k {
            s += ja[j] * b[k - j];
        }
        b[k] = s / k as f64;
    }
    b
}

/// Spectral route of [`exp_series`]: coefficients `0..=n` and a tail estimate.
pub fn exp_spectral(a: &[Complex64], n: usize) -> (Vec<Complex64>, f64) {
    let g = grid::next_pow2(2 * (n + 1)).max(64);
    let mut vals = grid::circle_values(a, g);
    for v in &mut vals {
        *v = v.exp();
    }
    let spec = grid::fourier_coefficients(&vals);
    let mut coeffs: Vec<Complex64> = spec[..(n + 1).min(g)].to_vec();
    coeffs.resize(n + 1, ZERO);
    // Positive frequencies past n are truncated mass; negative frequencies
    // should vanish for an analytic function, so their size measures
    // aliasing.
    let truncated: f64 = spec[(n + 1).min(g / 2)..g / 2].iter().map(|c| c.norm_sqr()).sum();
    let aliased: f64 = spec[g / 2..].iter().map(|c| c.norm_sqr()).sum();
    (coeffs, (truncated + aliased).sqrt())
}

fn exp_spectral_tail(a: &[Complex64], n: usize) -> f64 {
    let g = grid::next_pow2(4 * (n + 1)).max(64);
    let mut vals = grid::circle_values(a, g);
    for v in &mut vals {
        *v = v.exp();
    }
    let spec = grid::fourier_coefficients(&vals);
    spec[n + 1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Horner evaluation of the stored coefficients.
pub fn evaluate(a: &CoeffSeries, z: Complex64) -> Complex64 {
    a.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

/// `a(rz)`: coefficient `k` scaled by `r^k`.
pub fn dilate(a: &CoeffSeries, r: f64) -> Result<CoeffSeries> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidParameter(format!("dilation radius {r} outside (0, 1]")));
    }
    let mut rk = 1.0;
    let coeffs = a
        .coeffs
        .iter()
        .map(|c| {
            let out = c * rk;
            rk *= r;
            out
        })
        .collect();
    let tail = a.tail_bound * r.powi(a.coeffs.len() as i32);
    Ok(CoeffSeries::from_parts(coeffs, tail))
}

/// How a [`ZeroFreeReport`] reached its verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// `min|p| > L·δθ` with `L = Σ k|p_k|`.
    FirstOrder,
    /// `|p(θ_j)| > |p′(θ_j)|·δθ + L₂·δθ²/2` at every node, `L₂ = Σ k²|p_k|`.
    SecondOrder,
    /// A grid sample vanished to rounding precision.
    SampledZero,
    /// Nonzero constant.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroFreeReport {
    pub zero_free: bool,
    pub winding_number: i64,
    pub min_modulus_on_circle: f64,
    pub grid_size: usize,
    pub certificate: Certificate,
}

/// Certifies that an exact polynomial has no zeros in the closed unit disc.
///
/// On each grid size from [`ZERO_FREE_GRID_MIN`] (or twice the degree, if
/// larger) up to [`ZERO_FREE_GRID_MAX`], the circle is covered by cells of
/// width `δθ` on which `p` provably stays in a disc around its node value
/// that excludes 0. Then no zero lies on the circle, the unwrapped phase is
/// exact, and by the argument principle the winding number counts the zeros
/// inside.
pub fn zero_free_on_closed_disc(p: &CoeffSeries) -> Result<ZeroFreeReport> {
    if !p.is_exact() {
        return Err(Error::InvalidInput("zero-freeness needs an exact polynomial".into()));
    }
    let Some(deg) = p.degree() else {
        return Err(Error::InvalidInput("polynomial is identically zero".into()));
    };
    let p = p.trimmed();
    if deg == 0 {
        return Ok(ZeroFreeReport {
            zero_free: true,
            winding_number: 0,
            min_modulus_on_circle: p.coeffs[0].norm(),
            grid_size: 1,
            certificate: Certificate::Constant,
        });
    }
    let l1 = p.derivative_bound();
    let l2 = p.second_derivative_bound();
    let scale = p.norm_l1();
    let dp = p.z_derivative();
    let mut g = ZERO_FREE_GRID_MIN.max(grid::next_pow2(2 * (deg + 1))).min(ZERO_FREE_GRID_MAX);
    loop {
        let vals = p.circle_values(g);
        let min_mod = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let rounding = 64.0 * f64::EPSILON * scale * (g as f64).log2();
        if min_mod <= rounding {
            return Ok(ZeroFreeReport {
                zero_free: false,
                winding_number: winding(&vals),
                min_modulus_on_circle: min_mod,
                grid_size: g,
                certificate: Certificate::SampledZero,
            });
        }
        let dt = TAU / g as f64;
        let certificate = if min_mod > l1 * dt + rounding {
            Some(Certificate::FirstOrder)
        } else {
            let dvals = dp.circle_values(g);
            let ok = vals.iter().zip(&dvals).all(|(v, d)| v.norm() > d.norm() * dt + 0.5 * l2 * dt * dt + rounding);
            ok.then_some(Certificate::SecondOrder)
        };
        if let Some(certificate) = certificate {
            let w = winding(&vals);
            return Ok(ZeroFreeReport { zero_free: w == 0, winding_number: w, min_modulus_on_circle: min_mod, grid_size: g, certificate });
        }
        if g >= ZERO_FREE_GRID_MAX {
            return Err(Error::Indeterminate { grid_size: g, min_modulus: min_mod, margin: l1 * dt });
        }
        g *= 2;
    }
}

/// Winding number of the closed polygon through `vals` about 0.
pub fn winding(vals: &[Complex64]) -> i64 {
    let mut total = 0.0;
    for (j, v) in vals.iter().enumerate() {
        let next = vals[(j + 1) % vals.len()];
        total += (next / v).arg();
    }
    (total / TAU).round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &CoeffSeries, b: &[Complex64], tol: f64) -> bool {
        a.coeffs().len() == b.len() && a.coeffs().iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn difference_of_squares() {
        let p = multiply(&CoeffSeries::from_real(&[1.0, 1.0]), &CoeffSeries::from_real(&[1.0, -1.0]));
        assert!(close(&p, &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)], 0.0));
        assert_eq!(p.tail_bound(), 0.0);
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let a = CoeffSeries::polynomial(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)]);
        let p = multiply(&a, &CoeffSeries::one());
        assert_eq!(p, a);
    }

    #[test]
    fn square_of_one_minus_z_padded() {
        let a = CoeffSeries::from_real(&[1.0, -1.0, 0.0]);
        let p = multiply(&a, &a);
        assert!(close(&p, &[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)], 0.0));
    }

    #[test]
    fn inexact_operand_limits_degree_and_propagates_tail() {
        let a = CoeffSeries::new(vec![c(1.0, 0.0), c(0.5, 0.0)], 0.1).unwrap();
        let b = CoeffSeries::from_real(&[2.0, 0.0, 0.0, 1.0]);
        let p = multiply(&a, &b);
        assert_eq!(p.truncation_degree(), 1);
        // ‖b‖₁·0.1 plus the dropped mass of (2 + z + z³ + z⁴/2).
        let dropped = (1.0f64 + 0.25).sqrt();
        assert!((p.tail_bound() - (0.3 + dropped)).abs() < 1e-12);
    }

    #[test]
    fn exp_of_z() {
        let e = exp_series(&CoeffSeries::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0]));
        let mut fact = 1.0;
        for k in 0..5 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e.coeff(k) - c(1.0 / fact, 0.0)).norm() < 1e-15);
        }
        assert!(e.tail_bound() > 0.0 && e.tail_bound() < 0.01);
    }

    #[test]
    fn exp_of_zero_and_constant_shift() {
        let e = exp_series(&CoeffSeries::from_real(&[0.0]));
        assert!(close(&e, &[c(1.0, 0.0)], 0.0));
        let e = exp_series(&CoeffSeries::from_real(&[2f64.ln(), 0.0, 0.0]));
        assert!(close(&e, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 1e-15));
    }

    #[test]
    fn exp_routes_agree() {
        let a: Vec<Complex64> = (0..=600).map(|k| c(0.8 / (1.0 + k as f64).powi(2), -0.3 / (1.0 + k as f64).powi(3))).collect();
        let rec = exp_recurrence(&a);
        let (spec, tail) = exp_spectral(&a, 600);
        for (x, y) in rec.iter().zip(&spec) {
            assert!((x - y).norm() < 1e-11);
        }
        assert!(tail.is_finite());
    }

    #[test]
    fn evaluate_examples() {
        let i = c(0.0, 1.0);
        assert_eq!(evaluate(&CoeffSeries::from_real(&[1.0, -1.0]), i), c(1.0, -1.0));
        let a = CoeffSeries::polynomial(vec![c(0.3, -0.2), c(5.0, 1.0)]);
        assert_eq!(evaluate(&a, c(0.0, 0.0)), c(0.3, -0.2));
        assert_eq!(evaluate(&CoeffSeries::from_real(&[1.0, 1.0, 1.0]), c(1.0, 0.0)), c(3.0, 0.0));
    }

    #[test]
    fn dilate_examples() {
        let d = dilate(&CoeffSeries::from_real(&[1.0, 1.0]), 0.5).unwrap();
        assert!(close(&d, &[c(1.0, 0.0), c(0.5, 0.0)], 0.0));
        let d = dilate(&CoeffSeries::from_real(&[0.0, 0.0, 4.0]), 0.5).unwrap();
        assert!(close(&d, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 0.0));
        let a = CoeffSeries::new(vec![c(1.0, 1.0), c(2.0, 0.0)], 0.25).unwrap();
        assert_eq!(dilate(&a, 1.0).unwrap(), a);
        assert!((dilate(&a, 0.5).unwrap().tail_bound() - 0.0625).abs() < 1e-16);
        assert!(matches!(dilate(&a, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(dilate(&a, 1.5), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn zero_free_examples() {
        let r = zero_free_on_closed_disc(&CoeffSeries::from_real(&[1.0, -0.5])).unwrap();
        assert!(r.zero_free);
        assert_eq!(r.winding_number, 0);
        let r = zero_free_on_closed_disc(&CoeffSeries::from_real(&[1.0, -2.0])).unwrap();
        assert!(!r.zero_free);
        assert_eq!(r.winding_number, 1);
        let r = zero_free_on_closed_disc(&CoeffSeries::from_real(&[1.0, -1.0])).unwrap();
        assert!(!r.zero_free);
        assert_eq!(r.certificate, Certificate::SampledZero);
    }

    #[test]
    fn zero_free_rejects_zero_and_inexact() {
        assert!(matches!(zero_free_on_closed_disc(&CoeffSeries::zeros(3)), Err(Error::InvalidInput(_))));
        let a = CoeffSeries::new(vec![c(1.0, 0.0)], 1e-3).unwrap();
        assert!(matches!(zero_free_on_closed_disc(&a), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn off_grid_circle_root_is_indeterminate() {
        // Root at e^{i·0.1234567}, between grid nodes at every size.
        let w = Complex64::from_polar(1.0, 0.123_456_7);
        let p = CoeffSeries::polynomial(vec![-w, c(1.0, 0.0)]);
        assert!(matches!(zero_free_on_closed_disc(&p), Err(Error::Indeterminate { .. })));
    }

    #[test]
    fn json_round_trip() {
        let a = CoeffSeries::new(vec![c(1.0 / 3.0, -0.1), c(2.0, 0.0)], 1e-9).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let b: CoeffSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<CoeffSeries>(r#"{"coeffs": [], "tail_bound": 0}"#).is_err());
        assert!(serde_json::from_str::<CoeffSeries>(r#"{"coeffs": [[1,0]], "tail_bound": -1}"#).is_err());
    }
}
