//! Finite Blaschke products and inner–outer factorisation of polynomials.
//!
//! The normalised factor for a zero `a ≠ 0` is
//! `b_a(z) = (|a|/a)(a − z)/(1 − āz)`, so `b_a(0) = |a| > 0`; a zero at the
//! origin contributes `z`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffseries::{evaluate, multiply_to, CoeffSeries};
use crate::error::{Error, Result};

/// Roots within this distance of the unit circle are rejected.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Eigenvalues closer than this are merged into one multiple root.
pub const CLUSTER_RADIUS: f64 = 1e-8;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Taylor coefficients of `b_a` up to degree `n`.
fn factor_coeffs(a: Complex64, n: usize) -> Vec<Complex64> {
    let mut c = vec![ZERO; n + 1];
    if a == ZERO {
        if n >= 1 {
            c[1] = ONE;
        }
        return c;
    }
    let m = a.norm();
    c[0] = Complex64::new(m, 0.0);
    // c_k = (|a|/a) ā^{k−1} (|a|² − 1) for k ≥ 1.
    let mut term = Complex64::new(m, 0.0) / a * (m * m - 1.0);
    let ac = a.conj();
    for ck in c.iter_mut().skip(1) {
        *ck = term;
        term *= ac;
    }
    c
}

fn check_zeros(zeros: &[Complex64]) -> Result<()> {
    if let Some(z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
        return Err(Error::InvalidInput(format!("Blaschke zero {z} is not inside the unit disc")));
    }
    Ok(())
}

/// `B(z) = Π b_{z_i}(z)`.
pub fn blaschke_eval(zeros: &[Complex64], z: Complex64) -> Complex64 {
    zeros.iter().map(|&a| if a == ZERO { z } else { Complex64::new(a.norm(), 0.0) / a * (a - z) / (ONE - a.conj() * z) }).product()
}

/// Coefficients of the Blaschke product to degree `n`.
///
/// The tail bound comes from the Cauchy estimate `|c_k| ≤ M_R R^{−k}` on a
/// circle of radius `1 < R < 1/max|z_i|`, where
/// `M_R = R^{m₀} Π (|a|+R)/(1−|a|R)` bounds `|B|` there (`m₀` zeros at the
/// origin). Radii are scanned and the smallest bound kept.
pub fn blaschke_series(zeros: &[Complex64], n: usize) -> Result<CoeffSeries> {
    check_zeros(zeros)?;
    let mut acc = CoeffSeries::polynomial(vec![ONE]).truncate(n);
    for &a in zeros {
        acc = multiply_to(&acc, &CoeffSeries::polynomial(factor_coeffs(a, n)), n);
    }
    let coeffs = acc.into_coeffs();
    let tail = blaschke_tail_bound(zeros, n);
    CoeffSeries::new(coeffs, tail)
}

fn blaschke_tail_bound(zeros: &[Complex64], n: usize) -> f64 {
    let rho = zeros.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rho == 0.0 {
        // z^m: exact once n ≥ m, otherwise the single dropped coefficient.
        return if zeros.len() > n { 1.0 } else { 0.0 };
    }
    let r_max = 1.0 / rho;
    (1..200)
        .map(|i| 1.0 + (r_max - 1.0) * i as f64 / 200.0)
        .map(|r| {
            let m_r: f64 = zeros
                .iter()
                .map(|a| {
                    let m = a.norm();
                    if m == 0.0 {
                        r
                    } else {
                        (m + r) / (1.0 - m * r)
                    }
                })
                .product();
            m_r * r.powf(-((n + 1) as f64)) / (1.0 - r.powi(-2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
        .min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerOuterFactorization {
    pub unimodular: Complex64,
    pub inner_zeros: Vec<Complex64>,
    pub outer: CoeffSeries,
}

impl InnerOuterFactorization {
    /// `f_I(0) = unimodular · Π |a_i|` (zero if a root sits at the origin).
    pub fn inner_at_zero(&self) -> Complex64 {
        self.unimodular * blaschke_eval(&self.inner_zeros, ZERO)
    }

    /// `unimodular · B · outer` truncated at degree `n`.
    pub fn reconstruct(&self, n: usize) -> Result<CoeffSeries> {
        let b = blaschke_series(&self.inner_zeros, n)?;
        Ok(multiply_to(&b, &self.outer, n).scale(self.unimodular))
    }
}

/// Roots of an exact polynomial from the eigenvalues of its companion
/// matrix, polished by Newton steps and clustered within
/// [`CLUSTER_RADIUS`]. Zero roots are split off exactly.
pub fn polynomial_roots(p: &CoeffSeries) -> Result<Vec<Complex64>> {
    let Some(deg) = p.degree() else {
        return Err(Error::InvalidInput("polynomial is identically zero".into()));
    };
    let c = &p.coeffs()[..=deg];
    let low = c.iter().position(|x| *x != ZERO).unwrap();
    let q = &c[low..];
    let d = q.len() - 1;
    let mut roots = vec![ZERO; low];
    if d == 0 {
        return Ok(roots);
    }
    let lead = q[d];
    let mut comp = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -q[i] / lead;
    }
    let schur = Schur::try_new(comp, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Convergence("companion-matrix Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let poly = CoeffSeries::polynomial(q.to_vec());
    let dpoly = CoeffSeries::polynomial((1..=d).map(|k| q[k] * k as f64).collect());
    let mut found: Vec<Complex64> = (0..d)
        .map(|i| {
            let mut r = t[(i, i)];
            let mut best = evaluate(&poly, r).norm();
            for _ in 0..8 {
                let dv = evaluate(&dpoly, r);
                if dv == ZERO {
                    break;
                }
                let next = r - evaluate(&poly, r) / dv;
                let val = evaluate(&poly, next).norm();
                if val < best {
                    best = val;
                    r = next;
                } else {
                    break;
                }
            }
            r
        })
        .collect();
    cluster(&mut found);
    roots.extend(found);
    Ok(roots)
}

fn cluster(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut group = vec![usize::MAX; n];
    for i in 0..n {
        if group[i] != usize::MAX {
            continue;
        }
        group[i] = i;
        for j in i + 1..n {
            if group[j] == usize::MAX && (roots[i] - roots[j]).norm() < CLUSTER_RADIUS {
                group[j] = i;
            }
        }
    }
    for g in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| group[i] == g).collect();
        if members.len() > 1 {
            let mean = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
            for &i in &members {
                roots[i] = mean;
            }
        }
    }
}

/// Splits an exact polynomial as `unimodular · B(inner_zeros) · outer`.
///
/// Each root `a` in the open disc is reflected with
/// `z − a = −(a/|a|) · b_a(z) · (1 − āz)` (or `z = b_0(z)` for `a = 0`), so the
/// outer factor keeps all constants and the unimodular constant is 1.
pub fn polynomial_inner_outer(p: &CoeffSeries) -> Result<InnerOuterFactorization> {
    if !p.is_exact() {
        return Err(Error::InvalidInput("inner-outer factorisation needs an exact polynomial".into()));
    }
    let roots = polynomial_roots(p)?;
    if let Some(&r) = roots.iter().find(|r| (r.norm() - 1.0).abs() <= BOUNDARY_TOL) {
        return Err(Error::BoundaryRoot { root: r, tol: BOUNDARY_TOL });
    }
    let mut inner: Vec<Complex64> = roots.into_iter().filter(|r| r.norm() < 1.0).collect();
    inner.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let deg = p.degree().unwrap();
    let mut q: Vec<Complex64> = p.coeffs()[..=deg].to_vec();
    for &a in &inner {
        q = if a == ZERO { q[1..].to_vec() } else { deflate(&q, a) };
    }
    let mut outer = CoeffSeries::polynomial(q);
    for &a in &inner {
        if a != ZERO {
            let unit = -(a / a.norm());
            let lin = CoeffSeries::polynomial(vec![unit, -unit * a.conj()]);
            let n = outer.truncation_degree() + 1;
            outer = multiply_to(&outer, &lin, n);
        }
    }
    Ok(InnerOuterFactorization { unimodular: ONE, inner_zeros: inner, outer: outer.trimmed() })
}

/// Quotient of `q` by `(z − a)`, dividing from the leading coefficient.
fn deflate(q: &[Complex64], a: Complex64) -> Vec<Complex64> {
    let d = q.len() - 1;
    let mut out = vec![ZERO; d];
    let mut carry = q[d];
    for k in (0..d).rev() {
        out[k] = carry;
        carry = q[k] + a * carry;
    }
    out
}
