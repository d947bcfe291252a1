//! Optimal polynomial approximants `Q_n(1/f)`.
//!
//! `Q_n` minimises `‖q f − 1‖_α` over polynomials of degree `≤ n`. Writing
//! `Q_n = Σ a_j z^j`, the row vector `A` solves `A M = C` with
//! `M_{j,k} = ⟨z^j f, z^k f⟩_α` and `C = (conj f(0), 0, …, 0)`. Since `M` is
//! Hermitian this is `M conj(A) = conj(C)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundarySet;
use crate::coeffseries::{evaluate, multiply_to, CoeffSeries};
use crate::error::{Error, Result};
use crate::grid;
use crate::spaces::{norm_alpha, AlphaWeight};

/// Extra stored coefficients required of a non-polynomial `f` beyond `n`.
pub const GRAM_MARGIN: usize = 128;

/// Relative pivot threshold (times the trace) for ill-conditioning.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// Below this order the automatic solver choice stays dense.
const LEVINSON_MIN_ORDER: usize = 48;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    /// Dense Hermitian Cholesky factorisation.
    Dense,
    /// Levinson recursion on the Toeplitz structure (`α = 0` only).
    Levinson,
    /// Levinson for `α = 0` and larger orders, dense otherwise.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramSystem {
    /// Row-major `(n+1)×(n+1)` matrix.
    pub m: Vec<Complex64>,
    pub c: Vec<Complex64>,
    pub n: usize,
    pub alpha: AlphaWeight,
    /// Bound on the entry-wise error caused by the tail of `f`.
    pub entry_error: f64,
}

impl GramSystem {
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.m[j * self.size() + k]
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|j| self.entry(j, j).re).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpaResult {
    #[serde(rename = "Q")]
    pub q: CoeffSeries,
    /// `‖Q f − 1‖_α` computed from the product.
    pub residual: f64,
    /// `sqrt(1 − a_0 f(0))`, the projection identity.
    pub residual_projection: f64,
    pub condition_estimate: f64,
    pub n: usize,
    pub alpha: AlphaWeight,
    pub solver: Solver,
}

fn check_input(f: &CoeffSeries, n: usize) -> Result<()> {
    if f.degree().is_none() {
        return Err(Error::InvalidInput("f is identically zero".into()));
    }
    if !f.is_exact() && f.truncation_degree() < n + GRAM_MARGIN {
        return Err(Error::InvalidParameter(format!(
            "truncated f needs degree ≥ n + {GRAM_MARGIN} = {}, has {}",
            n + GRAM_MARGIN,
            f.truncation_degree()
        )));
    }
    Ok(())
}

fn rhs(f: &CoeffSeries, n: usize) -> Vec<Complex64> {
    let mut c = vec![ZERO; n + 1];
    c[0] = f.coeff(0).conj();
    c
}

/// First row `r_d = M_{0,d}` of the `α = 0` Gram matrix.
fn toeplitz_row(f: &CoeffSeries, n: usize) -> Vec<Complex64> {
    let len = f.degree().map_or(1, |d| d + 1);
    // M_{0,d} = Σ_i f_i conj(f_{i−d}) = Σ_m f_{m+d} conj(f_m).
    grid::autocorrelation(&f.coeffs()[..len], n)
}

fn entry_error(f: &CoeffSeries, w: AlphaWeight) -> f64 {
    let t = f.tail_bound();
    if t == 0.0 {
        0.0
    } else if w.is_hardy() {
        2.0 * f.norm_h2() * t + t * t
    } else {
        f64::INFINITY
    }
}

/// Assembles `M` and `C`.
pub fn gram_matrix(f: &CoeffSeries, n: usize, w: AlphaWeight) -> Result<GramSystem> {
    check_input(f, n)?;
    let size = n + 1;
    let mut m = vec![ZERO; size * size];
    let len = f.degree().map_or(1, |d| d + 1);
    let fc = &f.coeffs()[..len];
    if w.is_hardy() || w.alpha() == 1.0 {
        // For k ≥ j, d = k − j: M_{j,k} = Σ_m w(m+k) f_{m+d} conj(f_m)
        // with w(m+k) = 1 for α = 0 and (m+d) + (j+1) for α = 1.
        let r = grid::autocorrelation(fc, n);
        let s = if w.is_hardy() { Vec::new() } else { grid::weighted_autocorrelation(fc, n) };
        for j in 0..size {
            for k in j..size {
                let d = k - j;
                let v = if w.is_hardy() { r[d] } else { s[d] + r[d] * (j + 1) as f64 };
                m[j * size + k] = v;
                m[k * size + j] = v.conj();
            }
        }
    } else {
        for j in 0..size {
            for k in j..size {
                let mut acc = ZERO;
                // i ranges where both f_{i−j} and f_{i−k} exist (k ≥ j).
                for i in k..len + j {
                    acc += f.coeff(i - j) * f.coeff(i - k).conj() * w.weight(i);
                }
                m[j * size + k] = acc;
                m[k * size + j] = acc.conj();
            }
        }
    }
    for j in 0..size {
        m[j * size + j].im = 0.0;
    }
    Ok(GramSystem { m, c: rhs(f, n), n, alpha: w, entry_error: entry_error(f, w) })
}

/// Solution and pivots `d_j` (squared Cholesky diagonal) of a Hermitian
/// positive definite system.
#[derive(Debug, Clone)]
pub struct HpdSolution {
    pub x: Vec<Complex64>,
    pub pivots: Vec<f64>,
}

impl HpdSolution {
    /// `max d_j / min d_j`, the squared spread of the Cholesky diagonal.
    pub fn condition_estimate(&self) -> f64 {
        condition_from_pivots(&self.pivots)
    }
}

fn condition_from_pivots(p: &[f64]) -> f64 {
    let max = p.iter().copied().fold(0.0, f64::max);
    let min = p.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

fn ill(pivot: f64, threshold: f64, pivots: &[f64]) -> Error {
    let mut all = pivots.to_vec();
    all.push(pivot.max(f64::MIN_POSITIVE));
    Error::IllConditioned { pivot, threshold, condition_estimate: condition_from_pivots(&all) }
}

/// Dense Cholesky `M = L L^H` followed by two triangular solves.
pub fn cholesky_solve(m: &[Complex64], size: usize, b: &[Complex64]) -> Result<HpdSolution> {
    assert_eq!(m.len(), size * size);
    assert_eq!(b.len(), size);
    let trace: f64 = (0..size).map(|j| m[j * size + j].re).sum();
    let threshold = PIVOT_THRESHOLD * trace;
    let mut l = vec![ZERO; size * size];
    let mut pivots = Vec::with_capacity(size);
    for j in 0..size {
        let mut d = m[j * size + j].re;
        for k in 0..j {
            d -= l[j * size + k].norm_sqr();
        }
        if !(d > threshold) {
            return Err(ill(d, threshold, &pivots));
        }
        pivots.push(d);
        let ljj = d.sqrt();
        l[j * size + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..size {
            let mut s = m[i * size + j];
            for k in 0..j {
                s -= l[i * size + k] * l[j * size + k].conj();
            }
            l[i * size + j] = s / ljj;
        }
    }
    let mut y = b.to_vec();
    for i in 0..size {
        let mut s = y[i];
        for k in 0..i {
            s -= l[i * size + k] * y[k];
        }
        y[i] = s / l[i * size + i].re;
    }
    for i in (0..size).rev() {
        let mut s = y[i];
        for k in i + 1..size {
            s -= l[k * size + i].conj() * y[k];
        }
        y[i] = s / l[i * size + i].re;
    }
    Ok(HpdSolution { x: y, pivots })
}

/// Levinson recursion for a Hermitian Toeplitz system with first row `r`
/// (`T_{j,k} = r_{k−j}` for `k ≥ j`, `conj(r_{j−k})` otherwise).
///
/// Carries forward and backward vectors `T f = e_first`, `T b = e_last`
/// through each order; the pivot of order `n` is `1 / b_n`, equal to the
/// squared Cholesky diagonal entry.
pub fn levinson_solve(r: &[Complex64], y: &[Complex64]) -> Result<HpdSolution> {
    let size = r.len();
    assert_eq!(y.len(), size);
    let t = |d: isize| -> Complex64 {
        if d >= 0 {
            r[d as usize]
        } else {
            r[(-d) as usize].conj()
        }
    };
    let t0 = r[0].re;
    let threshold = PIVOT_THRESHOLD * t0 * size as f64;
    if !(t0 > threshold) {
        return Err(ill(t0, threshold, &[]));
    }
    let mut pivots = vec![t0];
    let mut f = vec![Complex64::new(1.0 / t0, 0.0)];
    let mut b = f.clone();
    let mut x = vec![y[0] / t0];
    for n in 1..size {
        // ε_f: last row of T_{n+1} against [f; 0]; ε_b: first row against [0; b].
        let mut ef = ZERO;
        let mut eb = ZERO;
        let mut theta = ZERO;
        for i in 0..n {
            ef += t(i as isize - n as isize) * f[i];
            eb += t(i as isize + 1) * b[i];
            theta += t(i as isize - n as isize) * x[i];
        }
        let denom = Complex64::new(1.0, 0.0) - ef * eb;
        let alpha = denom.inv();
        let beta = -alpha * ef;
        let delta = alpha;
        let gamma = -delta * eb;
        let mut nf = vec![ZERO; n + 1];
        let mut nb = vec![ZERO; n + 1];
        for i in 0..n {
            nf[i] += alpha * f[i];
            nf[i + 1] += beta * b[i];
            nb[i] += gamma * f[i];
            nb[i + 1] += delta * b[i];
        }
        let pivot = 1.0 / nb[n].re;
        if !(pivot > threshold) || !pivot.is_finite() {
            return Err(ill(pivot, threshold, &pivots));
        }
        pivots.push(pivot);
        let coef = y[n] - theta;
        x.push(ZERO);
        for i in 0..=n {
            x[i] += coef * nb[i];
        }
        f = nf;
        b = nb;
    }
    Ok(HpdSolution { x, pivots })
}

/// `opa_solve_with` using [`Solver::Auto`].
pub fn opa_solve(f: &CoeffSeries, n: usize, w: AlphaWeight) -> Result<OpaResult> {
    opa_solve_with(f, n, w, Solver::Auto)
}

pub fn opa_solve_with(f: &CoeffSeries, n: usize, w: AlphaWeight, solver: Solver) -> Result<OpaResult> {
    check_input(f, n)?;
    let solver = match solver {
        Solver::Auto if w.is_hardy() && n >= LEVINSON_MIN_ORDER => Solver::Levinson,
        Solver::Auto => Solver::Dense,
        Solver::Levinson if !w.is_hardy() => {
            return Err(Error::InvalidParameter("the Levinson path needs a Toeplitz Gram matrix (alpha = 0)".into()))
        }
        s => s,
    };
    let c = rhs(f, n);
    let rhs_conj: Vec<Complex64> = c.iter().map(|x| x.conj()).collect();
    let sol = match solver {
        Solver::Levinson => levinson_solve(&toeplitz_row(f, n), &rhs_conj)?,
        _ => {
            let g = gram_matrix(f, n, w)?;
            cholesky_solve(&g.m, g.size(), &rhs_conj)?
        }
    };
    let a: Vec<Complex64> = sol.x.iter().map(|x| x.conj()).collect();
    let q = CoeffSeries::polynomial(a);
    Ok(finish(f, q, n, w, solver, sol.condition_estimate()))
}

fn finish(f: &CoeffSeries, q: CoeffSeries, n: usize, w: AlphaWeight, solver: Solver, condition_estimate: f64) -> OpaResult {
    let deg = if f.is_exact() { n + f.degree().unwrap_or(0) } else { f.truncation_degree() };
    let mut qf = multiply_to(&q, f, deg);
    let mut c0 = qf.coeff(0);
    c0 -= 1.0;
    let mut coeffs = qf.coeffs().to_vec();
    coeffs[0] = c0;
    qf = CoeffSeries::polynomial(coeffs);
    let residual = norm_alpha(&qf, w);
    let proj = (1.0 - (q.coeff(0) * f.coeff(0)).re).max(0.0).sqrt();
    OpaResult { q, residual, residual_projection: proj, condition_estimate, n, alpha: w, solver }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub residual: f64,
    pub sup_circle: f64,
    pub max_interior: f64,
}

/// Residual and pointwise errors `|Q_n − 1/f|` for `n = 0..=n_max`, over the
/// grid of `probes` and over `disc_probes`.
pub fn convergence_profile(
    f: &CoeffSeries,
    n_max: usize,
    w: AlphaWeight,
    probes: &BoundarySet,
    disc_probes: &[Complex64],
) -> Result<Vec<ConvergenceRow>> {
    let circle: Vec<(Complex64, Complex64)> = probes
        .grid()
        .into_iter()
        .map(|t| {
            let z = Complex64::from_polar(1.0, t);
            (z, evaluate(f, z).inv())
        })
        .collect();
    let interior: Vec<(Complex64, Complex64)> = disc_probes.iter().map(|&z| (z, evaluate(f, z).inv())).collect();
    let sup =
        |q: &CoeffSeries, pts: &[(Complex64, Complex64)]| pts.iter().map(|(z, inv)| (evaluate(q, *z) - inv).norm()).fold(0.0, f64::max);
    (0..=n_max)
        .map(|n| {
            let r = opa_solve(f, n, w)?;
            Ok(ConvergenceRow { n, residual: r.residual, sup_circle: sup(&r.q, &circle), max_interior: sup(&r.q, &interior) })
        })
        .collect()
}

/// CSV with header `n,residual,sup_circle,max_interior`, floats at 17
/// significant digits.
pub fn profile_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n,residual,sup_circle,max_interior\n");
    for r in rows {
        out.push_str(&format!("{},{:.16e},{:.16e},{:.16e}\n", r.n, r.residual, r.sup_circle, r.max_interior));
    }
    out
}
