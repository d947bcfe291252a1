//! Steering: given `f`, a boundary target `g` on a finite set `E` and `ε`,
//! build `F` with `‖F − f‖ < ε` and an order `m` with
//! `sup_E |Q_m(1/F) − g| < ε`.
//!
//! Write `f = f_I f_O` (inner times outer) and `σ = conj(f_I(0))`. With
//! `h = f_O/σ` and a zero-free polynomial `P ≈ h` in norm with `1/P ≈ g` on
//! `E`, the function `F = σ f_I P` satisfies `‖F − f‖ = |σ|·‖P − h‖` and
//! `Q_m(1/F) = Q_m(1/P)`, so the order can be chosen from `P` alone.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{blaschke_eval, blaschke_series, polynomial_inner_outer};
use crate::boundary::BoundarySet;
use crate::coeffseries::{evaluate, multiply_to, CoeffSeries, ZeroFreeReport};
use crate::error::{Error, Result};
use crate::opa::{opa_solve, OpaResult};
use crate::spaces::{distance_alpha, AlphaWeight, Space};
use crate::zerofree::{simultaneous_zero_free_with, Tolerances, TraceEntry, ZeroFreeOptions};

/// Largest order probed by [`opa_search_m`].
pub const SEARCH_CAP: usize = 4096;
/// Smallest truncation degree of `F_coeffs`.
pub const F_TRUNCATION: usize = 512;
/// Extra coefficients kept in `F_coeffs` beyond `deg P` and `m`.
pub const F_MARGIN: usize = 128;
/// Halvings of the boundary tolerance before giving up.
pub const DELTA_REFINEMENTS: usize = 8;

/// Outcome of [`opa_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub m: usize,
    pub solution: OpaResult,
    /// `sup_E |Q_m(1/P) − 1/P|`.
    pub sup_error: f64,
}

fn sup_error_on(p: &CoeffSeries, q: &CoeffSeries, points: &[Complex64]) -> f64 {
    points.iter().map(|&z| (evaluate(q, z) - 1.0 / evaluate(p, z)).norm()).fold(0.0, f64::max)
}

/// Smallest probed `m` with `sup_E |Q_m(1/P) − 1/P| < tol`, see
/// [`opa_search`].
pub fn opa_search_m(p: &CoeffSeries, e: &BoundarySet, tol: f64, w: AlphaWeight) -> Result<usize> {
    opa_search(p, e, tol, w).map(|s| s.m)
}

/// Probes `m = 0, 1, 2, 4, …` up to [`SEARCH_CAP`], then bisects between the
/// first success and the probe before it. The error need not be monotone in
/// `m`, so the result is the smallest success among the probed orders.
pub fn opa_search(p: &CoeffSeries, e: &BoundarySet, tol: f64, w: AlphaWeight) -> Result<SearchOutcome> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    if !p.is_exact() || p.is_zero() {
        return Err(Error::InvalidInput("order search needs a nonzero exact polynomial".into()));
    }
    let points: Vec<Complex64> = e.grid().into_iter().map(|t| Complex64::from_polar(1.0, t)).collect();
    if points.iter().any(|&z| evaluate(p, z).norm() == 0.0) {
        return Err(Error::InvalidInput("P vanishes on E".into()));
    }
    let probe = |m: usize| -> Result<(OpaResult, f64)> {
        let sol = opa_solve(p, m, w)?;
        let err = sup_error_on(p, &sol.q, &points);
        Ok((sol, err))
    };
    let mut best = f64::INFINITY;
    let mut prev = None;
    let mut m = 0;
    loop {
        let (sol, err) = probe(m)?;
        best = best.min(err);
        if err < tol {
            let Some(mut lo) = prev else {
                return Ok(SearchOutcome { m, solution: sol, sup_error: err });
            };
            let mut hi = (m, sol, err);
            while hi.0 - lo > 1 {
                let mid = lo + (hi.0 - lo) / 2;
                let (s, e) = probe(mid)?;
                if e < tol {
                    hi = (mid, s, e);
                } else {
                    lo = mid;
                }
            }
            return Ok(SearchOutcome { m: hi.0, solution: hi.1, sup_error: hi.2 });
        }
        if m >= SEARCH_CAP {
            return Err(Error::SearchBudget { cap: SEARCH_CAP, best, tol });
        }
        prev = Some(m);
        m = if m == 0 { 1 } else { (2 * m).min(SEARCH_CAP) };
    }
}

/// `F = σ·B(inner_zeros)·P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuredF {
    /// `conj(f_I(0))`.
    pub sigma: Complex64,
    pub inner_zeros: Vec<Complex64>,
    #[serde(rename = "P")]
    pub p: CoeffSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Achieved {
    /// `‖F_coeffs − f‖_α` plus the tail bound of `F_coeffs`.
    pub norm_error: f64,
    /// `|σ|·‖P − h‖_α`, equal to the above up to truncation for `α = 0`.
    pub norm_error_isometry: f64,
    /// `sup_E |Q_m(1/F) − g|`.
    pub boundary_error: f64,
    /// `max_k |Q_m(1/F)_k − Q_m(1/P)_k|`.
    pub identity_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteerResult {
    #[serde(rename = "F_structured")]
    pub f_structured: StructuredF,
    #[serde(rename = "F_coeffs")]
    pub f_coeffs: CoeffSeries,
    pub m: usize,
    #[serde(rename = "Q_m")]
    pub q_m: CoeffSeries,
    pub achieved: Achieved,
    /// Boundary tolerance finally given to the zero-free stage.
    pub delta: f64,
    pub zero_free: ZeroFreeReport,
    pub trace: Vec<TraceEntry>,
}

/// Runs the steering construction. In the Dirichlet space only zero-free `f`
/// (trivial inner part) is accepted and the order search runs at `α = 1`.
pub fn steer(f: &CoeffSeries, g: &CoeffSeries, e: &BoundarySet, eps: f64, space: Space) -> Result<SteerResult> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps {eps} must be positive")));
    }
    if !f.is_exact() || !g.is_exact() {
        return Err(Error::InvalidInput("f and g must be exact polynomials".into()));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::InvalidInput("f and g must be nonzero".into()));
    }
    if f.coeff(0) == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("f(0) = 0".into()));
    }
    if e.positive_measure() || !e.arcs().is_empty() {
        return Err(Error::PositiveMeasure);
    }
    let points: Vec<Complex64> = e.points().iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let g_vals: Vec<Complex64> = points.iter().map(|&z| evaluate(g, z)).collect();
    if let Some(i) = g_vals.iter().position(|v| v.norm() == 0.0) {
        return Err(Error::InvalidInput(format!("g vanishes at θ = {}", e.points()[i])));
    }

    let fac = polynomial_inner_outer(f)?;
    if space == Space::Dirichlet && !fac.inner_zeros.is_empty() {
        return Err(Error::InvalidInput("Dirichlet steering needs f without zeros in the disc".into()));
    }
    let w = space.weight();
    let sigma = fac.inner_at_zero().conj();
    let h = fac.outer.scale(1.0 / sigma);
    let targets: Vec<Complex64> = g_vals.iter().map(|v| 1.0 / v).collect();
    let min_inv = targets.iter().map(|t| t.norm()).fold(f64::INFINITY, f64::min);
    let space_tol = eps / sigma.norm();

    // Boundary tolerance δ for |P − 1/g|, halved until |g − 1/P| < ε/2 holds
    // by direct measurement.
    let mut delta = 0.5 * eps * min_inv * min_inv;
    let mut stage = None;
    for _ in 0..=DELTA_REFINEMENTS {
        let res = simultaneous_zero_free_with(
            &h,
            e,
            &targets,
            Tolerances { space: space_tol, boundary: delta },
            space,
            ZeroFreeOptions::default(),
        )?;
        let inv_err = points.iter().zip(&g_vals).map(|(&z, &gv)| (gv - 1.0 / evaluate(&res.p, z)).norm()).fold(0.0, f64::max);
        if inv_err < eps / 2.0 {
            stage = Some(res);
            break;
        }
        let min_p = points.iter().map(|&z| evaluate(&res.p, z).norm()).fold(f64::INFINITY, f64::min);
        delta = (0.5 * delta).min(0.5 * eps * min_inv * min_p);
    }
    let stage = stage.ok_or_else(|| Error::ApproximationBudget {
        message: format!("|g − 1/P| stayed above eps/2 after {DELTA_REFINEMENTS} refinements of delta"),
        space_error: f64::NAN,
        boundary_error: f64::NAN,
    })?;
    let p = stage.p.clone();

    let search = opa_search(&p, e, eps / 2.0, w)?;
    let m = search.m;

    let deg_p = p.degree().unwrap_or(0);
    let n_f = F_TRUNCATION.max(deg_p + F_MARGIN).max(m + F_MARGIN);
    let b = blaschke_series(&fac.inner_zeros, n_f)?;
    let f_coeffs = multiply_to(&b, &p, n_f).scale(sigma);

    let q_f = opa_solve(&f_coeffs, m, w)?.q;
    let identity_deviation = (0..=m).map(|k| (q_f.coeff(k) - search.solution.q.coeff(k)).norm()).fold(0.0, f64::max);
    let boundary_error = points.iter().zip(&g_vals).map(|(&z, &gv)| (evaluate(&q_f, z) - gv).norm()).fold(0.0, f64::max);
    let norm_error = distance_alpha(&f_coeffs, f, w) + f_coeffs.tail_bound();
    let norm_error_isometry = sigma.norm() * distance_alpha(&p, &h, w);

    debug_assert!((blaschke_eval(&fac.inner_zeros, Complex64::new(0.0, 0.0)) - sigma.conj()).norm() < 1e-12);
    Ok(SteerResult {
        f_structured: StructuredF { sigma, inner_zeros: fac.inner_zeros, p },
        f_coeffs,
        m,
        q_m: q_f,
        achieved: Achieved { norm_error, norm_error_isometry, boundary_error, identity_deviation },
        delta,
        zero_free: stage.report,
        trace: stage.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_trivial() {
        let e = BoundarySet::from_points(&[0.0, 1.0]).unwrap();
        assert_eq!(opa_search_m(&CoeffSeries::one(), &e, 1e-9, AlphaWeight::HARDY).unwrap(), 0);
    }

    #[test]
    fn search_monotone_in_tolerance() {
        let p = CoeffSeries::from_real(&[1.0, -0.5]);
        let e = BoundarySet::from_points(&[0.0]).unwrap();
        let m1 = opa_search_m(&p, &e, 1e-3, AlphaWeight::HARDY).unwrap();
        let m2 = opa_search_m(&p, &e, 5e-4, AlphaWeight::HARDY).unwrap();
        assert!(m1 > 0 && m2 >= m1);
    }

    #[test]
    fn search_budget() {
        // Convergence at z = 1 is too slow for the cap.
        let p = CoeffSeries::from_real(&[1.0, -0.9999]);
        let e = BoundarySet::from_points(&[0.0]).unwrap();
        assert!(matches!(opa_search_m(&p, &e, 1e-3, AlphaWeight::HARDY), Err(Error::SearchBudget { .. })));
        let p = CoeffSeries::from_real(&[1.0, -1.0]);
        assert!(matches!(opa_search_m(&p, &e, 1e-3, AlphaWeight::HARDY), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn steer_contract_errors() {
        let e = BoundarySet::from_points(&[0.0]).unwrap();
        let g = CoeffSeries::from_real(&[3.0]);
        let f0 = CoeffSeries::from_real(&[0.0, 1.0]);
        assert!(matches!(steer(&f0, &g, &e, 0.1, Space::Hardy), Err(Error::InvalidInput(_))));
        let f = CoeffSeries::from_real(&[1.0, -0.5]);
        let g1 = CoeffSeries::from_real(&[-1.0, 1.0]);
        assert!(matches!(steer(&f, &g1, &e, 0.1, Space::Hardy), Err(Error::InvalidInput(_))));
        let arc = BoundarySet::new(Vec::new(), vec![(0.0, 0.2)], 64.0).unwrap();
        assert!(matches!(steer(&f, &g, &arc, 0.1, Space::Hardy), Err(Error::PositiveMeasure)));
        assert!(matches!(steer(&CoeffSeries::zeros(2), &g, &e, 0.1, Space::Hardy), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn steer_to_natural_limit() {
        // g = 1/f on E is the natural limit of Q_n(1/f), so P stays near f.
        let f = CoeffSeries::from_real(&[1.0, -0.5]);
        let g = CoeffSeries::from_real(&[2.0]);
        let e = BoundarySet::from_points(&[0.0]).unwrap();
        let r = steer(&f, &g, &e, 0.1, Space::Hardy).unwrap();
        assert!(r.achieved.norm_error < 0.1);
        assert!(r.achieved.boundary_error < 0.1);
    }
}
