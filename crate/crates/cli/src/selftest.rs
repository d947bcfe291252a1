//! Built-in invariant suite: small, fast instances with known answers.

use opa_core::opa::opa_solve_with;
use opa_core::{
    blaschke_series, coeffseries, dirichlet_integral, equilibrium_measure, exp_series, gram_matrix, multiply, norm_alpha, opa_solve,
    simultaneous_zero_free, zero_free_on_closed_disc, AlphaWeight, BoundarySet, CoeffSeries, Complex64, Error, ErrorClass, Solver, Space,
};
use serde_json::json;

use crate::commands::Outcome;
use crate::error::CliError;

type Check = fn() -> Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn within(what: &str, err: f64, tol: f64) -> Result<String, String> {
    if err <= tol {
        Ok(format!("{what} {err:.2e} ≤ {tol:.0e}"))
    } else {
        Err(format!("{what} {err:.2e} > {tol:.0e}"))
    }
}

fn closed_form() -> Result<String, String> {
    let f = CoeffSeries::from_real(&[1.0, -1.0]);
    let mut worst: f64 = 0.0;
    for n in 0..=30 {
        let r = opa_solve(&f, n, AlphaWeight::HARDY).map_err(|e| e.to_string())?;
        for k in 0..=n {
            worst = worst.max((r.q.coeff(k) - (1.0 - (k + 1) as f64 / (n + 2) as f64)).norm());
        }
        worst = worst.max((r.residual * r.residual - 1.0 / (n + 2) as f64).abs());
    }
    within("closed-form error", worst, 1e-10)
}

fn gram_witness() -> Result<String, String> {
    let g = gram_matrix(&CoeffSeries::from_real(&[1.0, -1.0]), 1, AlphaWeight::DIRICHLET).map_err(|e| e.to_string())?;
    if g.entry(0, 0) == c(3.0, 0.0) && g.entry(1, 1) == c(5.0, 0.0) {
        Ok("M00 = 3, M11 = 5".into())
    } else {
        Err(format!("M00 = {}, M11 = {}", g.entry(0, 0), g.entry(1, 1)))
    }
}

fn solvers_agree() -> Result<String, String> {
    let f = CoeffSeries::polynomial(vec![c(2.0, 0.5), c(-0.3, 1.0), c(0.25, -0.4)]);
    let a = opa_solve_with(&f, 60, AlphaWeight::HARDY, Solver::Levinson).map_err(|e| e.to_string())?;
    let b = opa_solve_with(&f, 60, AlphaWeight::HARDY, Solver::Dense).map_err(|e| e.to_string())?;
    let gap = (0..=60).map(|k| (a.q.coeff(k) - b.q.coeff(k)).norm()).fold(0.0, f64::max);
    within("Levinson vs Cholesky", gap, 1e-10)
}

fn inner_invariance() -> Result<String, String> {
    let f = CoeffSeries::from_real(&[2.0, 1.0]);
    let b = blaschke_series(&[c(0.0, 0.5)], 256).map_err(|e| e.to_string())?;
    let fb = coeffseries::multiply_to(&f.truncate(256), &b, 256);
    let mut worst: f64 = 0.0;
    for n in 0..=5 {
        let lhs = opa_solve(&fb, n, AlphaWeight::HARDY).map_err(|e| e.to_string())?.q;
        let rhs = opa_solve(&f, n, AlphaWeight::HARDY).map_err(|e| e.to_string())?.q.scale(b.coeff(0).conj());
        worst = (0..=n).map(|k| (lhs.coeff(k) - rhs.coeff(k)).norm()).fold(worst, f64::max);
    }
    within("inner invariance deviation", worst, 1e-8)
}

fn norm_identity() -> Result<String, String> {
    let f = CoeffSeries::polynomial(vec![c(1.0, 0.0), c(0.5, -0.5), c(0.0, 2.0), c(-1.5, 0.25)]);
    let d = norm_alpha(&f, AlphaWeight::DIRICHLET);
    let h = norm_alpha(&f, AlphaWeight::HARDY);
    within("‖f‖²_D − ‖f‖²_H² − D(f)", (d * d - h * h - dirichlet_integral(&f)).abs(), 1e-12)
}

fn blaschke_coefficients() -> Result<String, String> {
    let b = blaschke_series(&[c(0.5, 0.0)], 8).map_err(|e| e.to_string())?;
    let expect = [0.5, -0.75, -0.375];
    let gap = expect.iter().enumerate().map(|(k, &v)| (b.coeff(k) - v).norm()).fold(0.0, f64::max);
    within("Blaschke coefficient error", gap, 1e-15)
}

fn zero_location() -> Result<String, String> {
    let outside = multiply(&CoeffSeries::from_real(&[-2.0, 1.0]), &CoeffSeries::polynomial(vec![c(0.0, 3.0), c(1.0, 0.0)]));
    let inside = CoeffSeries::from_real(&[-0.5, 1.0]);
    let a = zero_free_on_closed_disc(&outside).map_err(|e| e.to_string())?;
    let b = zero_free_on_closed_disc(&inside).map_err(|e| e.to_string())?;
    if a.zero_free && !b.zero_free && b.winding_number == 1 {
        Ok("roots outside certified, root at 1/2 counted".into())
    } else {
        Err(format!("outside: {a:?}; inside: {b:?}"))
    }
}

fn full_circle_capacity() -> Result<String, String> {
    let set = BoundarySet::full_circle(64.0).map_err(|e| e.to_string())?;
    let m = equilibrium_measure(&set, 128, 500).map_err(|e| e.to_string())?;
    within("|cap(T) − 1|", (m.capacity - 1.0).abs(), 0.02)
}

fn exp_inverse() -> Result<String, String> {
    let a = CoeffSeries::polynomial(vec![c(0.2, 0.1), c(-0.4, 0.0), c(0.0, 0.3)]).truncate(40);
    let p = coeffseries::multiply_to(&exp_series(&a), &exp_series(&a.scale(c(-1.0, 0.0))), 40);
    let gap = (0..=40).map(|k| (p.coeff(k) - if k == 0 { 1.0 } else { 0.0 }).norm()).fold(0.0, f64::max);
    within("exp(a)·exp(−a) − 1", gap, 1e-12)
}

fn vanishing_at_origin() -> Result<String, String> {
    let r = opa_solve(&CoeffSeries::from_real(&[0.0, 1.0]), 4, AlphaWeight::HARDY).map_err(|e| e.to_string())?;
    if r.q.is_zero() && r.residual == 1.0 {
        Ok("Q ≡ 0, residual 1".into())
    } else {
        Err(format!("Q = {:?}, residual {}", r.q.coeffs(), r.residual))
    }
}

fn contracts() -> Result<String, String> {
    let arc = BoundarySet::new(Vec::new(), vec![(0.0, 0.2)], 64.0).map_err(|e| e.to_string())?;
    let g = CoeffSeries::from_real(&[1.0, 1.0]);
    match simultaneous_zero_free(&g, &arc, &[], 0.1, Space::Hardy) {
        Err(Error::PositiveMeasure) => {}
        other => return Err(format!("arc accepted by zerofree: {other:?}")),
    }
    match opa_solve(&CoeffSeries::zeros(2), 1, AlphaWeight::HARDY) {
        Err(e) if e.class() == ErrorClass::Domain => Ok("arcs and zero polynomial rejected".into()),
        other => Err(format!("zero polynomial: {other:?}")),
    }
}

const CHECKS: [(&str, Check); 11] = [
    ("closed_form_one_minus_z", closed_form),
    ("gram_witness", gram_witness),
    ("levinson_matches_cholesky", solvers_agree),
    ("inner_invariance", inner_invariance),
    ("dirichlet_norm_identity", norm_identity),
    ("blaschke_coefficients", blaschke_coefficients),
    ("zero_location", zero_location),
    ("full_circle_capacity", full_circle_capacity),
    ("exp_inverse", exp_inverse),
    ("vanishing_at_origin", vanishing_at_origin),
    ("contracts", contracts),
];

pub fn run() -> Outcome {
    let mut failed = 0;
    let results: Vec<_> = CHECKS
        .iter()
        .map(|(name, check)| {
            let (pass, detail) = match check() {
                Ok(d) => (true, d),
                Err(d) => {
                    failed += 1;
                    (false, d)
                }
            };
            json!({ "name": name, "pass": pass, "detail": detail })
        })
        .collect();
    Outcome {
        outputs: json!({ "checks": results, "passed": CHECKS.len() - failed, "failed": failed }),
        failure: (failed > 0).then_some(CliError::Selftest { failed }),
        ..Outcome::default()
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        let o = super::run();
        assert!(o.failure.is_none(), "{}", o.outputs);
    }
}
