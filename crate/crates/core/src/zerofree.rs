//! Simultaneous approximation by polynomials without zeros in the closed
//! disc: `‖P − g‖_α < ε` in the space norm and `|P − f| < ε` on a finite
//! boundary set `E`.
//!
//! The pipeline dilates `g`, splits `f/g_r` on `E` into pieces where it is
//! nearly constant, multiplies `g_r` by `Φ = exp(Σ v′_j h_j)` built from Rudin
//! functions peaking on each piece, and truncates the product to a
//! polynomial whose zero-freeness is then certified.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{angular_distance, neighborhood, piecewise_partition, BoundarySet, PiecewisePartition};
use crate::coeffseries::{dilate, evaluate, exp_series, multiply_to, winding, zero_free_on_closed_disc, CoeffSeries, ZeroFreeReport};
use crate::error::{Error, Result};
use crate::grid;
use crate::rudin::{dirichlet_rudin, hardy_rudin};
use crate::spaces::{distance_alpha, Space};

/// Peak height of each Rudin factor.
pub const PHI_PEAK: f64 = 0.5;
/// Nested arc levels per Dirichlet Rudin factor.
pub const PHI_DIRICHLET_LEVELS: usize = 4;
/// Largest Φ level.
pub const MAX_LEVEL: usize = 512;
/// Largest truncation degree of `P`.
pub const MAX_DEGREE: usize = 1 << 17;
/// Smallest truncation degree tried.
pub const MIN_DEGREE: usize = 128;
/// Dilations tried for `g`.
pub const DILATIONS: [f64; 7] = [0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999, 1.0];
/// Radius at which `g` is checked for zeros in the open disc.
pub const OPEN_DISC_RADIUS: f64 = 1.0 - 1e-6;

/// `Φ = exp(Σ v′_j h_j)` together with its a-priori bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phi {
    pub series: CoeffSeries,
    /// The exponents `v′_j` actually used, one per piece.
    pub exponents: Vec<Complex64>,
    /// `exp(2m·max|v′_j|)`, valid since every `|h_j| ≤ 2`.
    pub uniform_bound: f64,
    pub level: usize,
}

/// Half-width of the arcs whose planar discs have radius `1/n`.
pub fn level_half_width(level: usize) -> f64 {
    2.0 * (0.5 / level as f64).asin()
}

fn set_distance(a: &BoundarySet, b: &BoundarySet) -> f64 {
    let ga = a.grid();
    let gb = b.grid();
    ga.iter().flat_map(|&s| gb.iter().map(move |&t| angular_distance(s, t))).fold(f64::INFINITY, f64::min)
}

/// Builds `Φ` at level `n`, see [`phi_builder_with`].
pub fn phi_builder(partition: &PiecewisePartition, space: Space, level: usize) -> Result<Phi> {
    phi_builder_with(partition, space, level, PHI_PEAK)
}

/// Builds `Φ = exp(Σ v′_j h_{j,n})` with `h_{j,n}` a Rudin function for
/// piece `j`, tolerance `1/n` and neighbourhood of planar radius `1/n`.
///
/// The exponents solve `Σ_j v′_j h_j(ζ) = v_i` for every sample `ζ` of piece
/// `i` (least squares when a piece has several samples), so that `Φ` takes
/// the value `e^{v_i}` on piece `i` and not merely close to it.
pub fn phi_builder_with(partition: &PiecewisePartition, space: Space, level: usize, peak: f64) -> Result<Phi> {
    if level == 0 {
        return Err(Error::LevelTooSmall { level });
    }
    let pieces = &partition.pieces;
    if pieces.iter().all(|p| p.v == Complex64::new(0.0, 0.0)) {
        return Ok(Phi { series: CoeffSeries::one(), exponents: vec![Complex64::new(0.0, 0.0); pieces.len()], uniform_bound: 1.0, level });
    }
    let hw = level_half_width(level);
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if set_distance(&pieces[i].set, &pieces[j].set) <= 2.0 * hw {
                return Err(Error::LevelTooSmall { level });
            }
        }
    }
    let eps = 1.0 / level as f64;
    let mut hs = Vec::with_capacity(pieces.len());
    for piece in pieces {
        let u = neighborhood(&piece.set, hw)?;
        let r = match space {
            Space::Hardy => hardy_rudin(&piece.set, &u, eps, peak)?,
            Space::Dirichlet => dirichlet_rudin(&piece.set, &u, eps, PHI_DIRICHLET_LEVELS)?,
        };
        hs.push(r.h);
    }
    let samples: Vec<(f64, Complex64)> = pieces.iter().flat_map(|p| p.set.grid().into_iter().map(move |t| (t, p.v))).collect();
    let h_mat = DMatrix::from_fn(samples.len(), pieces.len(), |s, j| evaluate(&hs[j], Complex64::from_polar(1.0, samples[s].0)));
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let sol = h_mat.svd(true, true).solve(&rhs, 1e-14).map_err(|e| Error::Construction(format!("Rudin calibration failed: {e}")))?;
    let exponents: Vec<Complex64> = sol.iter().copied().collect();
    let mut sum = CoeffSeries::zeros(0);
    for (h, &v) in hs.iter().zip(&exponents) {
        sum = &sum + &h.scale(v);
    }
    let vmax = exponents.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(Phi { series: exp_series(&sum), uniform_bound: (2.0 * pieces.len() as f64 * vmax).exp(), exponents, level })
}

/// Separate tolerances for the space norm and the boundary sup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub space: f64,
    pub boundary: f64,
}

impl Tolerances {
    pub fn uniform(eps: f64) -> Self {
        Self { space: eps, boundary: eps }
    }
}

/// Budget and construction parameters of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroFreeOptions {
    pub peak: f64,
    pub max_level: usize,
    pub max_degree: usize,
}

impl Default for ZeroFreeOptions {
    fn default() -> Self {
        Self { peak: PHI_PEAK, max_level: MAX_LEVEL, max_degree: MAX_DEGREE }
    }
}

/// One attempted `(r, n, D, r′)` combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub dilation: f64,
    pub level: usize,
    pub degree: usize,
    pub second_dilation: f64,
    pub space_error: f64,
    pub boundary_error: f64,
    /// `None` when the errors ruled the candidate out before certification.
    pub zero_free: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroFreeApproxResult {
    #[serde(rename = "P")]
    pub p: CoeffSeries,
    pub report: ZeroFreeReport,
    pub space_error: f64,
    pub boundary_error: f64,
    pub trace: Vec<TraceEntry>,
}

/// Level schedule: `⌈8·2^{j/4}⌉`, deduplicated, up to `max_level`.
pub fn level_schedule(max_level: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for j in 0.. {
        let n = (8.0 * 2f64.powf(j as f64 / 4.0)).ceil() as usize;
        if n > max_level {
            break;
        }
        if out.last() != Some(&n) {
            out.push(n);
        }
    }
    out
}

/// `sup_𝕋 |p|` from a grid maximum plus a derivative margin.
fn sup_circle(p: &CoeffSeries) -> f64 {
    let g = grid::next_pow2(4 * p.coeffs().len()).max(1 << 12);
    let max = p.circle_values(g).iter().map(|v| v.norm()).fold(0.0, f64::max);
    max + p.derivative_bound() * PI / g as f64
}

fn has_zeros_in_open_disc(g: &CoeffSeries) -> Result<bool> {
    let d = g.to_exact();
    let gr = dilate(&d, OPEN_DISC_RADIUS)?;
    let size = grid::next_pow2(16 * gr.coeffs().len()).max(1 << 12);
    let vals = gr.circle_values(size);
    if vals.iter().any(|v| v.norm() == 0.0) {
        return Ok(true);
    }
    Ok(winding(&vals) != 0)
}

fn space_distance(p: &CoeffSeries, g: &CoeffSeries, space: Space) -> f64 {
    distance_alpha(p, g, space.weight()) + g.tail_bound()
}

/// Main entry point: one tolerance for both errors.
pub fn simultaneous_zero_free(
    g: &CoeffSeries,
    e: &BoundarySet,
    targets: &[Complex64],
    eps: f64,
    space: Space,
) -> Result<ZeroFreeApproxResult> {
    simultaneous_zero_free_with(g, e, targets, Tolerances::uniform(eps), space, ZeroFreeOptions::default())
}

/// `targets[i]` is the prescribed value at `e.points()[i]`.
pub fn simultaneous_zero_free_with(
    g: &CoeffSeries,
    e: &BoundarySet,
    targets: &[Complex64],
    tol: Tolerances,
    space: Space,
    opts: ZeroFreeOptions,
) -> Result<ZeroFreeApproxResult> {
    for t in [tol.space, tol.boundary] {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {t} must be positive")));
        }
    }
    if g.is_zero() {
        return Err(Error::InvalidInput("g is identically zero".into()));
    }
    if space == Space::Dirichlet && !g.is_exact() {
        return Err(Error::InvalidInput("Dirichlet runs need an exact polynomial g".into()));
    }
    if e.positive_measure() || !e.arcs().is_empty() {
        return Err(Error::PositiveMeasure);
    }
    let points = e.points().to_vec();
    if targets.len() != points.len() {
        return Err(Error::InvalidInput(format!("{} targets for {} points of E", targets.len(), points.len())));
    }
    if let Some(i) = targets.iter().position(|t| t.norm() == 0.0 || !t.re.is_finite() || !t.im.is_finite()) {
        return Err(Error::InvalidInput(format!("target at θ = {} is zero or not finite", points[i])));
    }
    if has_zeros_in_open_disc(g)? {
        return Err(Error::InvalidInput("g has zeros in the open unit disc".into()));
    }
    precheck(g, &points, targets, tol, space, opts.max_degree)?;

    let g_exact = g.to_exact();
    let mut trace = Vec::new();
    let mut best = (f64::INFINITY, f64::INFINITY);
    let mut dil = None;
    for &r in &DILATIONS {
        let gr = dilate(&g_exact, r)?;
        if space_distance(&gr, g, space) >= tol.space / 4.0 {
            continue;
        }
        if matches!(zero_free_on_closed_disc(&gr), Ok(rep) if rep.zero_free) {
            dil = Some((r, gr));
            break;
        }
    }
    let Some((r, gr)) = dil else {
        return Err(Error::ApproximationBudget {
            message: "no dilation of g is zero-free on the closed disc within a quarter of the space tolerance".into(),
            space_error: f64::INFINITY,
            boundary_error: f64::INFINITY,
        });
    };
    let sup_gr = sup_circle(&gr);
    let target_at = |t: f64| -> Complex64 {
        let i = points
            .iter()
            .enumerate()
            .min_by(|a, b| angular_distance(*a.1, t).total_cmp(&angular_distance(*b.1, t)))
            .map(|(i, _)| i)
            .expect("E is nonempty when sampled");
        targets[i]
    };
    let ratio = |t: f64| target_at(t) / evaluate(&gr, Complex64::from_polar(1.0, t));
    let partition = piecewise_partition(&ratio, e, tol.boundary / (4.0 * sup_gr))?;

    let boundary_error = |p: &CoeffSeries| -> f64 {
        points.iter().zip(targets).map(|(&t, &f)| (evaluate(p, Complex64::from_polar(1.0, t)) - f).norm()).fold(0.0, f64::max)
    };

    let levels = if partition.pieces.iter().all(|p| p.v == Complex64::new(0.0, 0.0)) { vec![1] } else { level_schedule(opts.max_level) };
    for level in levels {
        let phi = match phi_builder_with(&partition, space, level, opts.peak) {
            Ok(phi) => phi,
            Err(Error::LevelTooSmall { .. }) => continue,
            Err(err) => return Err(err),
        };
        let full = phi.series.truncation_degree() + gr.truncation_degree();
        let product = multiply_to(&gr, &phi.series, full).to_exact();
        for &r2 in &DILATIONS[1..] {
            let gn = dilate(&product, r2)?;
            let len = gn.coeffs().len();
            // Double the truncation degree until both errors pass or the
            // product is used up.
            let mut degree = MIN_DEGREE;
            let (p, se, be) = loop {
                let p = gn.truncate(degree.min(len - 1)).to_exact().trimmed();
                let se = space_distance(&p, g, space);
                let be = boundary_error(&p);
                let done = se < tol.space && be < tol.boundary;
                if done || degree >= opts.max_degree || degree + 1 >= len {
                    break (p, se, be);
                }
                degree = (degree * 2).min(opts.max_degree);
            };
            let mut entry = TraceEntry {
                dilation: r,
                level,
                degree: p.truncation_degree(),
                second_dilation: r2,
                space_error: se,
                boundary_error: be,
                zero_free: None,
            };
            if se.max(be / tol.boundary * tol.space) < best.0.max(best.1 / tol.boundary * tol.space) {
                best = (se, be);
            }
            if se < tol.space && be < tol.boundary {
                match zero_free_on_closed_disc(&p) {
                    Ok(report) if report.zero_free => {
                        entry.zero_free = Some(true);
                        trace.push(entry);
                        return Ok(ZeroFreeApproxResult { p, report, space_error: se, boundary_error: be, trace });
                    }
                    Ok(_) | Err(Error::Indeterminate { .. }) => entry.zero_free = Some(false),
                    Err(err) => return Err(err),
                }
            }
            trace.push(entry);
        }
    }
    Err(Error::ApproximationBudget {
        message: format!("no certified polynomial within level {} and degree {}", opts.max_level, opts.max_degree),
        space_error: best.0,
        boundary_error: best.1,
    })
}

/// Rejects instances that no polynomial of degree `≤ max_degree` can meet.
///
/// On polynomials of degree `≤ D`, `|p(ζ)| ≤ ‖p‖_α·√K` with
/// `K = Σ_{k≤D} (k+1)^{−α}`. Meeting the boundary tolerance needs
/// `|P(ζ) − g(ζ)| ≥ |f(ζ) − g(ζ)| − ε_b`, so `‖P − g‖_α` is at least that
/// divided by `√K`.
fn precheck(g: &CoeffSeries, points: &[f64], targets: &[Complex64], tol: Tolerances, space: Space, max_degree: usize) -> Result<()> {
    let d = max_degree.max(g.truncation_degree());
    let k = space.weight().kernel_diagonal(d);
    let need = points
        .iter()
        .zip(targets)
        .map(|(&t, &f)| (f - evaluate(g, Complex64::from_polar(1.0, t))).norm() - tol.boundary)
        .fold(0.0, f64::max);
    let lower = need / k.sqrt();
    if lower >= tol.space {
        return Err(Error::ApproximationBudget {
            message: format!(
                "infeasible below degree {d}: boundary targets force a space error of at least {lower:.4e} (kernel bound √K = {:.4})",
                k.sqrt()
            ),
            space_error: lower,
            boundary_error: f64::INFINITY,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::Piece;

    const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    fn exp_poly(n: usize) -> CoeffSeries {
        let mut c = Vec::with_capacity(n + 1);
        let mut f = 1.0;
        for k in 0..=n {
            if k > 0 {
                f *= k as f64;
            }
            c.push(Complex64::new(1.0 / f, 0.0));
        }
        CoeffSeries::polynomial(c)
    }

    fn single_piece(theta: f64, v: Complex64) -> PiecewisePartition {
        PiecewisePartition {
            pieces: vec![Piece { set: BoundarySet::from_points(&[theta]).unwrap(), v, representative: theta }],
            epsilon: 0.0,
            arcs_used: 1,
        }
    }

    #[test]
    fn schedule_is_quarter_octaves() {
        let s = level_schedule(32);
        assert_eq!(s, vec![8, 10, 12, 14, 16, 20, 23, 27, 32]);
    }

    #[test]
    fn phi_trivial_and_single_piece() {
        let phi = phi_builder(&single_piece(0.0, Complex64::new(0.0, 0.0)), Space::Hardy, 8).unwrap();
        assert_eq!(phi.series, CoeffSeries::one());
        let phi = phi_builder(&single_piece(0.0, Complex64::new(2f64.ln(), 0.0)), Space::Hardy, 20).unwrap();
        let at = |t: f64| evaluate(&phi.series, Complex64::from_polar(1.0, t));
        assert!((at(0.0) - 2.0).norm() < 0.1);
        assert!((at(PI) - 1.0).norm() < 0.1);
        let g = 1 << 14;
        let sup = phi.series.circle_values(g.max(2 * phi.series.coeffs().len())).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(sup <= phi.uniform_bound + 1e-6);
    }

    #[test]
    fn overlapping_neighbourhoods_rejected() {
        let p = PiecewisePartition {
            pieces: vec![
                Piece { set: BoundarySet::from_points(&[0.0]).unwrap(), v: ONE, representative: 0.0 },
                Piece { set: BoundarySet::from_points(&[0.1]).unwrap(), v: -ONE, representative: 0.1 },
            ],
            epsilon: 0.0,
            arcs_used: 2,
        };
        assert!(matches!(phi_builder(&p, Space::Hardy, 8), Err(Error::LevelTooSmall { level: 8 })));
    }

    #[test]
    fn target_equal_to_g_takes_trivial_path() {
        let g = exp_poly(20);
        let e = BoundarySet::from_points(&[0.0, PI]).unwrap();
        let targets: Vec<Complex64> = e.points().iter().map(|&t| evaluate(&g, Complex64::from_polar(1.0, t))).collect();
        let res = simultaneous_zero_free(&g, &e, &targets, 0.05, Space::Hardy).unwrap();
        assert!(res.report.zero_free);
        assert!(res.space_error < 0.05 && res.boundary_error < 0.05);
    }

    #[test]
    fn contract_errors() {
        let g = exp_poly(10);
        let arc = BoundarySet::new(Vec::new(), vec![(0.0, 0.1)], 64.0).unwrap();
        assert!(matches!(simultaneous_zero_free(&g, &arc, &[], 0.1, Space::Hardy), Err(Error::PositiveMeasure)));
        let e = BoundarySet::from_points(&[0.0]).unwrap();
        let zero = CoeffSeries::zeros(3);
        assert!(matches!(simultaneous_zero_free(&zero, &e, &[ONE], 0.1, Space::Hardy), Err(Error::InvalidInput(_))));
        let with_zero = CoeffSeries::from_real(&[-0.5, 1.0]);
        assert!(matches!(simultaneous_zero_free(&with_zero, &e, &[ONE], 0.1, Space::Hardy), Err(Error::InvalidInput(_))));
        assert!(matches!(simultaneous_zero_free(&g, &e, &[Complex64::new(0.0, 0.0)], 0.1, Space::Hardy), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn dirichlet_precheck_reports_budget() {
        let g = exp_poly(20);
        let e = BoundarySet::from_points(&[0.0, PI]).unwrap();
        let targets = [Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0)];
        let err = simultaneous_zero_free(&g, &e, &targets, 0.1, Space::Dirichlet).unwrap_err();
        assert!(matches!(err, Error::ApproximationBudget { .. }));
    }
}
