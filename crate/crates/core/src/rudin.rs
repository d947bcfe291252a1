//! Rudin peak functions: `h = 1 − exp(−F)` with `F` the analytic completion
//! of a nonnegative boundary profile (Hardy case) or a weighted sum of
//! equilibrium potentials of shrinking arcs (Dirichlet case).
//!
//! Because `Re F ≥ 0` on the closed disc, `|1 − h| ≤ 1` and `|h| ≤ 2`. A large
//! value of `F` on `E` pushes `h` towards 1 there, and a small value off the
//! neighbourhood `U` keeps `|h|` small.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{angular_distance, Arc, BoundarySet};
use crate::coeffseries::{evaluate, exp_series, CoeffSeries};
use crate::error::{Error, Result};
use crate::grid;
use crate::spaces::dirichlet_integral;

/// Smallest circle grid used for certification.
pub const CERT_GRID_MIN: usize = 1 << 14;
/// Interior radii at which certificates are also checked.
pub const CERT_RADII: [f64; 3] = [0.5, 0.9, 0.99];
/// Allowed excess of `|h|` over 2 on the certification grids.
pub const SUP_TOL: f64 = 1e-6;
/// Allowed excess of `|1 − h|` at the peaks over `exp(−M)`.
pub const PEAK_TOL: f64 = 1e-4;
/// Fraction of the admissible mass actually used.
pub const MASS_SAFETY: f64 = 0.5;
/// Largest circle grid the Hardy construction will try.
pub const MAX_GRID_LOG2: u32 = 23;
/// Nodes per arc for each equilibrium measure in the Dirichlet construction.
pub const DIRICHLET_NODES: usize = 64;
/// Default gradient iterations for [`equilibrium_measure`].
pub const EQUILIBRIUM_ITERATIONS: usize = 2000;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Shape of each peak of the boundary profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `exp(−t²/2)` in units of the width, cut at `|t| = 8`.
    #[default]
    Gaussian,
    /// `exp(1 − 1/(1 − t²))` on `|t| < 1`.
    Bump,
}

impl Profile {
    /// Support half-width in units of the width parameter.
    pub fn support(self) -> f64 {
        match self {
            Profile::Gaussian => 8.0,
            Profile::Bump => 1.0,
        }
    }

    /// Smallest width parameter, in grid cells.
    pub fn min_cells(self) -> f64 {
        match self {
            Profile::Gaussian => 3.0,
            Profile::Bump => 4.0,
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        match self {
            Profile::Gaussian => {
                if t.abs() <= 8.0 {
                    (-0.5 * t * t).exp()
                } else {
                    0.0
                }
            }
            Profile::Bump => {
                if t.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            }
        }
    }
}

/// Real samples `u(e^{iθ_j})` on a uniform grid of `2^q` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFunction {
    pub grid_values: Vec<f64>,
    pub grid_log2: u32,
    /// `(1/2π)∫u` by the trapezoid rule.
    pub mass: f64,
    /// Width parameter of each component's profile (empty for raw samples).
    pub widths: Vec<f64>,
}

impl BoundaryFunction {
    /// Wraps raw samples. The length must be a power of two.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let g = values.len();
        if g < 2 || !g.is_power_of_two() {
            return Err(Error::InvalidInput(format!("grid length {g} is not a power of two ≥ 2")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite boundary sample".into()));
        }
        let mass = values.iter().sum::<f64>() / g as f64;
        Ok(Self { grid_values: values, grid_log2: g.trailing_zeros(), mass, widths: Vec::new() })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_values.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.grid_values.iter().all(|&v| v >= 0.0)
    }
}

/// One connected piece of `E`: a point (`half_width = 0`) or an arc.
#[derive(Debug, Clone, Copy)]
struct Component {
    center: f64,
    half_width: f64,
}

fn components(e: &BoundarySet) -> Vec<Component> {
    e.points()
        .iter()
        .map(|&p| Component { center: p, half_width: 0.0 })
        .chain(e.arcs().iter().map(|a| Component { center: a.center, half_width: a.half_width }))
        .collect()
}

/// The arc of `u` whose interior contains the component, and the angular
/// room left between the component and the arc's ends.
fn enclosing(u: &BoundarySet, c: Component) -> Option<(Arc, f64)> {
    u.arcs().iter().find_map(|a| {
        if a.is_full_circle() {
            return Some((*a, PI - c.half_width));
        }
        let room = a.half_width - angular_distance(c.center, a.center) - c.half_width;
        (room > 0.0).then_some((*a, room))
    })
}

fn add_component(values: &mut [f64], c: Component, peak: f64, width: f64, profile: Profile) {
    let g = values.len();
    let h = TAU / g as f64;
    let reach = c.half_width + profile.support() * width;
    let k = (reach / h).ceil() as i64 + 1;
    let j0 = (c.center / h).round() as i64;
    for off in -k..=k {
        let idx = (j0 + off).rem_euclid(g as i64) as usize;
        let d = angular_distance(grid::node(idx, g), c.center);
        let t = (d - c.half_width).max(0.0) / width;
        values[idx] += peak * profile.eval(t);
    }
}

fn profile_values(comps: &[Component], widths: &[f64], peak: f64, g: usize, profile: Profile) -> Vec<f64> {
    let mut values = vec![0.0; g];
    for (c, &w) in comps.iter().zip(widths) {
        add_component(&mut values, *c, peak, w, profile);
    }
    values
}

/// Boundary profile `u = Σ M·φ(dist(θ, E_j)/w_j)` on a grid of `2^grid_log2`
/// nodes.
///
/// Widths start at the largest value whose support stays inside `U` and are
/// shrunk until the trapezoid mass is below `mass_target`.
pub fn bump_profile(e: &BoundarySet, u: &BoundarySet, peak: f64, mass_target: f64, grid_log2: u32) -> Result<BoundaryFunction> {
    bump_profile_with(e, u, peak, mass_target, grid_log2, Profile::default())
}

pub fn bump_profile_with(
    e: &BoundarySet,
    u: &BoundarySet,
    peak: f64,
    mass_target: f64,
    grid_log2: u32,
    profile: Profile,
) -> Result<BoundaryFunction> {
    if !(peak.is_finite() && peak > 0.0) {
        return Err(Error::InvalidParameter(format!("peak {peak} must be positive")));
    }
    if !(mass_target > 0.0) {
        return Err(Error::InvalidParameter(format!("mass target {mass_target} must be positive")));
    }
    if !(1..=30).contains(&grid_log2) {
        return Err(Error::InvalidParameter(format!("grid_log2 {grid_log2} outside 1..=30")));
    }
    let g = 1usize << grid_log2;
    let comps = components(e);
    if comps.is_empty() {
        return Ok(BoundaryFunction { grid_values: vec![0.0; g], grid_log2, mass: 0.0, widths: Vec::new() });
    }
    let mut widths = Vec::with_capacity(comps.len());
    for c in &comps {
        let (_, room) =
            enclosing(u, *c).ok_or_else(|| Error::InvalidInput(format!("component of E at θ = {} is not inside U", c.center)))?;
        widths.push(room / profile.support());
    }
    let floor = profile.min_cells() * TAU / g as f64;
    let mass_of = |w: &[f64]| profile_values(&comps, w, peak, g, profile).iter().sum::<f64>() / g as f64;
    let mut mass = mass_of(&widths);
    if mass >= mass_target {
        // Point peaks have mass linear in the width; start from that guess.
        let s = 0.95 * mass_target / mass;
        for (w, c) in widths.iter_mut().zip(&comps) {
            if c.half_width == 0.0 {
                *w *= s;
            }
        }
        mass = mass_of(&widths);
    }
    while mass >= mass_target {
        if widths.iter().any(|&w| w * 0.9 < floor) {
            return Err(Error::Resolution(format!(
                "mass target {mass_target:e} needs profile widths below {} grid cells at grid_log2 = {grid_log2}; use a larger grid",
                profile.min_cells()
            )));
        }
        for w in &mut widths {
            *w *= 0.9;
        }
        mass = mass_of(&widths);
    }
    if widths.iter().any(|&w| w < floor) {
        return Err(Error::Resolution(format!(
            "profile width below {} grid cells at grid_log2 = {grid_log2}; use a larger grid",
            profile.min_cells()
        )));
    }
    let grid_values = profile_values(&comps, &widths, peak, g, profile);
    Ok(BoundaryFunction { grid_values, grid_log2, mass, widths })
}

/// Taylor coefficients of `u + iũ` with `ũ(0) = 0`: `c_0 = û_0`,
/// `c_k = 2û_k` for `0 < k < G/2`, and `c_{G/2} = û_{G/2}` so that the real
/// part interpolates `u` at the grid nodes.
pub fn analytic_completion(u: &BoundaryFunction, n: usize) -> Result<CoeffSeries> {
    let g = u.grid_size();
    if n > g / 2 {
        return Err(Error::Aliasing { degree: n, grid: g });
    }
    let vals: Vec<Complex64> = u.grid_values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let uh = grid::fourier_coefficients(&vals);
    let coef = |k: usize| -> Complex64 {
        if k == 0 || k == g / 2 {
            uh[k]
        } else {
            uh[k] * 2.0
        }
    };
    let coeffs: Vec<Complex64> = (0..=n).map(coef).collect();
    let tail = (n + 1..=g / 2).map(|k| coef(k).norm_sqr()).sum::<f64>().sqrt();
    CoeffSeries::new(coeffs, tail)
}

/// Bounds established on the certification grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RudinCertificate {
    /// `max |h|`.
    pub sup_bound: f64,
    /// `max |h|` over grid points outside the planar neighbourhood.
    pub off_neighborhood_sup: f64,
    /// `max_E |h − 1|`.
    pub peak_deviation: f64,
    /// `min Re F`.
    pub min_real_part: f64,
    /// `D(h) = Σ k|h_k|²`, Dirichlet construction only.
    pub dirichlet_energy: Option<f64>,
    /// `D(F)`, which dominates `D(h)`.
    pub dirichlet_bound: Option<f64>,
    pub circle_grid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RudinFunction {
    pub completion: CoeffSeries,
    pub h: CoeffSeries,
    pub peak_set: BoundarySet,
    pub neighborhood: BoundarySet,
    pub peak: f64,
    pub certified: RudinCertificate,
}

/// The planar neighbourhood: discs centred at `e^{ic}` with radius
/// `2 sin(hw/2)`, whose traces on the circle are the arcs of `U`.
struct PlanarU {
    discs: Vec<(Complex64, f64)>,
    everything: bool,
}

impl PlanarU {
    fn new(u: &BoundarySet) -> Self {
        Self {
            discs: u.arcs().iter().map(|a| (Complex64::from_polar(1.0, a.center), 2.0 * (a.half_width.min(PI) / 2.0).sin())).collect(),
            everything: u.arcs().iter().any(|a| a.is_full_circle()),
        }
    }

    fn contains(&self, z: Complex64) -> bool {
        self.everything || self.discs.iter().any(|&(c, r)| (z - c).norm() < r)
    }
}

/// Certification data computed from grid values.
struct GridCheck {
    sup: f64,
    off: f64,
    min_re: f64,
}

fn check_grids(f: &CoeffSeries, h: &CoeffSeries, u: &BoundarySet, g_circle: usize) -> GridCheck {
    let planar = PlanarU::new(u);
    let mut out = GridCheck { sup: 0.0, off: 0.0, min_re: f64::INFINITY };
    let mut visit = |r: f64, g: usize, on_circle: bool| {
        let hv = h.circle_values_at_radius(r, g);
        let fv = f.circle_values_at_radius(r, g);
        for (j, (hz, fz)) in hv.iter().zip(&fv).enumerate() {
            let a = hz.norm();
            out.sup = out.sup.max(a);
            out.min_re = out.min_re.min(fz.re);
            let theta = grid::node(j, g);
            let outside = if on_circle { !u.contains_open(theta) } else { !planar.contains(Complex64::from_polar(r, theta)) };
            if outside {
                out.off = out.off.max(a);
            }
        }
    };
    visit(1.0, g_circle, true);
    for r in CERT_RADII {
        visit(r, CERT_GRID_MIN, false);
    }
    out
}

fn peak_deviation(h: &CoeffSeries, e: &BoundarySet) -> f64 {
    e.grid().iter().map(|&t| (evaluate(h, Complex64::from_polar(1.0, t)) - ONE).norm()).fold(0.0, f64::max)
}

fn validate_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps {eps} must be positive")))
    }
}

fn empty_rudin(e: &BoundarySet, u: &BoundarySet, peak: f64, dirichlet: bool) -> RudinFunction {
    RudinFunction {
        completion: CoeffSeries::zeros(0),
        h: CoeffSeries::zeros(0),
        peak_set: e.clone(),
        neighborhood: u.clone(),
        peak,
        certified: RudinCertificate {
            sup_bound: 0.0,
            off_neighborhood_sup: 0.0,
            peak_deviation: 0.0,
            min_real_part: 0.0,
            dirichlet_energy: dirichlet.then_some(0.0),
            dirichlet_bound: dirichlet.then_some(0.0),
            circle_grid: CERT_GRID_MIN,
        },
    }
}

/// Options for [`hardy_rudin_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyOptions {
    pub profile: Profile,
    /// Fixed starting grid; chosen from the required width when absent.
    pub grid_log2: Option<u32>,
}

impl Default for HardyOptions {
    fn default() -> Self {
        Self { profile: Profile::Gaussian, grid_log2: None }
    }
}

/// Hardy-space Rudin function with `|h| < eps` off `U` and `|1 − h| ≈ e^{−M}`
/// on `E`.
pub fn hardy_rudin(e: &BoundarySet, u: &BoundarySet, eps: f64, peak: f64) -> Result<RudinFunction> {
    hardy_rudin_with(e, u, eps, peak, HardyOptions::default())
}

/// Profile mass that keeps `|F| < log(1+eps)` off `U`, given the support
/// half-width of each component. The Herglotz kernel gives
/// `|F(z)| ≤ 2·mass/dist(z, supp u)`.
fn admissible_mass(comps: &[Component], u: &BoundarySet, reach: &[f64], eps: f64) -> f64 {
    let dist = comps
        .iter()
        .zip(reach)
        .map(|(c, &s)| {
            let (arc, _) = enclosing(u, *c).expect("checked by caller");
            if arc.is_full_circle() {
                return f64::INFINITY;
            }
            let off = angular_distance(c.center, arc.center) + c.half_width + s;
            2.0 * (arc.half_width / 2.0).sin() - 2.0 * (off.min(PI) / 2.0).sin()
        })
        .fold(f64::INFINITY, f64::min);
    MASS_SAFETY * dist * (1.0 + eps).ln() / 2.0
}

pub fn hardy_rudin_with(e: &BoundarySet, u: &BoundarySet, eps: f64, peak: f64, opts: HardyOptions) -> Result<RudinFunction> {
    validate_eps(eps)?;
    if !(peak.is_finite() && peak > 0.0) {
        return Err(Error::InvalidParameter(format!("peak {peak} must be positive")));
    }
    let comps = components(e);
    if comps.is_empty() {
        return Ok(empty_rudin(e, u, peak, false));
    }
    let mut rooms = Vec::with_capacity(comps.len());
    for c in &comps {
        let (_, room) =
            enclosing(u, *c).ok_or_else(|| Error::InvalidInput(format!("component of E at θ = {} is not inside U", c.center)))?;
        rooms.push(room);
    }
    let profile = opts.profile;
    // Point-peak mass per unit width, used to predict the width.
    let unit_mass = match profile {
        Profile::Gaussian => peak / (TAU).sqrt(),
        Profile::Bump => peak * 0.443_993_816_168_079_4 * 1f64.exp() / TAU,
    };
    let mut reach = vec![0.0; comps.len()];
    let mut delta = 0.0;
    let mut width = f64::INFINITY;
    for _ in 0..20 {
        delta = admissible_mass(&comps, u, &reach, eps);
        if !(delta > 0.0) {
            return Err(Error::Construction("E touches the boundary of U".into()));
        }
        // Supports stay within half the room so the distance to the
        // complement of U remains positive.
        let room = rooms.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        width = (delta / comps.len() as f64 / unit_mass).min(0.5 * room / profile.support());
        reach.fill(profile.support() * width);
    }
    let inner_u = BoundarySet::new(
        Vec::new(),
        comps.iter().zip(&rooms).map(|(c, _)| (c.center, c.half_width + profile.support() * width * 1.2)).collect(),
        u.sample_density(),
    )?;
    let start = opts.grid_log2.unwrap_or_else(|| {
        let cells = TAU / (width / (profile.min_cells() + 1.0));
        (cells.log2().ceil() as u32).max(CERT_GRID_MIN.trailing_zeros())
    });
    let mut last_err = None;
    for q in start..=(start + 2).min(MAX_GRID_LOG2.max(start)) {
        let bf = match bump_profile_with(e, &inner_u, peak, delta, q, profile) {
            Ok(bf) => bf,
            Err(err) => {
                last_err = Some(err);
                continue;
            }
        };
        let g = bf.grid_size();
        let completion = analytic_completion(&bf, g / 2)?;
        let h = (-&exp_series(&(-&completion))).add_constant(ONE);
        let g_circle = g.max(CERT_GRID_MIN);
        let check = check_grids(&completion, &h, u, g_circle);
        let dev = peak_deviation(&h, e);
        let cert = RudinCertificate {
            sup_bound: check.sup,
            off_neighborhood_sup: check.off,
            peak_deviation: dev,
            min_real_part: check.min_re,
            dirichlet_energy: None,
            dirichlet_bound: None,
            circle_grid: g_circle,
        };
        if cert.sup_bound <= 2.0 + SUP_TOL && cert.off_neighborhood_sup < eps && dev <= (-peak).exp() + PEAK_TOL {
            return Ok(RudinFunction { completion, h, peak_set: e.clone(), neighborhood: u.clone(), peak, certified: cert });
        }
        last_err = Some(Error::Construction(format!(
            "certification failed at grid 2^{q}: sup {:.3e}, off-U sup {:.3e} (eps {eps:e}), peak deviation {:.3e}",
            cert.sup_bound, cert.off_neighborhood_sup, dev
        )));
    }
    Err(last_err.unwrap_or_else(|| Error::Construction("no grid attempted".into())))
}

/// Discrete probability measure on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Logarithmic energy including the self-interaction of each node cell.
    pub energy: f64,
    pub capacity: f64,
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(y: &mut [f64]) {
    let mut s: Vec<f64> = y.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &v) in s.iter().enumerate() {
        cum += v;
        let t = (cum - 1.0) / (i + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    for v in y.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
}

fn mat_vec(k: &[f64], n: usize, w: &[f64], out: &mut [f64]) {
    for i in 0..n {
        let row = &k[i * n..(i + 1) * n];
        out[i] = row.iter().zip(w).map(|(a, b)| a * b).sum();
    }
}

/// Equilibrium measure of a union of arcs by projected gradient descent on
/// the discrete logarithmic energy `wᵀKw`.
///
/// Nodes are the midpoints of `nodes_per_arc` equal cells on each arc;
/// `K_ij = log(1/|x_i − x_j|)` off the diagonal and `K_ii = log(2π/ℓ_i)` with
/// `ℓ_i` the cell length, the local correction for the logarithmic
/// singularity.
pub fn equilibrium_measure(arcs: &BoundarySet, nodes_per_arc: usize, iterations: usize) -> Result<DiscreteMeasure> {
    if arcs.arcs().is_empty() || !(arcs.total_length() > 0.0) {
        return Err(Error::InvalidInput("equilibrium measure needs at least one arc of positive length".into()));
    }
    if nodes_per_arc < 8 {
        return Err(Error::InvalidParameter(format!("nodes_per_arc {nodes_per_arc} < 8")));
    }
    let mut nodes = Vec::new();
    let mut cells = Vec::new();
    for a in arcs.arcs() {
        let len = a.length();
        let start = if a.is_full_circle() { 0.0 } else { a.center - a.half_width };
        let l = len / nodes_per_arc as f64;
        for i in 0..nodes_per_arc {
            nodes.push(crate::boundary::normalize_angle(start + (i as f64 + 0.5) * l));
            cells.push(l);
        }
    }
    let n = nodes.len();
    let pts: Vec<Complex64> = nodes.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            k[i * n + j] = if i == j { (TAU / cells[i]).ln() } else { -(pts[i] - pts[j]).norm().ln() };
        }
    }
    // Power iteration for the largest eigenvalue of K.
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut kv = vec![0.0; n];
    let mut lambda = 0.0;
    for _ in 0..200 {
        mat_vec(&k, n, &v, &mut kv);
        let norm = kv.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        lambda = norm;
        for (a, b) in v.iter_mut().zip(&kv) {
            *a = b / norm;
        }
    }
    let step = 1.0 / (1.01 * lambda);
    let mut w = vec![1.0 / n as f64; n];
    let energy_of = |w: &[f64], kw: &mut [f64]| {
        mat_vec(&k, n, w, kw);
        w.iter().zip(kw.iter()).map(|(a, b)| a * b).sum::<f64>()
    };
    let checkpoint = (iterations / 20).max(1);
    let mut last = energy_of(&w, &mut kv);
    let mut rises = 0;
    for it in 1..=iterations {
        mat_vec(&k, n, &w, &mut kv);
        for (wi, g) in w.iter_mut().zip(&kv) {
            *wi -= step * g;
        }
        project_simplex(&mut w);
        if it % checkpoint == 0 {
            let e = energy_of(&w, &mut kv);
            if e > last + 1e-12 * last.abs().max(1.0) {
                rises += 1;
                if rises >= 3 {
                    return Err(Error::Convergence(format!("energy rose at 3 successive checkpoints (last {e})")));
                }
            } else {
                rises = 0;
            }
            last = e;
        }
    }
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    let energy = energy_of(&w, &mut kv);
    Ok(DiscreteMeasure { nodes, weights: w, energy, capacity: (-energy).exp() })
}

/// Closed-form logarithmic capacity `sin(length/4)` of a single arc.
pub fn arc_capacity(length: f64) -> f64 {
    (length.min(TAU) / 4.0).sin()
}

/// Taylor coefficients of `f_μ(z) = ∫ log(2/(1 − zζ̄)) dμ(ζ)` up to degree
/// `n`, with the measure smoothed by a wrapped Gaussian of width `tau`.
fn potential_coeffs(mu: &DiscreteMeasure, n: usize, tau: f64) -> Vec<Complex64> {
    let mut c = vec![ZERO; n + 1];
    c[0] = Complex64::new(LN_2, 0.0);
    for (&t, &p) in mu.nodes.iter().zip(&mu.weights) {
        if p == 0.0 {
            continue;
        }
        let step = Complex64::from_polar(1.0, -t);
        let mut zk = step;
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            if k % 256 == 0 {
                zk = Complex64::from_polar(1.0, -(k as f64) * t);
            }
            *ck += zk * p;
            zk *= step;
        }
    }
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        *ck *= (-0.5 * kf * kf * tau * tau).exp() / kf;
    }
    c
}

/// Dirichlet-space Rudin function: `F = Σ_n w_n f_{μ_n}` over nested arcs
/// `E_1 ⊃ … ⊃ E_levels` around each point of `E`, `h = 1 − exp(−F)`.
///
/// `w_n = min(c_n, B²4^{−n})` with `c_n = 1/(log 2 + I(μ_n))`, so `c_n f_{μ_n}`
/// is close to 1 on `E_n`. `B` is bisected to the largest value for which
/// `D(F) ≤ eps` and `|h| < eps` off `U` on the certification grids. Since
/// `|h′| = |F′| e^{−Re F}` and `Re F ≥ 0`, `D(h) ≤ D(F)`.
pub fn dirichlet_rudin(e: &BoundarySet, u: &BoundarySet, eps: f64, levels: usize) -> Result<RudinFunction> {
    validate_eps(eps)?;
    if levels < 2 {
        return Err(Error::InvalidParameter(format!("levels {levels} < 2")));
    }
    if !e.arcs().is_empty() {
        return Err(Error::InvalidInput("Dirichlet Rudin functions need a finite point set E".into()));
    }
    if e.is_empty() {
        return Ok(empty_rudin(e, u, 0.0, true));
    }
    let comps = components(e);
    let mut l1 = f64::INFINITY;
    for c in &comps {
        let (_, room) = enclosing(u, *c).ok_or_else(|| Error::InvalidInput(format!("point of E at θ = {} is not inside U", c.center)))?;
        l1 = l1.min(room / 2.0);
    }
    // Arcs around distinct points must not merge.
    let sep = e
        .points()
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| e.points()[i + 1..].iter().map(move |&b| angular_distance(a, b)))
        .fold(f64::INFINITY, f64::min);
    l1 = l1.min(0.45 * sep).min(PI / 2.0);

    let half_width = |n: usize| l1 * 2f64.powi(1 - n as i32);
    let tau = 2.0 * half_width(levels) / DIRICHLET_NODES as f64;
    let degree = (8.0 / tau).ceil() as usize;
    let g = grid::next_pow2(2 * (degree + 1)).max(CERT_GRID_MIN);

    let mut caps = Vec::with_capacity(levels);
    let mut pots = Vec::with_capacity(levels);
    for n in 1..=levels {
        let arcs = BoundarySet::new(Vec::new(), e.points().iter().map(|&p| (p, half_width(n))).collect(), e.sample_density())?;
        let mu = equilibrium_measure(&arcs, DIRICHLET_NODES, EQUILIBRIUM_ITERATIONS)?;
        caps.push(1.0 / (LN_2 + mu.energy));
        pots.push(potential_coeffs(&mu, degree, tau));
    }

    // Grid values of each potential for the cheap feasibility test.
    let planar = PlanarU::new(u);
    let mut grids: Vec<(Vec<Vec<Complex64>>, Vec<bool>)> = Vec::new();
    for (r, gg) in std::iter::once((1.0, g)).chain(CERT_RADII.iter().map(|&r| (r, CERT_GRID_MIN))) {
        let vals: Vec<Vec<Complex64>> = pots.iter().map(|p| grid::circle_values_scaled(p, r, gg)).collect();
        let off: Vec<bool> = (0..gg)
            .map(|j| {
                let t = grid::node(j, gg);
                if r == 1.0 {
                    !u.contains_open(t)
                } else {
                    !planar.contains(Complex64::from_polar(r, t))
                }
            })
            .collect();
        grids.push((vals, off));
    }

    let weights_for = |b: f64| -> Vec<f64> { caps.iter().enumerate().map(|(i, &c)| c.min(b * b * 4f64.powi(-(i as i32 + 1)))).collect() };
    let combine = |w: &[f64]| -> Vec<Complex64> {
        let mut f = vec![ZERO; degree + 1];
        for (p, &wi) in pots.iter().zip(w) {
            for (a, b) in f.iter_mut().zip(p) {
                *a += b * wi;
            }
        }
        f
    };
    let feasible = |w: &[f64]| -> bool {
        let f = CoeffSeries::polynomial(combine(w));
        if dirichlet_integral(&f) > eps {
            return false;
        }
        grids.iter().all(|(vals, off)| {
            (0..off.len()).filter(|&j| off[j]).all(|j| {
                let fz: Complex64 = vals.iter().zip(w).map(|(v, &wi)| v[j] * wi).sum();
                (ONE - (-fz).exp()).norm() < eps
            })
        })
    };
    let b_max = (0..levels).map(|i| (caps[i] * 4f64.powi(i as i32 + 1)).sqrt()).fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0, b_max);
    if feasible(&weights_for(hi)) {
        lo = hi;
    } else {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if feasible(&weights_for(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    if lo == 0.0 {
        return Err(Error::Construction("no positive capacity budget meets the energy and off-U bounds".into()));
    }
    let w = weights_for(lo);
    let completion = CoeffSeries::polynomial(combine(&w));
    let h = (-&exp_series(&(-&completion))).add_constant(ONE);
    let check = check_grids(&completion, &h, u, g);
    let bound = dirichlet_integral(&completion);
    let energy = dirichlet_integral(&h);
    let dev = peak_deviation(&h, e);
    let cert = RudinCertificate {
        sup_bound: check.sup,
        off_neighborhood_sup: check.off,
        peak_deviation: dev,
        min_real_part: check.min_re,
        dirichlet_energy: Some(energy),
        dirichlet_bound: Some(bound),
        circle_grid: g,
    };
    if cert.sup_bound > 2.0 + SUP_TOL || cert.off_neighborhood_sup >= eps || energy > eps {
        return Err(Error::Construction(format!(
            "certification failed: sup {:.3e}, off-U sup {:.3e}, D(h) {:.3e} (eps {eps:e})",
            cert.sup_bound, cert.off_neighborhood_sup, energy
        )));
    }
    Ok(RudinFunction {
        completion,
        h,
        peak_set: e.clone(),
        neighborhood: u.clone(),
        peak: w.iter().zip(&caps).map(|(a, c)| a / c).sum(),
        certified: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::neighborhood;

    fn pts(p: &[f64]) -> BoundarySet {
        BoundarySet::from_points(p).unwrap()
    }

    #[test]
    fn empty_profile_and_rudin() {
        let u = neighborhood(&pts(&[0.0]), 0.1).unwrap();
        let bf = bump_profile(&BoundarySet::empty(), &u, 12.0, 0.05, 10).unwrap();
        assert_eq!(bf.mass, 0.0);
        assert!(bf.grid_values.iter().all(|&v| v == 0.0));
        let r = hardy_rudin(&BoundarySet::empty(), &u, 0.01, 12.0).unwrap();
        assert!(r.h.is_zero());
        let r = dirichlet_rudin(&BoundarySet::empty(), &u, 0.05, 4).unwrap();
        assert!(r.h.is_zero());
        assert_eq!(r.certified.dirichlet_energy, Some(0.0));
    }

    #[test]
    fn bump_profile_example() {
        let e = pts(&[0.0]);
        let u = neighborhood(&e, 0.1).unwrap();
        for profile in [Profile::Gaussian, Profile::Bump] {
            let bf = bump_profile_with(&e, &u, 12.0, 0.05, 14, profile).unwrap();
            assert_eq!(bf.grid_values[0], 12.0);
            assert!(bf.mass < 0.05 && bf.mass > 0.0);
            let g = bf.grid_size();
            for (j, v) in bf.grid_values.iter().enumerate() {
                if !u.contains_open(grid::node(j, g)) {
                    assert_eq!(*v, 0.0);
                }
            }
        }
    }

    #[test]
    fn mass_scales_with_peak_times_width() {
        let e = pts(&[0.0]);
        let g = 1 << 14;
        let comps = components(&e);
        for profile in [Profile::Gaussian, Profile::Bump] {
            let m1: f64 = profile_values(&comps, &[0.02], 6.0, g, profile).iter().sum::<f64>() / g as f64;
            let m2: f64 = profile_values(&comps, &[0.01], 12.0, g, profile).iter().sum::<f64>() / g as f64;
            assert!((m1 - m2).abs() < 1e-6 * m1);
        }
    }

    #[test]
    fn resolution_error_on_coarse_grid() {
        let e = pts(&[0.0]);
        let u = neighborhood(&e, 0.1).unwrap();
        assert!(matches!(bump_profile(&e, &u, 12.0, 1e-6, 10), Err(Error::Resolution(_))));
        assert!(matches!(bump_profile(&pts(&[1.0]), &pts(&[0.0]), 1.0, 0.1, 10), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn completion_examples() {
        let one = BoundaryFunction::from_values(vec![1.0; 64]).unwrap();
        let c = analytic_completion(&one, 8).unwrap();
        assert!((c.coeff(0) - ONE).norm() < 1e-15);
        assert!(c.coeffs()[1..].iter().all(|x| x.norm() < 1e-15));
        let cos = BoundaryFunction::from_values((0..64).map(|j| grid::node(j, 64).cos()).collect()).unwrap();
        let c = analytic_completion(&cos, 8).unwrap();
        assert!((c.coeff(1) - ONE).norm() < 1e-15);
        assert!(c.coeff(0).norm() < 1e-15 && c.coeff(2).norm() < 1e-15);
        assert!(matches!(analytic_completion(&cos, 33), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn completion_matches_poisson_quadrature() {
        let e = pts(&[0.3]);
        let u = neighborhood(&e, 0.5).unwrap();
        let bf = bump_profile(&e, &u, 2.0, 0.2, 12).unwrap();
        let g = bf.grid_size();
        let c = analytic_completion(&bf, g / 2).unwrap();
        let r: f64 = 0.99;
        for theta in [0.0, 0.3, 1.0, 3.0] {
            let poisson: f64 = (0..g)
                .map(|j| {
                    let t = grid::node(j, g);
                    let p = (1.0 - r * r) / (1.0 - 2.0 * r * (theta - t).cos() + r * r);
                    p * bf.grid_values[j]
                })
                .sum::<f64>()
                / g as f64;
            let v = evaluate(&c, Complex64::from_polar(r, theta)).re;
            assert!((v - poisson).abs() < 1e-6, "θ={theta}: {v} vs {poisson}");
        }
    }

    #[test]
    fn hardy_rudin_single_point() {
        let e = pts(&[0.0]);
        let u = neighborhood(&e, 0.1).unwrap();
        let r = hardy_rudin(&e, &u, 0.01, 12.0).unwrap();
        let c = &r.certified;
        assert!(c.off_neighborhood_sup < 0.01);
        assert!(c.peak_deviation < (-12f64).exp() + 1e-4);
        assert!(c.sup_bound <= 2.0 + 1e-6);
        assert!(c.min_real_part >= -1e-6);
    }

    #[test]
    fn peak_deviation_decreases_with_peak() {
        let e = pts(&[0.0]);
        let u = neighborhood(&e, 0.2).unwrap();
        let opts = HardyOptions { grid_log2: Some(18), ..Default::default() };
        let devs: Vec<f64> =
            [1.0, 2.0, 4.0].iter().map(|&m| hardy_rudin_with(&e, &u, 0.05, m, opts).unwrap().certified.peak_deviation).collect();
        assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
    }

    #[test]
    fn equilibrium_examples() {
        let full = BoundarySet::full_circle(64.0).unwrap();
        let m = equilibrium_measure(&full, 512, 2000).unwrap();
        assert!((m.capacity - 1.0).abs() < 0.02);
        let w0 = 1.0 / 512.0;
        assert!(m.weights.iter().all(|w| (w - w0).abs() < 1e-6));
        let semi = BoundarySet::new(Vec::new(), vec![(PI / 2.0, PI / 2.0)], 64.0).unwrap();
        let m = equilibrium_measure(&semi, 512, 2000).unwrap();
        assert!((m.capacity - arc_capacity(PI)).abs() < 0.03 * arc_capacity(PI));
        let s: f64 = m.weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-12 && m.weights.iter().all(|&w| w >= 0.0));
        let quarter = BoundarySet::new(Vec::new(), vec![(PI / 2.0, PI / 4.0)], 64.0).unwrap();
        let q = equilibrium_measure(&quarter, 128, 2000).unwrap();
        let half = equilibrium_measure(&semi, 128, 2000).unwrap();
        assert!(q.capacity < half.capacity);
        assert!(equilibrium_measure(&pts(&[0.0]), 64, 10).is_err());
        assert!(equilibrium_measure(&semi, 4, 10).is_err());
    }

    #[test]
    fn dirichlet_rudin_single_point() {
        let e = pts(&[0.0]);
        let u = neighborhood(&e, 0.2).unwrap();
        let r = dirichlet_rudin(&e, &u, 0.05, 4).unwrap();
        let c = &r.certified;
        let energy = c.dirichlet_energy.unwrap();
        assert!((0.0..=0.05).contains(&energy));
        assert!(energy <= c.dirichlet_bound.unwrap() * (1.0 + 1e-9));
        assert!(c.off_neighborhood_sup < 0.05);
        assert!(c.sup_bound <= 2.0 + 1e-6);
    }
}
