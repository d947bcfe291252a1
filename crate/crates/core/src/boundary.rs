//! Closed subsets of the unit circle built from points and arcs.
//!
//! Angles are radians in `[0, 2π)`. Arcs of a [`BoundarySet`] are closed;
//! a set produced by [`neighborhood`] is read as the union of the open arcs.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coeffseries::{evaluate, CoeffSeries};
use crate::error::{Error, Result};

/// Default sampling density, points per radian of arc length.
pub const DEFAULT_SAMPLE_DENSITY: f64 = 512.0;

/// Cap on the number of partition arcs in [`piecewise_partition`].
pub const PARTITION_MAX_ARCS: usize = 4096;

/// Angles closer than this are treated as the same point.
const ANGLE_TOL: f64 = 1e-12;

/// Reduces an angle to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance between two angles along the circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub center: f64,
    pub half_width: f64,
}

impl Arc {
    pub fn is_full_circle(&self) -> bool {
        self.half_width >= PI
    }

    pub fn start(&self) -> f64 {
        normalize_angle(self.center - self.half_width)
    }

    pub fn length(&self) -> f64 {
        (2.0 * self.half_width).min(TAU)
    }

    /// Closed-arc membership.
    pub fn contains(&self, theta: f64) -> bool {
        self.is_full_circle() || angular_distance(theta, self.center) <= self.half_width + ANGLE_TOL
    }

    /// Open-arc membership.
    pub fn contains_open(&self, theta: f64) -> bool {
        self.is_full_circle() || angular_distance(theta, self.center) < self.half_width
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySet {
    points: Vec<f64>,
    arcs: Vec<Arc>,
    sample_density: f64,
}

impl BoundarySet {
    /// Normalises angles, merges overlapping arcs and drops points already
    /// covered by an arc.
    pub fn new(points: Vec<f64>, arcs: Vec<(f64, f64)>, sample_density: f64) -> Result<Self> {
        if !(sample_density.is_finite() && sample_density > 0.0) {
            return Err(Error::InvalidInput(format!("sample_density {sample_density} must be positive")));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("non-finite point angle".into()));
        }
        for &(c, hw) in &arcs {
            if !(c.is_finite() && hw.is_finite() && hw > 0.0) {
                return Err(Error::InvalidInput(format!("arc ({c}, {hw}) needs a finite center and positive half-width")));
            }
        }
        let arcs = merge_arcs(arcs.into_iter().map(|(c, hw)| Arc { center: c, half_width: hw }).collect());
        let mut pts: Vec<f64> = points.into_iter().map(normalize_angle).collect();
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| angular_distance(*a, *b) < ANGLE_TOL);
        if pts.len() > 1 && angular_distance(pts[0], *pts.last().unwrap()) < ANGLE_TOL {
            pts.pop();
        }
        pts.retain(|&p| !arcs.iter().any(|a| a.contains(p)));
        Ok(Self { points: pts, arcs, sample_density })
    }

    pub fn from_points(points: &[f64]) -> Result<Self> {
        Self::new(points.to_vec(), Vec::new(), DEFAULT_SAMPLE_DENSITY)
    }

    pub fn empty() -> Self {
        Self { points: Vec::new(), arcs: Vec::new(), sample_density: DEFAULT_SAMPLE_DENSITY }
    }

    pub fn full_circle(sample_density: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![(PI, PI)], sample_density)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn sample_density(&self) -> f64 {
        self.sample_density
    }

    pub fn with_sample_density(&self, sample_density: f64) -> Result<Self> {
        Self::new(self.points.clone(), self.arcs.iter().map(|a| (a.center, a.half_width)).collect(), sample_density)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.arcs.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    pub fn positive_measure(&self) -> bool {
        self.total_length() > 0.0
    }

    /// Number of connected components (points plus arcs).
    pub fn component_count(&self) -> usize {
        self.points.len() + self.arcs.len()
    }

    /// Closed-set membership.
    pub fn contains(&self, theta: f64) -> bool {
        self.points.iter().any(|&p| angular_distance(p, theta) < ANGLE_TOL) || self.arcs.iter().any(|a| a.contains(theta))
    }

    /// Membership in the union of the open arcs (points ignored).
    pub fn contains_open(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains_open(theta))
    }

    /// Angular distance from `theta` to the set.
    pub fn distance(&self, theta: f64) -> f64 {
        let dp = self.points.iter().map(|&p| angular_distance(p, theta));
        let da = self.arcs.iter().map(|a| (angular_distance(a.center, theta) - a.half_width).max(0.0));
        dp.chain(da).fold(f64::INFINITY, f64::min)
    }

    /// Sample angles: every point, plus each arc sampled uniformly at
    /// `sample_density` including its endpoints (a full circle is sampled
    /// without repeating the endpoint).
    pub fn grid(&self) -> Vec<f64> {
        let mut out = self.points.clone();
        for a in &self.arcs {
            if a.is_full_circle() {
                let n = ((TAU * self.sample_density).ceil() as usize).max(8);
                out.extend((0..n).map(|j| TAU * j as f64 / n as f64));
            } else {
                let n = ((a.length() * self.sample_density).ceil() as usize).max(1) + 1;
                let start = a.center - a.half_width;
                out.extend((0..n).map(|j| normalize_angle(start + a.length() * j as f64 / (n - 1) as f64)));
            }
        }
        out
    }

    /// Largest distance from a point of the set to its nearest grid sample.
    pub fn grid_spacing_radius(&self) -> f64 {
        self.arcs
            .iter()
            .map(|a| {
                if a.is_full_circle() {
                    let n = ((TAU * self.sample_density).ceil() as usize).max(8);
                    PI / n as f64
                } else {
                    let n = ((a.length() * self.sample_density).ceil() as usize).max(1);
                    0.5 * a.length() / n as f64
                }
            })
            .fold(0.0, f64::max)
    }

    /// Union of the two sets, keeping the finer sampling density.
    pub fn union(&self, other: &BoundarySet) -> Result<BoundarySet> {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        let arcs = self.arcs.iter().chain(&other.arcs).map(|a| (a.center, a.half_width)).collect();
        BoundarySet::new(points, arcs, self.sample_density.max(other.sample_density))
    }
}

fn merge_arcs(arcs: Vec<Arc>) -> Vec<Arc> {
    if arcs.iter().any(Arc::is_full_circle) {
        return vec![Arc { center: PI, half_width: PI }];
    }
    // Intervals (start, end) with start in [0, 2π).
    let mut iv: Vec<(f64, f64)> = arcs
        .iter()
        .map(|a| {
            let s = a.start();
            (s, s + a.length())
        })
        .collect();
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (s, e) in iv {
        match merged.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    // Wrap-around: the last interval may reach past 2π into the first ones.
    while merged.len() > 1 {
        let last = *merged.last().unwrap();
        let first = merged[0];
        if last.1 >= first.0 + TAU {
            merged[0] = (last.0, (first.1 + TAU).max(last.1));
            merged.pop();
        } else {
            break;
        }
    }
    merged
        .into_iter()
        .map(|(s, e)| {
            if e - s >= TAU {
                Arc { center: PI, half_width: PI }
            } else {
                Arc { center: normalize_angle(0.5 * (s + e)), half_width: 0.5 * (e - s) }
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct BoundarySetRepr {
    #[serde(default)]
    points: Vec<f64>,
    #[serde(default)]
    arcs: Vec<[f64; 2]>,
    #[serde(default = "default_density")]
    sample_density: f64,
}

fn default_density() -> f64 {
    DEFAULT_SAMPLE_DENSITY
}

impl Serialize for BoundarySet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoundarySetRepr {
            points: self.points.clone(),
            arcs: self.arcs.iter().map(|a| [a.center, a.half_width]).collect(),
            sample_density: self.sample_density,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundarySet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BoundarySetRepr::deserialize(d)?;
        BoundarySet::new(r.points, r.arcs.iter().map(|a| (a[0], a[1])).collect(), r.sample_density).map_err(serde::de::Error::custom)
    }
}

/// Union of open arcs of half-width `width` around every point and arc of
/// `e`, merged where they overlap.
pub fn neighborhood(e: &BoundarySet, width: f64) -> Result<BoundarySet> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidParameter(format!("neighbourhood width {width} must be positive")));
    }
    let arcs = e.points.iter().map(|&p| (p, width)).chain(e.arcs.iter().map(|a| (a.center, a.half_width + width))).collect();
    BoundarySet::new(Vec::new(), arcs, e.sample_density)
}

/// Upper bound for `sup_E |a|`: the grid maximum plus `L·δθ`, where
/// `L = Σ k|a_k|` and `δθ` is the largest distance from a point of `E` to
/// the grid. Points are sampled exactly, so finite sets get no margin.
pub fn sup_on_set(a: &CoeffSeries, e: &BoundarySet) -> Result<f64> {
    if e.is_empty() {
        return Err(Error::InvalidInput("sup over an empty set".into()));
    }
    let max = e.grid().into_iter().map(|t| evaluate(a, Complex64::from_polar(1.0, t)).norm()).fold(0.0, f64::max);
    let margin = e.grid_spacing_radius();
    Ok(if margin > 0.0 { max + a.derivative_bound() * margin } else { max })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub set: BoundarySet,
    /// Principal logarithm of the ratio at the representative.
    pub v: Complex64,
    pub representative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePartition {
    pub pieces: Vec<Piece>,
    /// Largest `|ratio − e^{v_j}|` over the samples of each piece.
    pub epsilon: f64,
    /// Number of equal circle arcs used.
    pub arcs_used: usize,
}

/// Splits `e` by `k` equal circle arcs (`k = 1, 2, 4, …` up to
/// [`PARTITION_MAX_ARCS`]) so that on every nonempty piece the ratio stays
/// within `eps` of `e^{v_j}`, with `v_j` the principal logarithm of the
/// ratio at the piece's first sample. Arc endpoints that land on a sample
/// are moved forward by half the gap to the next sample.
pub fn piecewise_partition(ratio: &dyn Fn(f64) -> Complex64, e: &BoundarySet, eps: f64) -> Result<PiecewisePartition> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps {eps} must be positive")));
    }
    let mut samples: Vec<(f64, Complex64)> = e.grid().into_iter().map(|t| (t, ratio(t))).collect();
    if let Some((t, _)) = samples.iter().find(|(_, r)| r.norm() == 0.0 || !r.re.is_finite() || !r.im.is_finite()) {
        return Err(Error::InvalidInput(format!("ratio vanishes or is not finite at angle {t}")));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    if samples.is_empty() {
        return Ok(PiecewisePartition { pieces: Vec::new(), epsilon: 0.0, arcs_used: 0 });
    }
    let angles: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let mut best = f64::INFINITY;
    let mut k = 1;
    while k <= PARTITION_MAX_ARCS {
        let ends = nudged_endpoints(k, &angles);
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (idx, &(t, _)) in samples.iter().enumerate() {
            let t = if t < ends[0] { t + TAU } else { t };
            let i = ends.partition_point(|&e| e <= t) - 1;
            groups[i.min(k - 1)].push(idx);
        }
        let mut pieces = Vec::new();
        let mut worst: f64 = 0.0;
        for (i, members) in groups.iter().enumerate() {
            let Some(&first) = members.first() else { continue };
            let (rep, rep_ratio) = samples[first];
            let v = rep_ratio.ln();
            let ev = v.exp();
            let dev = members.iter().map(|&m| (samples[m].1 - ev).norm()).fold(0.0, f64::max);
            worst = worst.max(dev);
            pieces.push(Piece { set: clip(e, ends[i], ends[i + 1])?, v, representative: rep });
        }
        pieces.sort_by(|a, b| a.representative.total_cmp(&b.representative));
        if worst < eps {
            return Ok(PiecewisePartition { pieces, epsilon: worst, arcs_used: k });
        }
        best = best.min(worst);
        k *= 2;
    }
    Err(Error::Resolution(format!("piecewise partition reaches deviation {best:e} at {PARTITION_MAX_ARCS} arcs, above eps {eps:e}")))
}

fn in_half_open(t: f64, lo: f64, hi: f64) -> bool {
    // Endpoints are increasing and span exactly one turn from lo ≥ 0.
    let t = if t < lo { t + TAU } else { t };
    t >= lo && t < hi
}

fn nudged_endpoints(k: usize, sorted: &[f64]) -> Vec<f64> {
    let piece = TAU / k as f64;
    let mut ends: Vec<f64> = (0..k)
        .map(|i| {
            let e = piece * i as f64;
            let hit = sorted.iter().any(|&s| angular_distance(s, e) < ANGLE_TOL);
            if !hit {
                return e;
            }
            // Next sample strictly ahead of e, cyclically.
            let gap = sorted.iter().map(|&s| (s - e).rem_euclid(TAU)).filter(|&d| d > ANGLE_TOL).fold(TAU, f64::min);
            e + (0.5 * gap).min(0.25 * piece)
        })
        .collect();
    ends.push(ends[0] + TAU);
    ends
}

/// Part of `e` inside the angular interval `[lo, hi)`.
fn clip(e: &BoundarySet, lo: f64, hi: f64) -> Result<BoundarySet> {
    let points = e.points.iter().copied().filter(|&p| in_half_open(p, lo, hi)).collect();
    let mut arcs = Vec::new();
    for a in &e.arcs {
        let (s, len) = if a.is_full_circle() { (lo, TAU) } else { (a.start(), a.length()) };
        for shift in [-TAU, 0.0, TAU] {
            let s0 = s + shift;
            let a0 = s0.max(lo);
            let a1 = (s0 + len).min(hi);
            if a1 - a0 > ANGLE_TOL {
                arcs.push((0.5 * (a0 + a1), 0.5 * (a1 - a0)));
            }
        }
    }
    BoundarySet::new(points, arcs, e.sample_density)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighborhood_examples() {
        let u = neighborhood(&BoundarySet::from_points(&[0.0]).unwrap(), 0.1).unwrap();
        assert_eq!(u.arcs().len(), 1);
        assert!(angular_distance(u.arcs()[0].center, 0.0) < 1e-15);
        assert!((u.arcs()[0].half_width - 0.1).abs() < 1e-15);
        let u = neighborhood(&BoundarySet::from_points(&[0.0, 0.05]).unwrap(), 0.1).unwrap();
        assert_eq!(u.arcs().len(), 1);
        assert!((u.arcs()[0].half_width - 0.125).abs() < 1e-12);
        let u = neighborhood(&BoundarySet::from_points(&[0.0, PI]).unwrap(), 0.1).unwrap();
        assert_eq!(u.arcs().len(), 2);
        assert!(neighborhood(&u, 0.0).is_err());
    }

    #[test]
    fn wrap_around_merge() {
        let e = BoundarySet::new(vec![], vec![(0.05, 0.1), (TAU - 0.05, 0.1)], 64.0).unwrap();
        assert_eq!(e.arcs().len(), 1);
        assert!((e.arcs()[0].half_width - 0.15).abs() < 1e-12);
        assert!(e.contains(0.0) && e.contains(TAU - 0.14) && !e.contains(0.5));
    }

    #[test]
    fn positive_measure_flag() {
        assert!(!BoundarySet::from_points(&[0.0, 1.0]).unwrap().positive_measure());
        assert!(BoundarySet::new(vec![], vec![(1.0, 0.2)], 64.0).unwrap().positive_measure());
    }

    #[test]
    fn sup_examples() {
        let z = CoeffSeries::from_real(&[0.0, 1.0]);
        let e = BoundarySet::from_points(&[0.0, PI / 2.0]).unwrap();
        assert_eq!(sup_on_set(&z, &e).unwrap(), 1.0);
        let p = CoeffSeries::from_real(&[1.0, -1.0]);
        assert_eq!(sup_on_set(&p, &BoundarySet::from_points(&[0.0]).unwrap()).unwrap(), 0.0);
        assert_eq!(sup_on_set(&p, &BoundarySet::from_points(&[PI]).unwrap()).unwrap(), 2.0);
        assert!(sup_on_set(&p, &BoundarySet::empty()).is_err());
    }

    #[test]
    fn sup_on_arc_bounds_true_sup() {
        // |1 - z| peaks at θ = π; an arc around π sampled coarsely still bounds 2.
        let p = CoeffSeries::from_real(&[1.0, -1.0]);
        let e = BoundarySet::new(vec![], vec![(PI + 0.013, 0.2)], 3.0).unwrap();
        assert!(sup_on_set(&p, &e).unwrap() >= 2.0);
    }

    #[test]
    fn partition_two_points() {
        let e = BoundarySet::from_points(&[0.0, PI]).unwrap();
        let ratio = |t: f64| if t < 1.0 { Complex64::new(2.0, 0.0) } else { Complex64::new(-1.0, 0.0) };
        let part = piecewise_partition(&ratio, &e, 0.1).unwrap();
        assert_eq!(part.pieces.len(), 2);
        assert!((part.pieces[0].v - Complex64::new(2f64.ln(), 0.0)).norm() < 1e-15);
        assert!((part.pieces[1].v - Complex64::new(0.0, PI)).norm() < 1e-15);
    }

    #[test]
    fn partition_constant_and_single_point() {
        let e = BoundarySet::from_points(&[0.3, 1.0, 4.0]).unwrap();
        let part = piecewise_partition(&|_| Complex64::new(1.0, 0.0), &e, 1e-3).unwrap();
        assert!(!part.pieces.is_empty());
        assert!(part.pieces.iter().all(|p| p.v == Complex64::new(0.0, 0.0)));
        let e = BoundarySet::from_points(&[2.0]).unwrap();
        let part = piecewise_partition(&|_| Complex64::new(std::f64::consts::E, 0.0), &e, 1e-3).unwrap();
        assert_eq!(part.pieces.len(), 1);
        assert!((part.pieces[0].v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn partition_rejects_zero_ratio() {
        let e = BoundarySet::from_points(&[2.0]).unwrap();
        assert!(matches!(piecewise_partition(&|_| Complex64::new(0.0, 0.0), &e, 0.1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn partition_unattainable() {
        // The phase turns by about 150 rad across the finest partition arc.
        let e = BoundarySet::new(vec![], vec![(1.0, 0.5)], 5000.0).unwrap();
        let ratio = |t: f64| Complex64::from_polar(1.0, 1e5 * t);
        assert!(matches!(piecewise_partition(&ratio, &e, 0.1), Err(Error::Resolution(_))));
    }

    #[test]
    fn json_shape() {
        let e = BoundarySet::new(vec![0.5], vec![(2.0, 0.25)], 100.0).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"points":[0.5],"arcs":[[2.0,0.25]],"sample_density":100.0}"#);
        let back: BoundarySet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<BoundarySet>(r#"{"arcs":[[0,-1]]}"#).is_err());
    }
}
