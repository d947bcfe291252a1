//! Inner products and norms of the Dirichlet-type spaces `D_α`, `0 ≤ α ≤ 1`.
//!
//! `⟨a, b⟩_α = Σ (k+1)^α a_k conj(b_k)`. The Hardy space is `α = 0`, the
//! Dirichlet space `α = 1`, and `‖f‖²_D = D(f) + ‖f‖²_{H²}` where
//! `D(f) = Σ k|a_k|²` equals `(1/π)∫_𝔻 |f′|² dA`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffseries::CoeffSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaWeight(f64);

impl AlphaWeight {
    pub const HARDY: AlphaWeight = AlphaWeight(0.0);
    pub const DIRICHLET: AlphaWeight = AlphaWeight(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&alpha) {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn is_hardy(self) -> bool {
        self.0 == 0.0
    }

    /// `(k+1)^α`.
    #[inline]
    pub fn weight(self, k: usize) -> f64 {
        if self.0 == 0.0 {
            1.0
        } else if self.0 == 1.0 {
            (k + 1) as f64
        } else {
            ((k + 1) as f64).powf(self.0)
        }
    }

    /// `Σ_{k=0}^{n} (k+1)^{-α}`, the squared norm of point evaluation on the
    /// circle restricted to polynomials of degree `≤ n`.
    pub fn kernel_diagonal(self, n: usize) -> f64 {
        (0..=n).map(|k| 1.0 / self.weight(k)).sum()
    }
}

impl TryFrom<f64> for AlphaWeight {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<AlphaWeight> for f64 {
    fn from(w: AlphaWeight) -> f64 {
        w.0
    }
}

/// Selects the space in which approximation errors are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Hardy,
    Dirichlet,
}

impl Space {
    pub fn weight(self) -> AlphaWeight {
        match self {
            Space::Hardy => AlphaWeight::HARDY,
            Space::Dirichlet => AlphaWeight::DIRICHLET,
        }
    }
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hardy" => Ok(Space::Hardy),
            "dirichlet" => Ok(Space::Dirichlet),
            other => Err(Error::InvalidParameter(format!("unknown space {other:?}"))),
        }
    }
}

/// Inner product of the stored coefficients.
pub fn inner_product_alpha(a: &CoeffSeries, b: &CoeffSeries, w: AlphaWeight) -> Complex64 {
    let (x, y) = (a.coeffs(), b.coeffs());
    let n = x.len().min(y.len());
    let mut s = Complex64::new(0.0, 0.0);
    if w.is_hardy() {
        for k in 0..n {
            s += x[k] * y[k].conj();
        }
    } else {
        for k in 0..n {
            s += x[k] * y[k].conj() * w.weight(k);
        }
    }
    s
}

/// Inner product together with a bound on the error caused by the tails.
///
/// Tail bounds are H² bounds, so the error is only controlled for `α = 0`;
/// for `α > 0` with a nonzero tail the bound is infinite.
pub fn inner_product_with_bound(a: &CoeffSeries, b: &CoeffSeries, w: AlphaWeight) -> (Complex64, f64) {
    let value = inner_product_alpha(a, b, w);
    let (ta, tb) = (a.tail_bound(), b.tail_bound());
    let bound = if ta == 0.0 && tb == 0.0 {
        0.0
    } else if w.is_hardy() {
        a.norm_h2() * tb + b.norm_h2() * ta + ta * tb
    } else {
        f64::INFINITY
    };
    (value, bound)
}

pub fn norm_alpha(a: &CoeffSeries, w: AlphaWeight) -> f64 {
    let s: f64 = if w.is_hardy() {
        a.coeffs().iter().map(|c| c.norm_sqr()).sum()
    } else {
        a.coeffs().iter().enumerate().map(|(k, c)| c.norm_sqr() * w.weight(k)).sum()
    };
    s.sqrt()
}

/// `‖a − b‖_α` over the stored coefficients.
pub fn distance_alpha(a: &CoeffSeries, b: &CoeffSeries, w: AlphaWeight) -> f64 {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n).map(|k| (a.coeff(k) - b.coeff(k)).norm_sqr() * w.weight(k)).sum::<f64>().sqrt()
}

/// `D(a) = Σ k|a_k|²`.
pub fn dirichlet_integral(a: &CoeffSeries) -> f64 {
    a.coeffs().iter().enumerate().map(|(k, c)| k as f64 * c.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[f64]) -> CoeffSeries {
        CoeffSeries::from_real(c)
    }

    #[test]
    fn inner_product_examples() {
        let h = AlphaWeight::HARDY;
        let d = AlphaWeight::DIRICHLET;
        assert_eq!(inner_product_alpha(&poly(&[1.0, -1.0]), &poly(&[1.0, 1.0]), h), Complex64::new(0.0, 0.0));
        assert_eq!(inner_product_alpha(&poly(&[1.0, -1.0]), &poly(&[1.0, -1.0]), h), Complex64::new(2.0, 0.0));
        assert_eq!(inner_product_alpha(&poly(&[1.0, -1.0]), &poly(&[1.0, -1.0]), d), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn norm_examples() {
        for alpha in [0.0, 0.3, 1.0] {
            assert_eq!(norm_alpha(&poly(&[1.0]), AlphaWeight::new(alpha).unwrap()), 1.0);
        }
        assert!((norm_alpha(&poly(&[1.0, -1.0]), AlphaWeight::HARDY) - 2f64.sqrt()).abs() < 1e-15);
        assert!((norm_alpha(&poly(&[1.0, -1.0]), AlphaWeight::DIRICHLET) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_integral_examples() {
        assert_eq!(dirichlet_integral(&poly(&[4.0])), 0.0);
        assert_eq!(dirichlet_integral(&poly(&[0.0, 1.0])), 1.0);
        assert_eq!(dirichlet_integral(&poly(&[0.0, 0.0, 1.0])), 2.0);
    }

    #[test]
    fn alpha_domain() {
        assert!(AlphaWeight::new(-0.1).is_err());
        assert!(AlphaWeight::new(1.5).is_err());
        assert!(serde_json::from_str::<AlphaWeight>("2.0").is_err());
        assert_eq!(AlphaWeight::new(0.5).unwrap().weight(3), 2.0);
    }

    #[test]
    fn tail_error_bound() {
        let a = CoeffSeries::new(vec![Complex64::new(1.0, 0.0)], 0.1).unwrap();
        let (_, b) = inner_product_with_bound(&a, &a, AlphaWeight::HARDY);
        assert!((b - 0.21).abs() < 1e-15);
        let (_, b) = inner_product_with_bound(&a, &a, AlphaWeight::DIRICHLET);
        assert!(b.is_infinite());
    }
}
