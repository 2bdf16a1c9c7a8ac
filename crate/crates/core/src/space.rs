//! Finite-dimensional real spaces `R^d` with `l_p` norms, `1 < p < ∞`.
//!
//! In these spaces the normalized duality mapping is single-valued:
//!
//! ```text
//! j(x)_i = ‖x‖_p^(2-p) · |x_i|^(p-1) · sign(x_i)
//! ```
//!
//! which satisfies `⟨x, j(x)⟩ = ‖x‖_p²` and `‖j(x)‖_q = ‖x‖_p` with `1/p + 1/q = 1`.
//! For `p = 2` the map is the identity.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Relative tolerance for floating-point identities.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor paired with [`REL_TOL`].
pub const ABS_FLOOR: f64 = 1e-12;

/// `|a - b| <= rel * max(|a|, |b|) + ABS_FLOOR`.
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + ABS_FLOOR
}

/// Inequality slack used by every checker: `lhs <= rhs + 1e-9 (1 + |rhs|)`.
pub fn within_bound(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + REL_TOL * (1.0 + rhs.abs())
}

/// Norm exponent `p`, restricted to `(1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormTag {
    p: f64,
}

impl NormTag {
    pub const EUCLIDEAN: NormTag = NormTag { p: 2.0 };

    /// Rejects `p <= 1`, `p = ∞` and NaN: the duality map is multivalued there.
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(invalid("norm exponent p must satisfy 1 < p < ∞"));
        }
        Ok(NormTag { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent `q = p / (p - 1)`.
    pub fn dual(&self) -> NormTag {
        NormTag {
            p: self.p / (self.p - 1.0),
        }
    }

    pub fn is_euclidean(&self) -> bool {
        self.p == 2.0
    }
}

impl Default for NormTag {
    fn default() -> Self {
        NormTag::EUCLIDEAN
    }
}

/// An element of `R^d`. Always non-empty with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("point must have dimension >= 1"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(invalid(alloc::format!("coordinate {i} is not finite")));
        }
        Ok(Point { coords })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Point::new(vec![0.0; dim])
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }

    /// `self - other`. Dimensions must already agree.
    pub fn sub(&self, other: &Point) -> Result<Point> {
        other.check_dim(self.dim())?;
        let coords: Vec<f64> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Point::new(coords)
    }

    pub fn scale(&self, factor: f64) -> Result<Point> {
        Point::new(self.coords.iter().map(|c| c * factor).collect())
    }
}

/// An element of the dual space, produced by [`duality_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    coords: Vec<f64>,
}

impl DualVector {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Dual norm: the `l_q` norm with `q` conjugate to `tag`.
    pub fn dual_norm(&self, tag: NormTag) -> f64 {
        lp_norm(&self.coords, tag.dual().p)
    }
}

/// `(Σ |x_i|^p)^(1/p)`, evaluated with max-scaling so large entries do not overflow.
pub(crate) fn lp_norm(coords: &[f64], p: f64) -> f64 {
    let m = coords.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = coords.iter().map(|c| (c / m) * (c / m)).sum();
        m * libm::sqrt(s)
    } else {
        let s: f64 = coords.iter().map(|c| libm::pow(c.abs() / m, p)).sum();
        m * libm::pow(s, 1.0 / p)
    }
}

/// `‖x‖_p`.
pub fn norm(x: &Point, tag: NormTag) -> f64 {
    lp_norm(&x.coords, tag.p)
}

/// `‖x - y‖_p`.
pub fn distance(x: &Point, y: &Point, tag: NormTag) -> Result<f64> {
    y.check_dim(x.dim())?;
    let diff: Vec<f64> = x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect();
    Ok(lp_norm(&diff, tag.p))
}

pub(crate) fn duality_coords(coords: &[f64], tag: NormTag) -> Vec<f64> {
    if tag.is_euclidean() {
        return coords.to_vec();
    }
    let nx = lp_norm(coords, tag.p);
    if nx == 0.0 {
        return vec![0.0; coords.len()];
    }
    // ‖x‖^(2-p) |x_i|^(p-1) rewritten as ‖x‖ (|x_i| / ‖x‖)^(p-1)
    coords
        .iter()
        .map(|&c| {
            if c == 0.0 {
                0.0
            } else {
                nx * libm::pow(c.abs() / nx, tag.p - 1.0) * c.signum()
            }
        })
        .collect()
}

/// The single-valued normalized duality mapping `j(x)`.
pub fn duality_map(x: &Point, tag: NormTag) -> DualVector {
    DualVector {
        coords: duality_coords(&x.coords, tag),
    }
}

/// `⟨u, j(x)⟩`.
pub fn duality_pairing(u: &Point, x: &Point, tag: NormTag) -> Result<f64> {
    u.check_dim(x.dim())?;
    Ok(dot(&u.coords, &duality_coords(&x.coords, tag)))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
