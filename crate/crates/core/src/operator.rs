//! Self-maps of `R^d` and their powers `T^n`.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::space::Point;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// `x ↦ c·x`.
    Scaling { c: f64 },
    /// `x ↦ x* + r·(x - x*)`.
    TowardPoint { center: Point, r: f64 },
    /// `x ↦ A·x + b`, `A` stored row-major.
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Point,
    },
    /// `x ↦ clamp(x_i, lo, hi)` componentwise.
    Clamp { lo: f64, hi: f64 },
}

/// A self-map `T: R^d -> R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    kind: OperatorKind,
    dim: usize,
}

fn finite(value: f64, what: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(alloc::format!("{what} must be finite")))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(invalid("operator dimension must be >= 1"));
    }
    Ok(())
}

impl OperatorSpec {
    pub fn scaling(c: f64, dim: usize) -> Result<Self> {
        finite(c, "scaling factor")?;
        check_dim(dim)?;
        Ok(OperatorSpec {
            kind: OperatorKind::Scaling { c },
            dim,
        })
    }

    pub fn toward_point(center: Point, r: f64) -> Result<Self> {
        finite(r, "contraction factor r")?;
        let dim = center.dim();
        Ok(OperatorSpec {
            kind: OperatorKind::TowardPoint { center, r },
            dim,
        })
    }

    pub fn affine(matrix: Vec<Vec<f64>>, offset: Point) -> Result<Self> {
        let dim = offset.dim();
        if matrix.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.len(),
            });
        }
        for row in &matrix {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            for &a in row {
                finite(a, "matrix entry")?;
            }
        }
        Ok(OperatorSpec {
            kind: OperatorKind::Affine { matrix, offset },
            dim,
        })
    }

    pub fn clamp(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        finite(lo, "lower bound")?;
        finite(hi, "upper bound")?;
        if lo > hi {
            return Err(invalid("clamp requires lo <= hi"));
        }
        check_dim(dim)?;
        Ok(OperatorSpec {
            kind: OperatorKind::Clamp { lo, hi },
            dim,
        })
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `T(x)`.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.dim)?;
        let out = self.apply_raw(x.coords());
        finish(out, 1)
    }

    fn apply_raw(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            OperatorKind::Scaling { c } => x.iter().map(|v| c * v).collect(),
            OperatorKind::TowardPoint { center, r } => x
                .iter()
                .zip(center.coords())
                .map(|(v, z)| z + r * (v - z))
                .collect(),
            OperatorKind::Affine { matrix, offset } => matrix
                .iter()
                .zip(offset.coords())
                .map(|(row, b)| crate::space::dot(row, x) + b)
                .collect(),
            OperatorKind::Clamp { lo, hi } => x.iter().map(|v| v.clamp(*lo, *hi)).collect(),
        }
    }

    /// `T^n(x)`, the n-fold composition.
    ///
    /// Scaling and toward-point use the closed forms `c^n` and `r^n`; clamping is
    /// idempotent; affine maps are applied `n` times.
    pub fn power_apply(&self, n: u64, x: &Point) -> Result<Point> {
        if n == 0 {
            return Err(invalid("operator power n must be >= 1"));
        }
        x.check_dim(self.dim)?;
        match &self.kind {
            OperatorKind::Scaling { c } => {
                let f = powi(*c, n);
                if !f.is_finite() {
                    return if x.is_zero() {
                        Ok(x.clone())
                    } else {
                        Err(Error::Range { n })
                    };
                }
                finish(x.coords().iter().map(|v| f * v).collect(), n)
            }
            OperatorKind::TowardPoint { center, r } => {
                let f = powi(*r, n);
                if !f.is_finite() {
                    return if x == center {
                        Ok(x.clone())
                    } else {
                        Err(Error::Range { n })
                    };
                }
                let out = x
                    .coords()
                    .iter()
                    .zip(center.coords())
                    .map(|(v, z)| z + f * (v - z))
                    .collect();
                finish(out, n)
            }
            OperatorKind::Clamp { .. } => finish(self.apply_raw(x.coords()), n),
            OperatorKind::Affine { .. } => {
                let mut cur = x.coords().to_vec();
                for _ in 0..n {
                    cur = self.apply_raw(&cur);
                    if cur.iter().any(|v| !v.is_finite()) {
                        return Err(Error::Range { n });
                    }
                }
                Ok(Point::from_raw(cur))
            }
        }
    }

    /// The operator with every coordinate index permuted by `perm`
    /// (`perm[i]` is the source index of output coordinate `i`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: perm.len(),
            });
        }
        let kind = match &self.kind {
            OperatorKind::Scaling { c } => OperatorKind::Scaling { c: *c },
            OperatorKind::Clamp { lo, hi } => OperatorKind::Clamp { lo: *lo, hi: *hi },
            OperatorKind::TowardPoint { center, r } => OperatorKind::TowardPoint {
                center: permute_point(center, perm),
                r: *r,
            },
            OperatorKind::Affine { matrix, offset } => OperatorKind::Affine {
                matrix: perm
                    .iter()
                    .map(|&i| perm.iter().map(|&j| matrix[i][j]).collect())
                    .collect(),
                offset: permute_point(offset, perm),
            },
        };
        Ok(OperatorSpec {
            kind,
            dim: self.dim,
        })
    }
}

pub fn permute_point(x: &Point, perm: &[usize]) -> Point {
    Point::from_raw(perm.iter().map(|&i| x.coords()[i]).collect())
}

fn finish(out: Vec<f64>, n: u64) -> Result<Point> {
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Range { n });
    }
    Ok(Point::from_raw(out))
}

/// `base^n` by repeated squaring.
pub(crate) fn powi(base: f64, mut n: u64) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    while n > 0 {
        if n & 1 == 1 {
            acc *= b;
        }
        n >>= 1;
        if n > 0 {
            b *= b;
        }
    }
    acc
}
