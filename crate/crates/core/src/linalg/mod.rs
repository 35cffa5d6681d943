//! Rank, kernels, traces and operator restriction, generic over the field.
//!
//! The rational backend uses exact elimination (Bareiss for rank and
//! determinants, Gauss-Jordan for echelon forms). The float backend
//! thresholds singular values.

pub mod exact;
pub mod float;
mod subspace;

pub use subspace::Subspace;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, TolerancePolicy};

/// Singular values on either side of a float rank decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankMargin {
    pub threshold: f64,
    pub smallest_kept: Option<f64>,
    pub largest_dropped: Option<f64>,
}

impl RankMargin {
    /// Ratio between the threshold and the nearest singular value on either
    /// side; values near 1 mean the rank decision is fragile.
    pub fn safety_factor(&self) -> f64 {
        let above = self
            .smallest_kept
            .map_or(f64::INFINITY, |s| s / self.threshold.max(f64::MIN_POSITIVE));
        let below = match self.largest_dropped {
            Some(s) if s > 0.0 => self.threshold / s,
            _ => f64::INFINITY,
        };
        above.min(below)
    }
}

pub fn rank<T: Scalar>(m: &Matrix<T>, pol: &TolerancePolicy) -> usize {
    T::rank(m, pol)
}

pub fn kernel_basis<T: Scalar>(m: &Matrix<T>, pol: &TolerancePolicy) -> Result<Subspace<T>> {
    Subspace::from_basis(T::kernel(m, pol), pol)
}

pub fn trace<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    m.trace()
}

/// Tolerance scale for products of matrices with the given magnitudes.
pub(crate) fn product_scale(norms: &[f64]) -> f64 {
    norms.iter().map(|n| n.max(1.0)).product()
}

/// Whether every entry of `m` is zero relative to `scale`.
pub fn is_negligible<T: Scalar>(m: &Matrix<T>, scale: f64, pol: &TolerancePolicy) -> bool {
    m.entries().iter().all(|x| x.negligible(scale, pol))
}

/// Matrix of `t` restricted to the invariant subspace `w`, in the basis of `w`.
pub fn restrict_operator<T: Scalar>(
    t: &Matrix<T>,
    w: &Subspace<T>,
    pol: &TolerancePolicy,
) -> Result<Matrix<T>> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if t.rows() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but subspace lives in dimension {}",
            t.rows(),
            t.cols(),
            w.ambient_dim()
        )));
    }
    let basis = w.basis();
    if basis.cols() == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let image = t * basis;
    let restricted = T::solve(basis, &image, pol);
    let residual = &(basis * &restricted) - &image;
    let scale = product_scale(&[t.max_abs(), basis.max_abs()]);
    if !is_negligible(&residual, scale, pol) {
        return Err(Error::NotInvariant {
            residual: residual.max_abs(),
        });
    }
    Ok(restricted)
}
