use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar, TolerancePolicy};

/// A subspace of `T^n`, stored as a column basis together with its reduced
/// column echelon form.
#[derive(Debug, Clone)]
pub struct Subspace<T: Scalar> {
    ambient_dim: usize,
    basis: Matrix<T>,
    canonical: Matrix<T>,
}

impl<T: Scalar> Subspace<T> {
    /// Wraps linearly independent columns.
    pub fn from_basis(basis: Matrix<T>, pol: &TolerancePolicy) -> Result<Self> {
        let n = basis.rows();
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let rank = T::rank(&basis, pol);
        if rank != basis.cols() {
            return Err(Error::DependentBasis {
                rank,
                cols: basis.cols(),
            });
        }
        let canonical = canonicalize(&basis, pol);
        Ok(Subspace {
            ambient_dim: n,
            basis,
            canonical,
        })
    }

    /// Column space of arbitrary generators.
    pub fn span(generators: &Matrix<T>, pol: &TolerancePolicy) -> Result<Self> {
        if generators.rows() == 0 {
            return Err(Error::ZeroDimension);
        }
        Self::from_basis(T::column_space(generators, pol), pol)
    }

    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Subspace {
            ambient_dim: n,
            basis: Matrix::zeros(n, 0),
            canonical: Matrix::zeros(n, 0),
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Subspace {
            ambient_dim: n,
            basis: Matrix::identity(n),
            canonical: Matrix::identity(n),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn canonical(&self) -> &Matrix<T> {
        &self.canonical
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimension {} and {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self, pol: &TolerancePolicy) -> Result<Self> {
        self.check_ambient(other)?;
        Self::span(&self.basis.hstack(&other.basis), pol)
    }

    /// `a ∩ b` from the kernel of `[A | -B]`: each null vector `(x, y)`
    /// gives `A x = B y` in both spaces.
    pub fn intersection(&self, other: &Self, pol: &TolerancePolicy) -> Result<Self> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(n);
        }
        let stacked = self.basis.hstack(&-&other.basis);
        let null = T::kernel(&stacked, pol);
        let a = self.dim();
        let coeffs = Matrix::from_fn(a, null.cols(), |i, j| null.get(i, j).clone());
        Self::span(&(&self.basis * &coeffs), pol)
    }

    /// `t(W)`.
    pub fn image(&self, t: &Matrix<T>, pol: &TolerancePolicy) -> Result<Self> {
        if t.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "operator with {} columns applied to subspace of dimension {}",
                t.cols(),
                self.ambient_dim
            )));
        }
        if self.dim() == 0 {
            return Self::zero(t.rows());
        }
        Self::span(&(t * &self.basis), pol)
    }

    /// `self ⊆ other`
    pub fn is_contained_in(&self, other: &Self, pol: &TolerancePolicy) -> Result<bool> {
        Ok(self.sum(other, pol)?.dim() == other.dim())
    }

    /// Same subspace: identical canonical forms over ℚ, entrywise within
    /// tolerance over floats.
    pub fn equals(&self, other: &Self, pol: &TolerancePolicy) -> bool {
        if self.ambient_dim != other.ambient_dim || self.dim() != other.dim() {
            return false;
        }
        match T::FIELD {
            Field::Rational => self.canonical == other.canonical,
            Field::Float => self
                .canonical
                .entries()
                .iter()
                .zip(other.canonical.entries())
                .all(|(a, b)| (a.clone() - b.clone()).negligible(1.0, pol)),
        }
    }
}

/// Reduced column echelon form of the column space of `basis`.
pub(crate) fn canonicalize<T: Scalar>(basis: &Matrix<T>, pol: &TolerancePolicy) -> Matrix<T> {
    if basis.cols() == 0 {
        return basis.clone();
    }
    T::echelon_rows(&basis.transpose(), pol).transpose()
}
