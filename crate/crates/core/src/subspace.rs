//! Subspaces as orthonormal bases, plus the range/nullspace extractors.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::svd::{numerical_rank, svd};
use crate::tol::ToleranceConfig;

/// A closed subspace of `C^ambient_dim`, stored as an orthonormal basis.
///
/// The zero subspace is a first-class value with an empty (`ambient x 0`)
/// basis; it shows up naturally as the nullspace of an injective operator.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    /// Wrap an already-orthonormal basis, verifying `Q^* Q = I` within
    /// `eq_tol`.
    pub fn from_orthonormal(basis: Matrix, tol: &ToleranceConfig) -> Result<Self> {
        let d = basis.cols();
        if d > basis.rows() {
            return Err(Error::DimensionMismatch(
                "subspace dimension exceeds ambient dimension".into(),
            ));
        }
        let gram = &basis.adjoint() * &basis;
        if gram.max_abs_diff(&Matrix::identity(d)) > tol.eq_tol {
            return Err(Error::Precondition(
                "basis columns are not orthonormal".into(),
            ));
        }
        Ok(Subspace {
            ambient_dim: basis.rows(),
            basis,
        })
    }

    /// Orthonormalize the column span of an arbitrary matrix, with the rank
    /// decided by the usual relative cutoff.
    pub fn from_span(m: &Matrix, tol: &ToleranceConfig) -> Result<Self> {
        let f = svd(m)?;
        let rank = numerical_rank(&f, tol);
        Ok(Subspace {
            ambient_dim: m.rows(),
            basis: f.u.columns(0, rank),
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Orthogonal projector `Q Q^*` (the zero matrix for the zero subspace).
    pub fn projector(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        &self.basis * &self.basis.adjoint()
    }

    /// Orthogonal complement, via completion of the basis to a full unitary.
    pub fn complement(&self) -> Result<Subspace> {
        if self.dim() == 0 {
            return Ok(Subspace::full(self.ambient_dim));
        }
        let f = svd(&self.basis)?;
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            basis: f.u.columns(self.dim(), self.ambient_dim),
        })
    }

    /// Largest deviation of a vector of this subspace from `other`,
    /// i.e. `||(I - P_other) Q_self||`.
    pub fn containment_defect(&self, other: &Subspace) -> Result<f64> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(
                "containment check across ambient dimensions".into(),
            ));
        }
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let residual = &self.basis - &(&other.projector() * &self.basis);
        crate::svd::op_norm(&residual)
    }

    /// `||P_self - P_other||`, the gap between the two subspaces.
    pub fn gap(&self, other: &Subspace) -> Result<f64> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(
                "gap across ambient dimensions".into(),
            ));
        }
        crate::svd::op_norm(&(&self.projector() - &other.projector()))
    }

    /// Dimension of `self + other`, as the rank of the concatenated bases.
    pub fn sum_dim(&self, other: &Subspace, tol: &ToleranceConfig) -> Result<usize> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(
                "sum across ambient dimensions".into(),
            ));
        }
        if self.dim() == 0 {
            return Ok(other.dim());
        }
        if other.dim() == 0 {
            return Ok(self.dim());
        }
        let stacked = self.basis.hcat(&other.basis)?;
        let f = svd(&stacked)?;
        Ok(numerical_rank(&f, tol))
    }

    /// Apply an operator to the subspace and orthonormalize the image span.
    pub fn map_through(&self, g: &Matrix, tol: &ToleranceConfig) -> Result<Subspace> {
        if self.dim() == 0 {
            return Ok(Subspace::zero(g.rows()));
        }
        Subspace::from_span(&g.matmul(&self.basis)?, tol)
    }

    /// First basis column as a unit vector, if the subspace is nonzero.
    pub fn first_direction(&self) -> Option<Matrix> {
        if self.dim() == 0 {
            None
        } else {
            Some(self.basis.column_slice(0))
        }
    }
}

/// Orthonormal basis of the range of `A` (the leading left singular
/// directions).
pub fn range_basis(a: &Matrix, tol: &ToleranceConfig) -> Result<Subspace> {
    let f = svd(a)?;
    Ok(Subspace {
        ambient_dim: a.rows(),
        basis: f.range_columns(tol),
    })
}

/// Orthonormal basis of the nullspace of `A` (right singular directions past
/// the rank index).
pub fn nullspace_basis(a: &Matrix, tol: &ToleranceConfig) -> Result<Subspace> {
    let f = svd(a)?;
    Ok(Subspace {
        ambient_dim: a.cols(),
        basis: f.nullspace_columns(tol),
    })
}
