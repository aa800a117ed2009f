//! Moore-Penrose calculus: pseudoinverse, projectors, reduced minimum
//! modulus, polar decomposition, partial-isometry and inner-inverse
//! predicates.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::orbit::OrbitSignature;
use crate::svd::{numerical_rank, op_norm, svd, SvdFactorization};
use crate::tol::ToleranceConfig;

/// An operator bundled with everything the rest of the crate keeps asking
/// about it: `A^dagger`, the range/corange/nullspace projectors, the reduced
/// minimum modulus and the orbit signature.
///
/// `gamma` is `+inf` for the zero operator (infimum over an empty set); all
/// inequality certificates skip infinite operands.
#[derive(Clone, Debug)]
pub struct OperatorAnalysis {
    pub a: Matrix,
    pub factorization: SvdFactorization,
    pub rank: usize,
    pub pinv: Matrix,
    pub p_range: Matrix,
    pub p_corange: Matrix,
    pub p_null: Matrix,
    pub gamma: f64,
    pub op_norm: f64,
    pub pinv_norm: f64,
    pub signature: OrbitSignature,
}

impl OperatorAnalysis {
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// Orthonormal basis of `R(A)` (leading left singular columns).
    pub fn range_columns(&self) -> Matrix {
        self.factorization.u.columns(0, self.rank)
    }

    /// Orthonormal basis of `R(A)^perp = N(A^*)`.
    pub fn range_complement_columns(&self) -> Matrix {
        self.factorization.u.columns(self.rank, self.rows())
    }

    /// Orthonormal basis of `N(A)^perp = R(A^*)`.
    pub fn corange_columns(&self) -> Matrix {
        self.factorization.v.columns(0, self.rank)
    }

    /// Orthonormal basis of `N(A)`.
    pub fn nullspace_columns(&self) -> Matrix {
        self.factorization.v.columns(self.rank, self.cols())
    }
}

/// Full Moore-Penrose analysis of a dense operator.
///
/// The pseudoinverse inverts exactly the singular values retained by the
/// rank cutoff, so `A A^dagger` and `A^dagger A` are projectors of that exact
/// rank.
///
/// ```
/// use crlab_core::{operator, Matrix, ToleranceConfig};
///
/// let tol = ToleranceConfig::default();
/// let a = Matrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
/// let an = operator::analyze(&a, &tol)?;
/// assert_eq!(an.rank, 1);
/// assert!((an.gamma - 2.0).abs() < 1e-12);
/// assert!((an.pinv[(0, 0)].re - 0.25).abs() < 1e-12);
/// # Ok::<(), crlab_core::Error>(())
/// ```
pub fn analyze(a: &Matrix, tol: &ToleranceConfig) -> Result<OperatorAnalysis> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let f = svd(a)?;
    let rank = numerical_rank(&f, tol);
    let m = a.rows();
    let n = a.cols();

    let inv_sigmas: Vec<f64> = f.singular_values[..rank].iter().map(|s| 1.0 / s).collect();
    let pinv = &(&f.v * &Matrix::rect_diag(n, m, &inv_sigmas)) * &f.u.adjoint();

    let u_r = f.u.columns(0, rank);
    let v_r = f.v.columns(0, rank);
    let p_range = if rank == 0 {
        Matrix::zeros(m, m)
    } else {
        &u_r * &u_r.adjoint()
    };
    let p_corange = if rank == 0 {
        Matrix::zeros(n, n)
    } else {
        &v_r * &v_r.adjoint()
    };
    let p_null = &Matrix::identity(n) - &p_corange;

    let gamma = if rank == 0 {
        f64::INFINITY
    } else {
        f.singular_values[rank - 1]
    };
    let op_norm = f.singular_values.first().copied().unwrap_or(0.0);
    let pinv_norm = if rank == 0 {
        0.0
    } else {
        1.0 / f.singular_values[rank - 1]
    };
    let signature = OrbitSignature {
        nullity: n - rank,
        rank,
        defect: m - rank,
    };

    Ok(OperatorAnalysis {
        a: a.clone(),
        factorization: f,
        rank,
        pinv,
        p_range,
        p_corange,
        p_null,
        gamma,
        op_norm,
        pinv_norm,
        signature,
    })
}

/// Smallest retained singular value; `+inf` for the zero operator.
pub fn reduced_min_modulus(a: &Matrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(analyze(a, tol)?.gamma)
}

/// Polar decomposition `A = V |A| = |A^*| V` with the canonical partial
/// isometry `V` (initial space `N(A)^perp`, final space `R(A)`).
#[derive(Clone, Debug)]
pub struct PolarParts {
    pub v: Matrix,
    pub abs_a: Matrix,
    pub abs_a_star: Matrix,
}

pub fn polar_decompose(a: &Matrix, tol: &ToleranceConfig) -> Result<PolarParts> {
    let f = svd(a)?;
    let rank = numerical_rank(&f, tol);
    let m = a.rows();
    let n = a.cols();
    let u_r = f.u.columns(0, rank);
    let v_r = f.v.columns(0, rank);
    let v = if rank == 0 {
        Matrix::zeros(m, n)
    } else {
        &u_r * &v_r.adjoint()
    };
    let abs_a = &(&f.v * &Matrix::rect_diag(n, n, &f.singular_values)) * &f.v.adjoint();
    let abs_a_star = &(&f.u * &Matrix::rect_diag(m, m, &f.singular_values)) * &f.u.adjoint();
    Ok(PolarParts {
        v,
        abs_a,
        abs_a_star,
    })
}

/// `V` is a partial isometry iff `V^* V` is idempotent.
pub fn is_partial_isometry(v: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    let q = &v.adjoint() * v;
    let defect = op_norm(&(&(&q * &q) - &q))?;
    Ok(defect <= tol.eq_tol)
}

/// Residual of the three-term expansion of `A^dagger - B^dagger`:
///
/// `A^d - B^d = -A^d (A-B) B^d + A^d A^{*d} (A^* - B^*)(I - B B^d)
///              + (I - A^d A)(A^* - B^*) B^{*d} B^d`
///
/// The expansion is an exact identity, so the residual is floating-point
/// noise for every input pair.
pub fn pinv_difference_identity(a: &Matrix, b: &Matrix, tol: &ToleranceConfig) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(
            "pinv difference identity needs equal shapes".into(),
        ));
    }
    let pa = analyze(a, tol)?;
    let pb = analyze(b, tol)?;
    pinv_difference_identity_with(&pa, &pb)
}

pub fn pinv_difference_identity_with(pa: &OperatorAnalysis, pb: &OperatorAnalysis) -> Result<f64> {
    let m = pa.rows();
    let diff = &pa.pinv - &pb.pinv;
    let a_minus_b = &pa.a - &pb.a;
    let astar_minus_bstar = a_minus_b.adjoint();
    let term1 = (&(&pa.pinv * &a_minus_b) * &pb.pinv).scale_re(-1.0);
    let term2 = &(&(&pa.pinv * &pa.pinv.adjoint()) * &astar_minus_bstar)
        * &(&Matrix::identity(m) - &pb.p_range);
    let term3 = &(&pa.p_null * &astar_minus_bstar) * &(&pb.pinv.adjoint() * &pb.pinv);
    let rhs = &(&term1 + &term2) + &term3;
    op_norm(&(&diff - &rhs))
}

/// `Bp` is an inner (generalized) inverse of `B` iff `B Bp B = B`.
pub fn check_generalized_inverse(b: &Matrix, bp: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    if bp.rows() != b.cols() || bp.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "inner inverse of a {}x{} operator must be {}x{}",
            b.rows(),
            b.cols(),
            b.cols(),
            b.rows()
        )));
    }
    let resid = op_norm(&(&(&(b * bp) * b) - b))?;
    Ok(resid <= tol.eq_scaled(op_norm(b)?))
}

/// Every inner inverse of `B` has the form
/// `B^dagger + (I - B^dagger B) X + Y (I - B B^dagger)`; this realizes one
/// from free parameters `X`, `Y`.
pub fn synthesize_inner_inverse(
    analysis: &OperatorAnalysis,
    x: &Matrix,
    y: &Matrix,
) -> Result<Matrix> {
    let n = analysis.cols();
    let m = analysis.rows();
    if x.rows() != n || x.cols() != m || y.rows() != n || y.cols() != m {
        return Err(Error::DimensionMismatch(
            "inner-inverse parameters must have the pseudoinverse shape".into(),
        ));
    }
    let left = &(&Matrix::identity(n) - &analysis.p_corange) * x;
    let right = y.matmul(&(&Matrix::identity(m) - &analysis.p_range))?;
    Ok(&(&analysis.pinv + &left) + &right)
}

/// Square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues below the rank cutoff are treated as exact zeros; without
/// that, machine-noise eigenvalues of size eps would contribute sqrt(eps)
/// to the root.
pub fn hermitian_sqrt(h: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(
            "square root needs a square matrix".into(),
        ));
    }
    let hs = h.hermitian_part();
    let f = svd(&hs)?;
    let rank = numerical_rank(&f, tol);
    // For a PSD matrix the right singular vectors are eigenvectors, so
    // V sqrt(Sigma) V^* is the positive square root.
    let roots: Vec<f64> = f.singular_values[..rank].iter().map(|s| s.sqrt()).collect();
    let n = h.rows();
    Ok(&(&f.v * &Matrix::rect_diag(n, n, &roots)) * &f.v.adjoint())
}

/// Smallest eigenvalue of the Hermitian part, via the spectral shift
/// `lambda_min(H) = sigma_min(H + ||H|| I) - ||H||`.
pub fn hermitian_min_eigenvalue(h: &Matrix) -> Result<f64> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(
            "eigenvalue bound needs a square matrix".into(),
        ));
    }
    let hs = h.hermitian_part();
    let c = op_norm(&hs)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    let shifted = &hs + &Matrix::identity(h.rows()).scale_re(c);
    Ok(crate::svd::min_singular_value(&shifted)? - c)
}

/// Hermitian within `eq_tol` and no eigenvalue below `-eq_tol * (1 + ||H||)`.
pub fn is_psd(h: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    if !h.is_square() {
        return Ok(false);
    }
    let scale = op_norm(h)?;
    let herm_defect = op_norm(&(h - &h.adjoint()))?;
    if herm_defect > tol.eq_scaled(scale) {
        return Ok(false);
    }
    Ok(hermitian_min_eigenvalue(h)? >= -tol.eq_scaled(scale))
}
