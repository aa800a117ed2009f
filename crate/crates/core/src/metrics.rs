//! The range and nullspace perturbation metrics
//!
//! `d_R(A, B) = (||P_{R(A)} - P_{R(B)}||^2 + ||A - B||^2)^{1/2}` and its
//! nullspace twin `d_N`, together with the inequality certificates that
//! relate them to the reduced minimum modulus and the pseudoinverse, the
//! `gamma >= 1/k` classes, and the two rank-one perturbation gadgets used to
//! exhibit discontinuities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{analyze, polar_decompose, OperatorAnalysis};
use crate::svd::op_norm;
use crate::tol::ToleranceConfig;

/// Which projector enters the metric: ranges (`R`) or nullspaces (`N`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    Range,
    Null,
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricKind::Range => write!(f, "R"),
            MetricKind::Null => write!(f, "N"),
        }
    }
}

/// Verdict record for one inequality `lhs <= rhs`: `holds` is granted an
/// `eq_tol` margin so exact-equality cases do not flap.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct InequalityCertificate {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl InequalityCertificate {
    pub fn evaluate(lhs: f64, rhs: f64, tol: &ToleranceConfig) -> Self {
        InequalityCertificate {
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: lhs <= rhs + tol.eq_tol,
        }
    }
}

/// `d_X(A, B)` for `X` in `{R, N}`.
///
/// ```
/// use crlab_core::metrics::{metric_dx, MetricKind};
/// use crlab_core::{Matrix, ToleranceConfig};
///
/// let tol = ToleranceConfig::default();
/// // equal ranges, so the metric reduces to the norm gap
/// let a = Matrix::identity(2);
/// let d = metric_dx(&a, &a.scale_re(2.0), MetricKind::Range, &tol)?;
/// assert!((d - 1.0).abs() < 1e-12);
/// # Ok::<(), crlab_core::Error>(())
/// ```
pub fn metric_dx(a: &Matrix, b: &Matrix, kind: MetricKind, tol: &ToleranceConfig) -> Result<f64> {
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    metric_dx_with(&aa, &ab, kind)
}

pub fn metric_dx_with(
    aa: &OperatorAnalysis,
    ab: &OperatorAnalysis,
    kind: MetricKind,
) -> Result<f64> {
    if aa.rows() != ab.rows() || aa.cols() != ab.cols() {
        return Err(Error::DimensionMismatch("metric needs equal shapes".into()));
    }
    let gap = projector_gap_with(aa, ab, kind)?;
    let norm = op_norm(&(&aa.a - &ab.a))?;
    Ok(gap.hypot(norm))
}

/// `||P_{R(A)} - P_{R(B)}||` or the nullspace analogue.
pub fn projector_gap_with(
    aa: &OperatorAnalysis,
    ab: &OperatorAnalysis,
    kind: MetricKind,
) -> Result<f64> {
    let (pa, pb) = match kind {
        MetricKind::Range => (&aa.p_range, &ab.p_range),
        MetricKind::Null => (&aa.p_null, &ab.p_null),
    };
    op_norm(&(pa - pb))
}

/// Certificate for `gamma(B) <= sqrt(1 + gamma(B)^2) d_X(A, B) + gamma(A)`.
///
/// Skipped when either reduced minimum modulus is infinite (zero operator).
pub fn gamma_perturbation_certificate(
    a: &Matrix,
    b: &Matrix,
    kind: MetricKind,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    gamma_perturbation_certificate_with(&aa, &ab, kind, tol)
}

pub fn gamma_perturbation_certificate_with(
    aa: &OperatorAnalysis,
    ab: &OperatorAnalysis,
    kind: MetricKind,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    if !ab.gamma.is_finite() || !aa.gamma.is_finite() {
        return Err(Error::Skipped(
            "reduced minimum modulus of the zero operator is infinite".into(),
        ));
    }
    let dx = metric_dx_with(aa, ab, kind)?;
    let lhs = ab.gamma;
    let rhs = (1.0 + ab.gamma * ab.gamma).sqrt() * dx + aa.gamma;
    Ok(InequalityCertificate::evaluate(lhs, rhs, tol))
}

/// Certificate for `||A^dagger|| <= 2 ||B^dagger||`, valid under the
/// proximity precondition `d_X(A, B) < 1 / (2 sqrt(1 + ||B^dagger||^2))`.
pub fn pinv_norm_doubling_certificate(
    a: &Matrix,
    b: &Matrix,
    kind: MetricKind,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    pinv_norm_doubling_certificate_with(&aa, &ab, kind, tol)
}

pub fn pinv_norm_doubling_certificate_with(
    aa: &OperatorAnalysis,
    ab: &OperatorAnalysis,
    kind: MetricKind,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    let dx = metric_dx_with(aa, ab, kind)?;
    let bound = 1.0 / (2.0 * (1.0 + ab.pinv_norm * ab.pinv_norm).sqrt());
    if dx >= bound {
        return Err(Error::Precondition(format!(
            "d_{kind}(A, B) = {dx:.3e} is not below the admissible radius {bound:.3e}"
        )));
    }
    Ok(InequalityCertificate::evaluate(
        aa.pinv_norm,
        2.0 * ab.pinv_norm,
        tol,
    ))
}

/// The symmetric form:
/// `|gamma(B) - gamma(A)| <= sqrt(1+gamma(B)^2) sqrt(1+gamma(A)^2) d_X(A,B)`.
pub fn gamma_symmetric_certificate(
    a: &Matrix,
    b: &Matrix,
    kind: MetricKind,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    gamma_symmetric_certificate_with(&aa, &ab, kind, tol)
}

pub fn gamma_symmetric_certificate_with(
    aa: &OperatorAnalysis,
    ab: &OperatorAnalysis,
    kind: MetricKind,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    if !aa.gamma.is_finite() || !ab.gamma.is_finite() {
        return Err(Error::Skipped(
            "symmetric bound skipped on an infinite reduced minimum modulus".into(),
        ));
    }
    let dx = metric_dx_with(aa, ab, kind)?;
    let lhs = (ab.gamma - aa.gamma).abs();
    let rhs = (1.0 + ab.gamma * ab.gamma).sqrt() * (1.0 + aa.gamma * aa.gamma).sqrt() * dx;
    Ok(InequalityCertificate::evaluate(lhs, rhs, tol))
}

/// Membership in the class `{A : gamma(A) >= 1/k}`; the zero operator is a
/// member for every `k`.
pub fn in_min_modulus_class(a: &Matrix, k: u32, tol: &ToleranceConfig) -> Result<bool> {
    if k == 0 {
        return Err(Error::Precondition("class index must be positive".into()));
    }
    let gamma = crate::operator::reduced_min_modulus(a, tol)?;
    Ok(gamma >= 1.0 / k as f64 - tol.eq_tol)
}

/// True when the operator is injective or surjective, i.e. nullity 0 or
/// defect 0.
pub fn is_injective_or_surjective(a: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    let sig = crate::orbit::signature(a, tol)?;
    Ok(sig.nullity == 0 || sig.defect == 0)
}

/// The three Lipschitz certificates available on the `gamma >= 1/k` class:
/// corange and range projectors move at rate `k`, and the reduced minimum
/// modulus at rate 1 once the operators are closer than `1/k`.
#[derive(Clone, Debug)]
pub struct MinModulusClassCertificates {
    pub corange_projector: InequalityCertificate,
    pub range_projector: InequalityCertificate,
    /// Present only when `||A - B|| < 1/k`.
    pub gamma_lipschitz: Option<InequalityCertificate>,
}

pub fn min_modulus_class_certificates(
    a: &Matrix,
    b: &Matrix,
    k: u32,
    tol: &ToleranceConfig,
) -> Result<MinModulusClassCertificates> {
    if !in_min_modulus_class(a, k, tol)? || !in_min_modulus_class(b, k, tol)? {
        return Err(Error::Precondition(format!(
            "both operators must satisfy gamma >= 1/{k}"
        )));
    }
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    let diff = op_norm(&(a - b))?;
    let kf = k as f64;
    let corange = InequalityCertificate::evaluate(
        projector_gap_with(&aa, &ab, MetricKind::Null)?,
        kf * diff,
        tol,
    );
    let range = InequalityCertificate::evaluate(
        projector_gap_with(&aa, &ab, MetricKind::Range)?,
        kf * diff,
        tol,
    );
    let gamma = if diff < 1.0 / kf {
        let ga = if aa.gamma.is_finite() { aa.gamma } else { 0.0 };
        let gb = if ab.gamma.is_finite() { ab.gamma } else { 0.0 };
        // infinite gamma only happens for the zero operator, which is closer
        // than 1/k to nothing else in the class except itself
        if aa.gamma.is_finite() && ab.gamma.is_finite() {
            Some(InequalityCertificate::evaluate((ga - gb).abs(), diff, tol))
        } else {
            None
        }
    } else {
        None
    };
    Ok(MinModulusClassCertificates {
        corange_projector: corange,
        range_projector: range,
        gamma_lipschitz: gamma,
    })
}

/// On the `gamma >= 1/k` class the metric is equivalent to the norm:
/// `||A - B|| <= d_X(A, B) <= sqrt(1 + k^2) ||A - B||`. The certificate
/// records the upper comparison and `holds` also requires the (structural)
/// lower one.
pub fn metric_equivalence_certificate(
    a: &Matrix,
    b: &Matrix,
    k: u32,
    kind: MetricKind,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    if !in_min_modulus_class(a, k, tol)? || !in_min_modulus_class(b, k, tol)? {
        return Err(Error::Precondition(format!(
            "both operators must satisfy gamma >= 1/{k}"
        )));
    }
    let dx = metric_dx(a, b, kind, tol)?;
    let diff = op_norm(&(a - b))?;
    let kf = k as f64;
    let mut cert = InequalityCertificate::evaluate(dx, (1.0 + kf * kf).sqrt() * diff, tol);
    cert.holds = cert.holds && diff <= dx + tol.eq_tol;
    Ok(cert)
}

/// Lipschitz bound for the pseudoinverse on the `gamma >= 1/k` class:
/// `||A^dagger - B^dagger|| <= 3 k^2 ||A - B||`.
pub fn pinv_lipschitz_certificate(
    a: &Matrix,
    b: &Matrix,
    k: u32,
    tol: &ToleranceConfig,
) -> Result<InequalityCertificate> {
    if !in_min_modulus_class(a, k, tol)? || !in_min_modulus_class(b, k, tol)? {
        return Err(Error::Precondition(format!(
            "both operators must satisfy gamma >= 1/{k}"
        )));
    }
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    let lhs = op_norm(&(&aa.pinv - &ab.pinv))?;
    let kf = k as f64;
    let rhs = 3.0 * kf * kf * op_norm(&(a - b))?;
    Ok(InequalityCertificate::evaluate(lhs, rhs, tol))
}

/// Rank-one inflation `A_n = A + (1/n) v u^*` with unit `u` in `N(A)` and
/// unit `v` in `N(A^*)`: the perturbation has norm exactly `1/n` and
/// collapses the reduced minimum modulus to `1/n`.
///
/// Requires an operator that is neither injective nor surjective, so that
/// both unit vectors exist.
pub fn gamma_collapse_gadget(a: &Matrix, n: u32, tol: &ToleranceConfig) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::Precondition("gadget index must be positive".into()));
    }
    let an = analyze(a, tol)?;
    if an.signature.nullity == 0 || an.signature.defect == 0 {
        return Err(Error::Precondition(
            "gadget needs nullity > 0 and defect > 0".into(),
        ));
    }
    let u = an.nullspace_columns().column_slice(0);
    let v = an.range_complement_columns().column_slice(0);
    let bump = v.outer(&u)?.scale_re(1.0 / n as f64);
    Ok(&an.a + &bump)
}

/// Output of the isometry flip: a partial isometry `W` with the same range
/// as `V_B` but at distance exactly 2 from it, and the recombined operator
/// `B~ = |B^*| W` which stays within `2 ||B x0||` of `B`.
#[derive(Clone, Debug)]
pub struct IsometryFlip {
    pub w: Matrix,
    pub b_tilde: Matrix,
    /// `||V_B - W||` (always 2 up to rounding)
    pub isometry_gap: f64,
    /// `||B - B~||`
    pub operator_gap: f64,
    /// `2 ||B x0||`, the analytic value of `operator_gap`
    pub predicted_operator_gap: f64,
}

/// Flip the polar isometry of `B` across the unit vector `x0 in N(B)^perp`:
/// `W = V_B (I - 2 P_{x0})`, `B~ = |B^*| W`.
pub fn isometry_flip(b: &Matrix, x0: &Matrix, tol: &ToleranceConfig) -> Result<IsometryFlip> {
    if x0.cols() != 1 || x0.rows() != b.cols() {
        return Err(Error::DimensionMismatch(
            "flip direction must be a domain column vector".into(),
        ));
    }
    let norm = x0.vec_norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition("flip direction must be unit".into()));
    }
    let an = analyze(b, tol)?;
    let defect = (&an.p_null * x0).vec_norm();
    if defect > tol.eq_tol.max(1e-8) {
        return Err(Error::Precondition(format!(
            "flip direction has a nullspace component of size {defect:.3e}"
        )));
    }
    let parts = polar_decompose(b, tol)?;
    let p = x0.outer(x0)?;
    let reflect = &Matrix::identity(b.cols()) - &p.scale_re(2.0);
    let w = &parts.v * &reflect;
    let b_tilde = &parts.abs_a_star * &w;
    let isometry_gap = op_norm(&(&parts.v - &w))?;
    let operator_gap = op_norm(&(b - &b_tilde))?;
    let predicted = 2.0 * (b * x0).vec_norm();
    Ok(IsometryFlip {
        w,
        b_tilde,
        isometry_gap,
        operator_gap,
        predicted_operator_gap: predicted,
    })
}
