//! The fixed-range slice: operators whose range is a prescribed subspace
//! `S`, its factorization into a positive part and a partial isometry, the
//! Thompson components of positive operators, and the associated group
//! actions with their local section.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{
    analyze, hermitian_min_eigenvalue, hermitian_sqrt, is_partial_isometry, is_psd, polar_decompose,
};
use crate::subspace::{range_basis, Subspace};
use crate::svd::{min_singular_value, op_norm, svd};
use crate::tol::ToleranceConfig;

/// A fixed closed subspace `S` of the codomain together with its projector
/// `P_S`.
#[derive(Clone, Debug)]
pub struct FixedRangeContext {
    pub s: Subspace,
    pub p: Matrix,
}

impl FixedRangeContext {
    pub fn new(s: Subspace) -> Self {
        let p = s.projector();
        FixedRangeContext { s, p }
    }

    pub fn ambient_dim(&self) -> usize {
        self.s.ambient_dim()
    }
}

/// Membership in the slice: `B B^dagger = P_S` within `eq_tol`.
pub fn slice_membership(
    b: &Matrix,
    ctx: &FixedRangeContext,
    tol: &ToleranceConfig,
) -> Result<bool> {
    if b.rows() != ctx.ambient_dim() {
        return Err(Error::DimensionMismatch(
            "operator codomain must match the fixed subspace ambient".into(),
        ));
    }
    let an = analyze(b, tol)?;
    let p_range = &an.a * &an.pinv;
    Ok(op_norm(&(&p_range - &ctx.p))? <= tol.eq_tol)
}

/// Verdict on whether two positive operators share a Thompson component,
/// with the extreme scalar bounds `B <= alpha A` and `A <= beta B` computed
/// from the compressed generalized eigenvalues when they do.
#[derive(Clone, Copy, Debug)]
pub struct ThompsonVerdict {
    pub same_component: bool,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

/// For positive operators with closed range, the Thompson component is
/// decided by the range alone: `C_A = {B >= 0 : R(B) = R(A)}`.
pub fn thompson_same_component(
    a: &Matrix,
    b: &Matrix,
    tol: &ToleranceConfig,
) -> Result<ThompsonVerdict> {
    if !is_psd(a, tol)? || !is_psd(b, tol)? {
        return Err(Error::Precondition(
            "Thompson components are defined for positive semidefinite operators".into(),
        ));
    }
    let ra = range_basis(a, tol)?;
    let rb = range_basis(b, tol)?;
    if ra.dim() != rb.dim() || ra.gap(&rb)? > tol.eq_tol {
        return Ok(ThompsonVerdict {
            same_component: false,
            alpha: None,
            beta: None,
        });
    }
    if ra.dim() == 0 {
        // both zero: scalar domination is trivial
        return Ok(ThompsonVerdict {
            same_component: true,
            alpha: Some(1.0),
            beta: Some(1.0),
        });
    }
    // Compress to the common range and compare spectra of
    // A^{-1/2} B A^{-1/2}.
    let q = ra.basis();
    let a_c = &(&q.adjoint() * a) * q;
    let b_c = &(&q.adjoint() * b) * q;
    let f = svd(&a_c.hermitian_part())?;
    let d = q.cols();
    let inv_roots: Vec<f64> = f.singular_values.iter().map(|s| 1.0 / s.sqrt()).collect();
    let a_inv_root = &(&f.v * &Matrix::rect_diag(d, d, &inv_roots)) * &f.v.adjoint();
    let m = (&(&a_inv_root * &b_c) * &a_inv_root).hermitian_part();
    let fm = svd(&m)?;
    let lambda_max = fm.singular_values.first().copied().unwrap_or(0.0);
    let lambda_min = fm.singular_values.last().copied().unwrap_or(0.0);
    Ok(ThompsonVerdict {
        same_component: true,
        alpha: Some(lambda_max),
        beta: Some(if lambda_min > 0.0 {
            1.0 / lambda_min
        } else {
            f64::INFINITY
        }),
    })
}

/// The two halves of a slice member: the positive part `|B^*|` (range `S`)
/// and the partial isometry `V = |B^*|^dagger B` (final space `S`).
#[derive(Clone, Debug)]
pub struct SliceFactors {
    pub positive: Matrix,
    pub isometry: Matrix,
}

/// Factor a slice member as `B = |B^*| V`.
pub fn factor(b: &Matrix, ctx: &FixedRangeContext, tol: &ToleranceConfig) -> Result<SliceFactors> {
    if !slice_membership(b, ctx, tol)? {
        return Err(Error::Precondition(
            "operator range does not match the fixed subspace".into(),
        ));
    }
    let parts = polar_decompose(b, tol)?;
    let abs_star_pinv = analyze(&parts.abs_a_star, tol)?.pinv;
    let isometry = &abs_star_pinv * b;
    Ok(SliceFactors {
        positive: parts.abs_a_star,
        isometry,
    })
}

/// Reassemble a slice member from a positive part with range `S` and a
/// partial isometry with final space `S`: `B = A V`.
pub fn assemble(
    a: &Matrix,
    v: &Matrix,
    ctx: &FixedRangeContext,
    tol: &ToleranceConfig,
) -> Result<Matrix> {
    if !is_psd(a, tol)? {
        return Err(Error::Precondition("positive part must be PSD".into()));
    }
    let ra = range_basis(a, tol)?;
    if ra.gap(&ctx.s)? > tol.eq_tol {
        return Err(Error::Precondition(
            "positive part must have range equal to the fixed subspace".into(),
        ));
    }
    if !is_partial_isometry(v, tol)? {
        return Err(Error::Precondition(
            "isometry part must be a partial isometry".into(),
        ));
    }
    let final_space = &(v * &v.adjoint()) - &ctx.p;
    if op_norm(&final_space)? > tol.eq_tol {
        return Err(Error::Precondition(
            "isometry part must have final space equal to the fixed subspace".into(),
        ));
    }
    Ok(a * v)
}

/// Congruence action of the `S`-block group on positive operators:
/// `G . B = G B G^*`.
pub fn action_congruence(g: &Matrix, b: &Matrix) -> Result<Matrix> {
    Ok(&(g * b) * &g.adjoint())
}

/// Right unitary action on partial isometries: `U . V = V U^*`.
pub fn action_isometry(u: &Matrix, v: &Matrix) -> Result<Matrix> {
    Ok(v * &u.adjoint())
}

/// Member of the group fixing `S^perp` pointwise: block form
/// `Q_S A Q_S^* + (I - P_S)` with `A` invertible on `S`.
pub fn gs_member(a_on_s: &Matrix, ctx: &FixedRangeContext) -> Result<Matrix> {
    let d = ctx.s.dim();
    if a_on_s.rows() != d || a_on_s.cols() != d {
        return Err(Error::DimensionMismatch(
            "block must act on the fixed subspace".into(),
        ));
    }
    let q = ctx.s.basis();
    let lifted = &(q * a_on_s) * &q.adjoint();
    let eye = Matrix::identity(ctx.ambient_dim());
    Ok(&lifted + &(&eye - &ctx.p))
}

/// The local section of `(G, U) -> (G P G^*, W U^*)` around the base pair
/// `(P, W)`:
///
/// `g = B^{1/2} + I - P`, `u = V^* W + (I - V^* V)(I - W^* W)`.
///
/// Exact contracts: `g P g^* = B` and `W u^* = V`; the unitarity defect of
/// `u` is second order in `||V - W||` and is reported for inspection.
#[derive(Clone, Debug)]
pub struct PiSection {
    pub g: Matrix,
    pub u: Matrix,
    /// `||g P g^* - B||`
    pub positive_residual: f64,
    /// `||W u^* - V||`
    pub isometry_residual: f64,
    /// `max(||u^* u - I||, ||u u^* - I||)`
    pub unitarity_defect: f64,
}

pub fn pi_local_section(
    b_pos: &Matrix,
    v: &Matrix,
    w: &Matrix,
    ctx: &FixedRangeContext,
    tol: &ToleranceConfig,
) -> Result<PiSection> {
    if !is_psd(b_pos, tol)? {
        return Err(Error::Precondition("positive part must be PSD".into()));
    }
    let rb = range_basis(b_pos, tol)?;
    if rb.gap(&ctx.s)? > tol.eq_tol {
        return Err(Error::Precondition(
            "positive part must have range equal to the fixed subspace".into(),
        ));
    }
    for (name, x) in [("first", v), ("second", w)] {
        if !is_partial_isometry(x, tol)? {
            return Err(Error::Precondition(format!(
                "{name} isometry argument is not a partial isometry"
            )));
        }
        if op_norm(&(&(x * &x.adjoint()) - &ctx.p))? > tol.eq_tol {
            return Err(Error::Precondition(format!(
                "{name} isometry argument does not have final space S"
            )));
        }
    }
    let n = v.cols();
    let eye = Matrix::identity(n);
    let qv = &v.adjoint() * v;
    let qw = &w.adjoint() * w;
    let u = &(&v.adjoint() * w) + &(&(&eye - &qv) * &(&eye - &qw));
    if min_singular_value(&u)? <= tol.eq_tol {
        return Err(Error::OutsideNeighborhood(
            "unitary factor of the section is singular".into(),
        ));
    }
    let g = &hermitian_sqrt(b_pos, tol)? + &(&Matrix::identity(ctx.ambient_dim()) - &ctx.p);
    let positive_residual = op_norm(&(&(&(&g * &ctx.p) * &g.adjoint()) - b_pos))?;
    let isometry_residual = op_norm(&(&(w * &u.adjoint()) - v))?;
    let unitarity_defect =
        op_norm(&(&(&u.adjoint() * &u) - &eye))?.max(op_norm(&(&(&u * &u.adjoint()) - &eye))?);
    Ok(PiSection {
        g,
        u,
        positive_residual,
        isometry_residual,
        unitarity_defect,
    })
}

/// Scalar-domination witness check: both `alpha A - B` and `beta B - A`
/// must be PSD up to tolerance.
pub fn thompson_certificate_holds(
    a: &Matrix,
    b: &Matrix,
    verdict: &ThompsonVerdict,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let (alpha, beta) = match (verdict.alpha, verdict.beta) {
        (Some(alpha), Some(beta)) if beta.is_finite() => (alpha, beta),
        _ => return Ok(false),
    };
    let scale = op_norm(a)?.max(op_norm(b)?).max(1.0);
    let dominated = &a.scale_re(alpha) - b;
    let dominating = &b.scale_re(beta) - a;
    let slack = tol.eq_scaled(scale) * alpha.max(beta).max(1.0);
    Ok(hermitian_min_eigenvalue(&dominated)? >= -slack
        && hermitian_min_eigenvalue(&dominating)? >= -slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn context(ambient: usize, dim: usize, seed: u64) -> FixedRangeContext {
        let mut rng = random::rng_for(seed, 60, 0);
        FixedRangeContext::new(random::random_subspace(ambient, dim, &mut rng))
    }

    /// Random member of the slice: columns spanning S composed with a full
    /// row-rank coefficient block.
    fn random_member(
        ctx: &FixedRangeContext,
        domain: usize,
        rng: &mut random::SeededRng,
    ) -> Matrix {
        let d = ctx.s.dim();
        let x = random::random_operator(d, domain, d, 0.3, 2.0, rng);
        ctx.s.basis().matmul(&x).unwrap()
    }

    /// Random partial isometry with final space S.
    fn random_slice_isometry(
        ctx: &FixedRangeContext,
        domain: usize,
        rng: &mut random::SeededRng,
    ) -> Matrix {
        let d = ctx.s.dim();
        let u = random::random_unitary(domain, rng);
        let rows = u.columns(0, d).adjoint();
        ctx.s.basis().matmul(&rows).unwrap()
    }

    /// Rotate an isometry a little from the right; stays in the slice.
    fn perturb_isometry(w: &Matrix, delta: f64, rng: &mut random::SeededRng) -> Matrix {
        let n = w.cols();
        let near = random::random_near_identity(n, delta, rng);
        let rot = polar_decompose(&near, &tol()).unwrap().v;
        w.matmul(&rot).unwrap()
    }

    #[test]
    fn membership_examples() {
        let t = tol();
        let ctx = context(4, 2, 7);
        let mut rng = random::rng_for(7, 61, 0);
        let b = random_member(&ctx, 3, &mut rng);
        assert!(slice_membership(&b, &ctx, &t).unwrap());
        assert!(!slice_membership(&Matrix::zeros(4, 3), &ctx, &t).unwrap());
        // the projector itself is a member (as an operator on the ambient)
        assert!(slice_membership(&ctx.p, &ctx, &t).unwrap());
    }

    #[test]
    fn thompson_examples() {
        let t = tol();
        let ctx = context(4, 2, 9);
        let p = ctx.p.clone();
        let v = thompson_same_component(&p, &p.scale_re(2.0), &t).unwrap();
        assert!(v.same_component);
        // B = 2P <= 2 P and P <= (1/2) 2P
        assert!((v.alpha.unwrap() - 2.0).abs() < 1e-10);
        assert!((v.beta.unwrap() - 0.5).abs() < 1e-10);
        assert!(thompson_certificate_holds(&p, &p.scale_re(2.0), &v, &t).unwrap());

        let a = Matrix::diag(&[1.0, 0.0]);
        let b = Matrix::diag(&[0.0, 1.0]);
        let v = thompson_same_component(&a, &b, &t).unwrap();
        assert!(!v.same_component);

        // same column space, different positive diagonals
        let mut rng = random::rng_for(9, 62, 1);
        let s = random::random_subspace(5, 2, &mut rng);
        let a = random::random_psd_with_range(&s, 0.5, 2.0, &mut rng);
        let b = random::random_psd_with_range(&s, 0.1, 4.0, &mut rng);
        let v = thompson_same_component(&a, &b, &t).unwrap();
        assert!(v.same_component);
        assert!(thompson_certificate_holds(&a, &b, &v, &t).unwrap());

        // non-PSD input is a precondition error
        let h = Matrix::diag(&[1.0, -1.0]);
        assert!(matches!(
            thompson_same_component(&h, &p, &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn factor_examples() {
        let t = tol();
        let ctx = context(4, 2, 11);
        // B = P_S: positive part P_S, isometry with final space S
        let f = factor(&ctx.p, &ctx, &t).unwrap();
        assert!(f.positive.max_abs_diff(&ctx.p) < 1e-12);
        assert!(op_norm(&(&(&f.isometry * &f.isometry.adjoint()) - &ctx.p)).unwrap() < 1e-10);

        // B = 2 V for a slice isometry V: positive part 2 P_S, isometry V
        let mut rng = random::rng_for(11, 63, 0);
        let v0 = random_slice_isometry(&ctx, 3, &mut rng);
        let b = v0.scale_re(2.0);
        let f = factor(&b, &ctx, &t).unwrap();
        assert!(f.positive.max_abs_diff(&ctx.p.scale_re(2.0)) < 1e-10);
        assert!(f.isometry.max_abs_diff(&v0) < 1e-10);

        // non-members are rejected
        assert!(matches!(
            factor(&Matrix::zeros(4, 3), &ctx, &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn factor_assemble_round_trip() {
        let t = tol();
        let ctx = context(5, 3, 13);
        for trial in 0..25 {
            let mut rng = random::rng_for(13, 64, trial);
            let b = random_member(&ctx, 4, &mut rng);
            let f = factor(&b, &ctx, &t).unwrap();
            assert!(is_psd(&f.positive, &t).unwrap());
            assert!(is_partial_isometry(&f.isometry, &t).unwrap());
            let back = assemble(&f.positive, &f.isometry, &ctx, &t).unwrap();
            assert!(op_norm(&(&back - &b)).unwrap() <= 1e-9 * (1.0 + op_norm(&b).unwrap()));

            // assemble then factor recovers the parts
            let a = random::random_psd_with_range(&ctx.s, 0.4, 2.0, &mut rng);
            let v = random_slice_isometry(&ctx, 4, &mut rng);
            let b2 = assemble(&a, &v, &ctx, &t).unwrap();
            assert!(slice_membership(&b2, &ctx, &t).unwrap());
            let f2 = factor(&b2, &ctx, &t).unwrap();
            assert!(f2.positive.max_abs_diff(&a) < 1e-9);
            assert!(f2.isometry.max_abs_diff(&v) < 1e-9);
        }
    }

    #[test]
    fn assemble_simple_cases() {
        let t = tol();
        let ctx = context(4, 2, 17);
        let mut rng = random::rng_for(17, 65, 0);
        let v = random_slice_isometry(&ctx, 3, &mut rng);
        let b = assemble(&ctx.p, &v, &ctx, &t).unwrap();
        assert!(b.max_abs_diff(&v) < 1e-12);
        let b = assemble(&ctx.p.scale_re(2.0), &v, &ctx, &t).unwrap();
        assert!(b.max_abs_diff(&v.scale_re(2.0)) < 1e-12);
    }

    #[test]
    fn actions_preserve_membership() {
        let t = tol();
        let ctx = context(5, 2, 19);
        for trial in 0..20 {
            let mut rng = random::rng_for(19, 66, trial);
            // congruence keeps the positive cone slice
            let a = random::random_psd_with_range(&ctx.s, 0.3, 2.0, &mut rng);
            let block = random::random_invertible(2, &mut rng);
            let g = gs_member(&block, &ctx).unwrap();
            let moved = action_congruence(&g, &a).unwrap();
            assert!(is_psd(&moved, &t).unwrap());
            assert!(range_basis(&moved, &t).unwrap().gap(&ctx.s).unwrap() < 1e-9);

            // right unitary action keeps the isometry slice
            let v = random_slice_isometry(&ctx, 4, &mut rng);
            let u = random::random_unitary(4, &mut rng);
            let moved = action_isometry(&u, &v).unwrap();
            assert!(is_partial_isometry(&moved, &t).unwrap());
            assert!(op_norm(&(&(&moved * &moved.adjoint()) - &ctx.p)).unwrap() < 1e-10);

            // the restricted two-sided action keeps the slice
            let b = random_member(&ctx, 4, &mut rng);
            let h = random::random_invertible(4, &mut rng);
            let moved = &(&g * &b) * &h.inverse().unwrap();
            assert!(slice_membership(&moved, &ctx, &t).unwrap());
        }
    }

    #[test]
    fn members_share_the_forced_nullity() {
        // every slice member has rank dim S, so its nullity is pinned at
        // domain - dim S and any two members share an orbit
        let t = tol();
        let ctx = context(5, 2, 21);
        let mut rng = random::rng_for(21, 70, 0);
        let b1 = random_member(&ctx, 4, &mut rng);
        let b2 = random_member(&ctx, 4, &mut rng);
        let sig1 = crate::orbit::signature(&b1, &t).unwrap();
        let sig2 = crate::orbit::signature(&b2, &t).unwrap();
        assert_eq!(sig1.nullity, 4 - 2);
        assert_eq!(sig1, sig2);
        assert!(crate::orbit::same_orbit(&b1, &b2, &t).unwrap());
    }

    #[test]
    fn metric_on_slice_is_the_norm() {
        let t = tol();
        let ctx = context(4, 2, 23);
        for trial in 0..15 {
            let mut rng = random::rng_for(23, 67, trial);
            let a = random_member(&ctx, 3, &mut rng);
            let b = random_member(&ctx, 3, &mut rng);
            let d =
                crate::metrics::metric_dx(&a, &b, crate::metrics::MetricKind::Range, &t).unwrap();
            let norm = op_norm(&(&a - &b)).unwrap();
            assert!((d - norm).abs() <= 1e-12 * (1.0 + norm));
        }
    }

    #[test]
    fn section_reproduces_the_pair() {
        let t = tol();
        let ctx = context(4, 2, 29);
        let mut rng = random::rng_for(29, 68, 0);
        let w = random_slice_isometry(&ctx, 3, &mut rng);

        // base point: (P, W, W)
        let s = pi_local_section(&ctx.p, &w, &w, &ctx, &t).unwrap();
        assert!(s.positive_residual < 1e-12);
        assert!(s.isometry_residual < 1e-12);
        assert!(s.unitarity_defect < 1e-12);

        // scaled positive part: B = 4P has square root 2 on S
        let s = pi_local_section(&ctx.p.scale_re(4.0), &w, &w, &ctx, &t).unwrap();
        let expected = &ctx.p.scale_re(2.0) + &(&Matrix::identity(4) - &ctx.p);
        assert!(s.g.max_abs_diff(&expected) < 1e-12);

        // perturbed isometries stay in the section neighborhood
        for trial in 0..15 {
            let mut rng = random::rng_for(29, 69, trial);
            let b = random::random_psd_with_range(&ctx.s, 0.4, 2.0, &mut rng);
            let v = perturb_isometry(&w, 1e-5, &mut rng);
            let s = pi_local_section(&b, &v, &w, &ctx, &t).unwrap();
            assert!(s.positive_residual <= 1e-10);
            assert!(s.isometry_residual <= 1e-8);
            // second order in the perturbation
            assert!(s.unitarity_defect <= 1e-9);
        }
    }
}
