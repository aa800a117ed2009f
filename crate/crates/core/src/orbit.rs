//! Orbits of the two-sided invertible-group action `(G, H) . A = G A H^{-1}`.
//!
//! The complete orbit invariant at fixed dimensions is the signature
//! (nullity, rank, defect); this module constructs explicit intertwiners
//! between same-signature operators, the projector pair map, a local cross
//! section of the action, and the distance-1 witness separating different
//! orbits in the range/nullspace metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::{metric_dx_with, MetricKind};
use crate::operator::{analyze, polar_decompose, OperatorAnalysis};
use crate::random::SeededRng;
use crate::subspace::Subspace;
use crate::svd::{min_singular_value, op_norm};
use crate::tol::ToleranceConfig;

/// The triple classifying an orbit: nullity `k = dim N(A)`, rank
/// `l = dim R(A)`, defect `m = codim R(A)`.
///
/// `nullity + rank` is the domain dimension and `rank + defect` the codomain
/// dimension, so a signature pins the shape as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSignature {
    pub nullity: usize,
    pub rank: usize,
    pub defect: usize,
}

impl OrbitSignature {
    /// Semi-Fredholm index `dim N(A) - codim R(A)`.
    pub fn index(&self) -> i64 {
        self.nullity as i64 - self.defect as i64
    }
}

impl std::fmt::Display for OrbitSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.nullity, self.rank, self.defect)
    }
}

pub fn signature(a: &Matrix, tol: &ToleranceConfig) -> Result<OrbitSignature> {
    Ok(analyze(a, tol)?.signature)
}

pub fn sf_index(a: &Matrix, tol: &ToleranceConfig) -> Result<i64> {
    Ok(signature(a, tol)?.index())
}

pub fn same_orbit(a: &Matrix, b: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(
            "orbit comparison needs equal shapes".into(),
        ));
    }
    Ok(signature(a, tol)? == signature(b, tol)?)
}

/// `G A H^{-1}`. Signature is invariant under the action.
pub fn apply_action(g: &Matrix, h: &Matrix, a: &Matrix, _tol: &ToleranceConfig) -> Result<Matrix> {
    let h_inv = h.inverse()?;
    Ok(&(g * a) * &h_inv)
}

/// A pair of invertibles `(G, H)` with `G A H^{-1} = B`, plus the achieved
/// residual.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub g: Matrix,
    pub h: Matrix,
    pub residual: f64,
}

/// Constructive orbit equivalence: for same-signature `A`, `B`, build
/// invertible `G`, `H` with `G A H^{-1} = B`.
///
/// The bases come from the two factorizations: `U` matches corange bases,
/// `U'` matches nullspace bases, `V'` matches range complements, and on the
/// range `W = B U A^dagger`; all choices are unitary between the subspaces
/// involved, so `G` and `H` are well conditioned whenever `A` and `B` are.
pub fn build_intertwiner(a: &Matrix, b: &Matrix, tol: &ToleranceConfig) -> Result<Intertwiner> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(
            "intertwiner needs equal shapes".into(),
        ));
    }
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    if aa.signature != ab.signature {
        return Err(Error::Precondition(format!(
            "signature mismatch: {} vs {}",
            aa.signature, ab.signature
        )));
    }
    let m = a.rows();
    let n = a.cols();
    let r = aa.rank;

    // U: N(A)^perp -> N(B)^perp, as an n x n partial map extended by
    // U': N(A) -> N(B).
    let u_map = if r == 0 {
        Matrix::zeros(n, n)
    } else {
        &ab.corange_columns() * &aa.corange_columns().adjoint()
    };
    let u_prime = if r == n {
        Matrix::zeros(n, n)
    } else {
        &ab.nullspace_columns() * &aa.nullspace_columns().adjoint()
    };
    // W = B U A^dagger maps R(A) isomorphically onto R(B).
    let w = &(b * &u_map) * &aa.pinv;
    // V': R(A)^perp -> R(B)^perp.
    let v_prime = if r == m {
        Matrix::zeros(m, m)
    } else {
        &ab.range_complement_columns() * &aa.range_complement_columns().adjoint()
    };

    let eye_m = Matrix::identity(m);
    let eye_n = Matrix::identity(n);
    let g = &(&w * &aa.p_range) + &(&v_prime * &(&eye_m - &aa.p_range));
    let h = &(&u_map * &aa.p_corange) + &(&u_prime * &(&eye_n - &aa.p_corange));

    let achieved = apply_action(&g, &h, a, tol)?;
    let residual = op_norm(&(&achieved - b))?;
    Ok(Intertwiner { g, h, residual })
}

/// The projector pair `(B B^dagger, B^dagger B) = (P_{R(B)}, P_{R(B^*)})`.
#[derive(Clone, Debug)]
pub struct ProjectorPair {
    pub p: Matrix,
    pub q: Matrix,
}

pub fn projector_pair(b: &Matrix, tol: &ToleranceConfig) -> Result<ProjectorPair> {
    let an = analyze(b, tol)?;
    Ok(ProjectorPair {
        p: &an.a * &an.pinv,
        q: &an.pinv * &an.a,
    })
}

/// Three independent orbit-equivalence criteria that must agree:
/// equal signatures, matching projector ranks on both sides, and equal
/// signatures of the polar partial isometries.
#[derive(Clone, Copy, Debug)]
pub struct OrbitEquivalenceVerdicts {
    pub same_orbit: bool,
    pub projector_ranks_match: bool,
    pub polar_isometries_equivalent: bool,
}

impl OrbitEquivalenceVerdicts {
    pub fn consistent(&self) -> bool {
        self.same_orbit == self.projector_ranks_match
            && self.same_orbit == self.polar_isometries_equivalent
    }
}

pub fn orbit_equivalence_verdicts(
    a: &Matrix,
    b: &Matrix,
    tol: &ToleranceConfig,
) -> Result<OrbitEquivalenceVerdicts> {
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    let same = aa.signature == ab.signature;
    // Projections are unitarily equivalent iff their ranks (and co-ranks)
    // agree; at fixed shape the co-ranks follow from the ranks.
    let ranks = {
        let ra = analyze(&aa.p_range, tol)?.rank;
        let rb = analyze(&ab.p_range, tol)?.rank;
        let ca = analyze(&aa.p_corange, tol)?.rank;
        let cb = analyze(&ab.p_corange, tol)?.rank;
        ra == rb && ca == cb
    };
    let polar = {
        let va = polar_decompose(a, tol)?.v;
        let vb = polar_decompose(b, tol)?.v;
        signature(&va, tol)? == signature(&vb, tol)?
    };
    Ok(OrbitEquivalenceVerdicts {
        same_orbit: same,
        projector_ranks_match: ranks,
        polar_isometries_equivalent: polar,
    })
}

/// The explicit invertible `G = |A^*|^dagger + I - P_{R(A)}` carrying `A` to
/// its polar partial isometry inside the orbit, with inverse
/// `|A^*| + I - P_{R(A)}`.
#[derive(Clone, Debug)]
pub struct PolarReduction {
    pub g: Matrix,
    pub g_inverse: Matrix,
    /// `||G A - V_A||`
    pub residual: f64,
    /// `||G (|A^*| + I - P_{R(A)}) - I||`
    pub inverse_residual: f64,
}

pub fn polar_orbit_reduction(a: &Matrix, tol: &ToleranceConfig) -> Result<PolarReduction> {
    let an = analyze(a, tol)?;
    let parts = polar_decompose(a, tol)?;
    let abs_star_pinv = analyze(&parts.abs_a_star, tol)?.pinv;
    let m = a.rows();
    let eye = Matrix::identity(m);
    let complement = &eye - &an.p_range;
    let g = &abs_star_pinv + &complement;
    let g_inverse = &parts.abs_a_star + &complement;
    let residual = op_norm(&(&(&g * a) - &parts.v))?;
    let inverse_residual = op_norm(&(&(&g * &g_inverse) - &eye))?;
    Ok(PolarReduction {
        g,
        g_inverse,
        residual,
        inverse_residual,
    })
}

/// Orthogonal projector onto `G(S)` from the idempotent `Q = G P_S G^{-1}`:
/// `P = Q Q^* (I - (Q - Q^*)^2)^{-1}`.
///
/// `Q - Q^*` is skew-Hermitian, so `I - (Q - Q^*)^2 = I + (Q - Q^*)^*(Q -
/// Q^*)` is positive definite and the resolvent factor is always invertible;
/// a singular factor can only arise from a numerically broken input and is
/// reported as a diagnostic error.
pub fn pushforward_projector(g: &Matrix, s: &Subspace, tol: &ToleranceConfig) -> Result<Matrix> {
    if g.rows() != g.cols() || g.rows() != s.ambient_dim() {
        return Err(Error::DimensionMismatch(
            "pushforward needs a square operator on the subspace ambient".into(),
        ));
    }
    if min_singular_value(g)? <= tol.eq_tol {
        return Err(Error::Singular("pushforward of a singular operator".into()));
    }
    let q = &(g * &s.projector()) * &g.inverse()?;
    let skew = &q - &q.adjoint();
    let factor = &Matrix::identity(g.rows()) - &(&skew * &skew);
    let inv = factor
        .inverse()
        .map_err(|_| Error::Singular("resolvent factor in the projector formula".into()))?;
    Ok(&(&q * &q.adjoint()) * &inv)
}

/// Local cross section of the action around `A`: for `B` close enough,
///
/// `G = B A^dagger + (I - P_{R(B)})(I - P_{R(A)})`,
/// `H = P_{R(B^*)} P_{R(A^*)} + (I - P_{R(B^*)})(I - P_{R(A^*)})`
///
/// satisfy `G A H^{-1} = B`. "Close enough" is operationalized as both
/// factors having smallest singular value above `eq_tol`.
pub fn local_section(a: &Matrix, b: &Matrix, tol: &ToleranceConfig) -> Result<Intertwiner> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(
            "section needs equal shapes".into(),
        ));
    }
    let aa = analyze(a, tol)?;
    let ab = analyze(b, tol)?;
    let eye_m = Matrix::identity(a.rows());
    let eye_n = Matrix::identity(a.cols());
    let g = &(b * &aa.pinv) + &(&(&eye_m - &ab.p_range) * &(&eye_m - &aa.p_range));
    let h =
        &(&ab.p_corange * &aa.p_corange) + &(&(&eye_n - &ab.p_corange) * &(&eye_n - &aa.p_corange));
    if min_singular_value(&g)? <= tol.eq_tol {
        return Err(Error::OutsideNeighborhood(
            "left section factor is singular".into(),
        ));
    }
    if min_singular_value(&h)? <= tol.eq_tol {
        return Err(Error::OutsideNeighborhood(
            "right section factor is singular".into(),
        ));
    }
    let achieved = apply_action(&g, &h, a, tol)?;
    let residual = op_norm(&(&achieved - b))?;
    Ok(Intertwiner { g, h, residual })
}

/// Witness record for the distance between two different orbits: every
/// sampled pair of representatives keeps a projector gap of exactly 1, and
/// scaling representatives toward zero drives the metric down to that gap.
#[derive(Clone, Debug)]
pub struct DistanceWitness {
    pub lower_bound_is_one: bool,
    pub witness_dx: f64,
    pub sampled_gaps: Vec<f64>,
}

/// Distance-1 witness for operators in different orbits (which at a fixed
/// finite shape always means different ranks).
///
/// For `kind = Null` the computation runs on the adjoints, since the
/// nullspace metric of a pair equals the range metric of the adjoint pair.
pub fn orbit_distance_witness(
    a: &Matrix,
    b: &Matrix,
    kind: MetricKind,
    epsilon: f64,
    samples: usize,
    rng: &mut SeededRng,
    tol: &ToleranceConfig,
) -> Result<DistanceWitness> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(
            "distance witness needs equal shapes".into(),
        ));
    }
    if same_orbit(a, b, tol)? {
        return Err(Error::Precondition(
            "operators lie in the same orbit".into(),
        ));
    }
    let (a, b) = match kind {
        MetricKind::Range => (a.clone(), b.clone()),
        MetricKind::Null => (a.adjoint(), b.adjoint()),
    };
    let m = a.rows();
    let n = a.cols();
    let mut gaps = Vec::with_capacity(samples.max(1));
    let mut all_one = true;
    let mut last_pair: Option<(OperatorAnalysis, OperatorAnalysis)> = None;
    for _ in 0..samples.max(1) {
        let g1 = crate::random::random_invertible(m, rng);
        let h1 = crate::random::random_invertible(n, rng);
        let g2 = crate::random::random_invertible(m, rng);
        let h2 = crate::random::random_invertible(n, rng);
        let rep_a = apply_action(&g1, &h1, &a, tol)?;
        let rep_b = apply_action(&g2, &h2, &b, tol)?;
        let an_a = analyze(&rep_a, tol)?;
        let an_b = analyze(&rep_b, tol)?;
        let gap = op_norm(&(&an_a.p_range - &an_b.p_range))?;
        all_one &= (gap - 1.0).abs() <= 1e-8;
        gaps.push(gap);
        last_pair = Some((an_a, an_b));
    }
    let (an_a, an_b) = last_pair.expect("at least one sample");
    // Scale both representatives toward zero: the projector gap is scale
    // invariant while the norm gap shrinks with epsilon.
    let denom = 2.0 * (an_a.op_norm + an_b.op_norm);
    let scale = if denom > 0.0 { epsilon / denom } else { 1.0 };
    let scaled_a = analyze(&an_a.a.scale_re(scale), tol)?;
    let scaled_b = analyze(&an_b.a.scale_re(scale), tol)?;
    let witness_dx = metric_dx_with(&scaled_a, &scaled_b, MetricKind::Range)?;
    Ok(DistanceWitness {
        lower_bound_is_one: all_one,
        witness_dx,
        sampled_gaps: gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn signature_examples() {
        let t = tol();
        let s = signature(&Matrix::identity(3), &t).unwrap();
        assert_eq!((s.nullity, s.rank, s.defect), (0, 3, 0));
        let s = signature(&Matrix::diag(&[1.0, 0.0]), &t).unwrap();
        assert_eq!((s.nullity, s.rank, s.defect), (1, 1, 1));
        // 2x3 full-rank: nullity 1, rank 2, defect 0
        let a = Matrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let s = signature(&a, &t).unwrap();
        assert_eq!((s.nullity, s.rank, s.defect), (1, 2, 0));
        assert_eq!(s.index(), 1);
        assert_eq!(sf_index(&Matrix::identity(3), &t).unwrap(), 0);
        assert_eq!(sf_index(&Matrix::diag(&[1.0, 0.0]), &t).unwrap(), 0);
    }

    #[test]
    fn action_examples_and_invariance() {
        let t = tol();
        let a = Matrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        let i2 = Matrix::identity(2);
        let back = apply_action(&i2, &i2, &a, &t).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-14);
        let doubled = apply_action(&i2.scale_re(2.0), &i2, &i2, &t).unwrap();
        assert!(doubled.max_abs_diff(&i2.scale_re(2.0)) < 1e-14);

        for trial in 0..20 {
            let mut rng = random::rng_for(51, 10, trial);
            let a = random::random_operator(4, 5, 2, 0.3, 2.0, &mut rng);
            let g = random::random_invertible(4, &mut rng);
            let h = random::random_invertible(5, &mut rng);
            let moved = apply_action(&g, &h, &a, &t).unwrap();
            assert_eq!(signature(&moved, &t).unwrap(), signature(&a, &t).unwrap());
        }
    }

    #[test]
    fn same_orbit_examples() {
        let t = tol();
        let a = Matrix::diag(&[1.0, 0.0]);
        let b = Matrix::diag(&[0.0, 1.0]);
        assert!(same_orbit(&a, &a, &t).unwrap());
        assert!(same_orbit(&a, &b, &t).unwrap());
        assert!(!same_orbit(&Matrix::identity(2), &a, &t).unwrap());
    }

    #[test]
    fn intertwiner_on_permuted_rank_one() {
        let t = tol();
        let a = Matrix::diag(&[1.0, 0.0]);
        let b = Matrix::diag(&[0.0, 2.0]);
        let tw = build_intertwiner(&a, &b, &t).unwrap();
        assert!(tw.residual <= 1e-10);
        let achieved = apply_action(&tw.g, &tw.h, &a, &t).unwrap();
        assert!(achieved.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn intertwiner_identity_case_and_random_pairs() {
        let t = tol();
        let a = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.5]]);
        let tw = build_intertwiner(&a, &a, &t).unwrap();
        assert!(tw.residual < 1e-12);

        for trial in 0..25 {
            let mut rng = random::rng_for(53, 11, trial);
            let a = random::random_operator(5, 4, 2, 0.2, 2.0, &mut rng);
            let b = random::random_operator(5, 4, 2, 0.2, 2.0, &mut rng);
            let tw = build_intertwiner(&a, &b, &t).unwrap();
            assert!(
                tw.residual <= 1e-8 * (1.0 + crate::svd::op_norm(&b).unwrap()),
                "residual {:.3e}",
                tw.residual
            );
            assert!(min_singular_value(&tw.g).unwrap() > t.eq_tol);
            assert!(min_singular_value(&tw.h).unwrap() > t.eq_tol);
        }
    }

    #[test]
    fn intertwiner_rejects_signature_mismatch() {
        let t = tol();
        let a = Matrix::identity(2);
        let b = Matrix::diag(&[1.0, 0.0]);
        assert!(matches!(
            build_intertwiner(&a, &b, &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn projector_pair_examples() {
        let t = tol();
        let pp = projector_pair(&Matrix::identity(2), &t).unwrap();
        assert!(pp.p.max_abs_diff(&Matrix::identity(2)) < 1e-14);
        let pp = projector_pair(&Matrix::diag(&[2.0, 0.0]), &t).unwrap();
        assert!(pp.p.max_abs_diff(&Matrix::diag(&[1.0, 0.0])) < 1e-14);
        assert!(pp.q.max_abs_diff(&Matrix::diag(&[1.0, 0.0])) < 1e-14);
        // for a partial isometry the pair is (V V^*, V^* V)
        let mut rng = random::rng_for(59, 12, 0);
        let a = random::random_operator(4, 4, 2, 0.5, 2.0, &mut rng);
        let v = crate::operator::polar_decompose(&a, &t).unwrap().v;
        let pp = projector_pair(&v, &t).unwrap();
        assert!(pp.p.max_abs_diff(&(&v * &v.adjoint())) < 1e-10);
        assert!(pp.q.max_abs_diff(&(&v.adjoint() * &v)) < 1e-10);
    }

    #[test]
    fn equivalence_verdicts_agree() {
        let t = tol();
        let a = Matrix::diag(&[1.0, 0.0]);
        let v = orbit_equivalence_verdicts(&a, &a, &t).unwrap();
        assert!(v.same_orbit && v.consistent());
        let v = orbit_equivalence_verdicts(&Matrix::identity(2), &a, &t).unwrap();
        assert!(!v.same_orbit && v.consistent());
        for trial in 0..15 {
            let mut rng = random::rng_for(61, 13, trial);
            let a = random::random_operator(4, 3, 2, 0.3, 2.0, &mut rng);
            let b = random::random_operator(4, 3, 2, 0.3, 2.0, &mut rng);
            let v = orbit_equivalence_verdicts(&a, &b, &t).unwrap();
            assert!(v.same_orbit && v.consistent());
        }
    }

    #[test]
    fn polar_reduction_examples() {
        let t = tol();
        let mut rng = random::rng_for(67, 14, 0);
        let u = random::random_unitary(3, &mut rng);
        let red = polar_orbit_reduction(&u, &t).unwrap();
        assert!(red.g.max_abs_diff(&Matrix::identity(3)) < 1e-12);
        assert!(red.residual < 1e-12);

        let a = Matrix::diag(&[2.0, 0.0]);
        let red = polar_orbit_reduction(&a, &t).unwrap();
        assert!(red.g.max_abs_diff(&Matrix::diag(&[0.5, 1.0])) < 1e-13);
        assert!(red.residual < 1e-13);
        assert!(red.inverse_residual < 1e-13);

        for trial in 0..20 {
            let mut rng = random::rng_for(67, 15, trial);
            let a = random::random_operator(4, 4, 3, 0.2, 2.0, &mut rng);
            let red = polar_orbit_reduction(&a, &t).unwrap();
            assert!(red.residual <= 1e-9, "residual {:.3e}", red.residual);
            assert!(red.inverse_residual <= 1e-9);
        }
    }

    #[test]
    fn pushforward_matches_orthonormalization_oracle() {
        let t = tol();
        // G = I keeps the projector
        let mut rng = random::rng_for(71, 16, 0);
        let s = random::random_subspace(3, 1, &mut rng);
        let p = pushforward_projector(&Matrix::identity(3), &s, &t).unwrap();
        assert!(p.max_abs_diff(&s.projector()) < 1e-12);

        // unitary G conjugates it
        let u = random::random_unitary(3, &mut rng);
        let p = pushforward_projector(&u, &s, &t).unwrap();
        let expected = &(&u * &s.projector()) * &u.adjoint();
        assert!(p.max_abs_diff(&expected) < 1e-11);

        // diag(2,1) on span((1,1)/sqrt 2) against the orthonormalized image
        let basis = Matrix::from_real_rows(&[
            &[std::f64::consts::FRAC_1_SQRT_2],
            &[std::f64::consts::FRAC_1_SQRT_2],
        ]);
        let s = Subspace::from_orthonormal(basis, &t).unwrap();
        let g = Matrix::diag(&[2.0, 1.0]);
        let p = pushforward_projector(&g, &s, &t).unwrap();
        let image = s.map_through(&g, &t).unwrap();
        assert!(p.max_abs_diff(&image.projector()) < 1e-12);
    }

    #[test]
    fn section_reproduces_nearby_elements() {
        let t = tol();
        let mut rng = random::rng_for(73, 17, 0);
        let a = random::random_operator(4, 4, 2, 0.5, 2.0, &mut rng);
        let tw = local_section(&a, &a, &t).unwrap();
        assert!(tw.residual < 1e-12);

        let b = a.scale_re(1.05);
        let tw = local_section(&a, &b, &t).unwrap();
        assert!(tw.residual <= 1e-10);

        for trial in 0..20 {
            let mut rng = random::rng_for(73, 18, trial);
            let a = random::random_operator(5, 4, 3, 0.5, 2.0, &mut rng);
            let g = random::random_near_identity(5, 0.02, &mut rng);
            let h = random::random_near_identity(4, 0.02, &mut rng);
            let b = apply_action(&g, &h, &a, &t).unwrap();
            let tw = local_section(&a, &b, &t).unwrap();
            assert!(tw.residual <= 1e-8, "residual {:.3e}", tw.residual);
        }
    }

    #[test]
    fn distance_witness_on_rank_gap() {
        let t = tol();
        let mut rng = random::rng_for(79, 19, 0);
        let a = Matrix::identity(2);
        let b = Matrix::diag(&[1.0, 0.0]);
        let w = orbit_distance_witness(&a, &b, MetricKind::Range, 0.01, 10, &mut rng, &t).unwrap();
        assert!(w.lower_bound_is_one);
        assert!(w.witness_dx >= 1.0 - 1e-8 && w.witness_dx <= 1.0 + 0.01);

        // rank one against the zero operator
        let w = orbit_distance_witness(
            &Matrix::diag(&[1.0, 0.0]),
            &Matrix::zeros(2, 2),
            MetricKind::Range,
            0.1,
            10,
            &mut rng,
            &t,
        )
        .unwrap();
        assert!(w.lower_bound_is_one);

        // nullspace variant gives the same verdict
        let w = orbit_distance_witness(&a, &b, MetricKind::Null, 0.01, 10, &mut rng, &t).unwrap();
        assert!(w.lower_bound_is_one);

        assert!(matches!(
            orbit_distance_witness(
                &b,
                &Matrix::diag(&[0.0, 2.0]),
                MetricKind::Range,
                0.1,
                2,
                &mut rng,
                &t
            ),
            Err(Error::Precondition(_))
        ));
    }
}
