//! Angles between subspaces: the cosines `c0` and `c`, intersections, and
//! the sum/position equivalences that the convergence battery leans on.
//!
//! `c0(M, N)` is the largest cosine between unit vectors of the two
//! subspaces; `c(M, N)` is the same after the common part `M  cap N` has been
//! projected out, and `alpha = arccos c` is the angle.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::analyze;
use crate::subspace::{nullspace_basis, Subspace};
use crate::svd::{anchored_rank, op_norm, svd};
use crate::tol::ToleranceConfig;

fn check_ambient(m: &Subspace, n: &Subspace) -> Result<()> {
    if m.ambient_dim() != n.ambient_dim() {
        return Err(Error::DimensionMismatch(
            "subspaces live in different ambient dimensions".into(),
        ));
    }
    Ok(())
}

/// `c0(M, N) = sup |<x, y>|` over unit vectors; the largest singular value
/// of `Q_M^* Q_N`. Zero when either subspace is zero.
pub fn cos_c0(m: &Subspace, n: &Subspace, _tol: &ToleranceConfig) -> Result<f64> {
    check_ambient(m, n)?;
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(0.0);
    }
    let cross = &m.basis().adjoint() * n.basis();
    // correlations cannot exceed 1; clamp the rounding excess
    Ok(op_norm(&cross)?.min(1.0))
}

/// `M cap N`, detected as the left singular directions of `Q_M^* Q_N` whose
/// cosine is within `angle_one_tol` of 1, mapped back into the ambient
/// space.
pub fn intersect(m: &Subspace, n: &Subspace, tol: &ToleranceConfig) -> Result<Subspace> {
    check_ambient(m, n)?;
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(Subspace::zero(m.ambient_dim()));
    }
    let cross = &m.basis().adjoint() * n.basis();
    let f = svd(&cross)?;
    let count = f
        .singular_values
        .iter()
        .filter(|&&s| s >= 1.0 - tol.angle_one_tol)
        .count();
    if count == 0 {
        return Ok(Subspace::zero(m.ambient_dim()));
    }
    let directions = m.basis().matmul(&f.u.columns(0, count))?;
    Subspace::from_orthonormal(directions, tol)
}

/// `c(M, N) = c0(M cap (M cap N)^perp, N cap (M cap N)^perp)`.
///
/// The principal-direction decomposition splits `M` and `N` orthogonally
/// along the detected intersection, and the cross-Gram of the reduced pair
/// is diagonal with exactly the singular values below the intersection
/// threshold; the reduced cosine is therefore the largest such value. This
/// evaluation is exact and manifestly symmetric.
pub fn cos_c(m: &Subspace, n: &Subspace, tol: &ToleranceConfig) -> Result<f64> {
    check_ambient(m, n)?;
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(0.0);
    }
    let cross = &m.basis().adjoint() * n.basis();
    let f = svd(&cross)?;
    Ok(f.singular_values
        .iter()
        .copied()
        .find(|&s| s < 1.0 - tol.angle_one_tol)
        .unwrap_or(0.0)
        .min(1.0))
}

/// The angle `alpha(M, N) = arccos c(M, N)` in `[0, pi/2]`.
pub fn angle(m: &Subspace, n: &Subspace, tol: &ToleranceConfig) -> Result<f64> {
    Ok(cos_c(m, n, tol)?.clamp(0.0, 1.0).acos())
}

/// The two equivalent readings of "M + N is everything": a dimension count
/// on the concatenated bases, and `c0(M^perp, N^perp) < 1`.
#[derive(Clone, Copy, Debug)]
pub struct SumDecompositionVerdict {
    pub sum_is_everything: bool,
    pub complements_angle_below_one: bool,
}

impl SumDecompositionVerdict {
    pub fn consistent(&self) -> bool {
        self.sum_is_everything == self.complements_angle_below_one
    }
}

pub fn sum_decomposition_verdict(
    m: &Subspace,
    n: &Subspace,
    tol: &ToleranceConfig,
) -> Result<SumDecompositionVerdict> {
    check_ambient(m, n)?;
    let sum_is_everything = m.sum_dim(n, tol)? == m.ambient_dim();
    let c0_perp = cos_c0(&m.complement()?, &n.complement()?, tol)?;
    Ok(SumDecompositionVerdict {
        sum_is_everything,
        complements_angle_below_one: c0_perp < 1.0 - tol.angle_one_tol,
    })
}

/// Four readings of "the nullspace of `B` is in general position against the
/// nullspace of `C`":
///
/// 1. `||P_{N(B)} - P_{N(C)}|| < 1`;
/// 2. the domain decomposes as `N(C) + R(B^dagger)`;
/// 3. `c0(N(B), R(C^dagger)) < 1`;
/// 4. `N(B) = P_{N(B)}(N(C))`.
///
/// The first two agree by construction of the toolkit's test ensembles; the
/// last two are tracked separately so a disagreement is observable rather
/// than asserted away.
#[derive(Clone, Copy, Debug)]
pub struct NullspacePositionVerdicts {
    pub projector_gap_below_one: bool,
    pub sum_is_domain: bool,
    pub angle_below_one: bool,
    pub null_projection_matches: bool,
}

pub fn nullspace_position_verdicts(
    b: &Matrix,
    c: &Matrix,
    tol: &ToleranceConfig,
) -> Result<NullspacePositionVerdicts> {
    if b.rows() != c.rows() || b.cols() != c.cols() {
        return Err(Error::DimensionMismatch(
            "position verdicts need equal shapes".into(),
        ));
    }
    let ab = analyze(b, tol)?;
    let ac = analyze(c, tol)?;
    let domain = b.cols();

    let gap = op_norm(&(&ab.p_null - &ac.p_null))?;
    let projector_gap_below_one = gap < 1.0 - tol.angle_one_tol;

    // N(C) + R(B^dagger) = N(C) + N(B)^perp
    let null_c = nullspace_basis(c, tol)?;
    let corange_b = Subspace::from_orthonormal(ab.corange_columns(), tol)?;
    let sum_is_domain = null_c.sum_dim(&corange_b, tol)? == domain;

    // c0(N(B), R(C^dagger)) = c0(N(B), N(C)^perp)
    let null_b = nullspace_basis(b, tol)?;
    let corange_c = Subspace::from_orthonormal(ac.corange_columns(), tol)?;
    let angle_below_one = cos_c0(&null_b, &corange_c, tol)? < 1.0 - tol.angle_one_tol;

    // P_{N(B)} N(C) always sits inside N(B); equality is a rank count,
    // anchored at the unit column scale of the projected basis.
    let projected = ab.p_null.matmul(null_c.basis())?;
    let rank = if null_c.dim() == 0 {
        0
    } else {
        anchored_rank(&svd(&projected)?, tol)
    };
    let null_projection_matches = rank == null_b.dim();

    Ok(NullspacePositionVerdicts {
        projector_gap_below_one,
        sum_is_domain,
        angle_below_one,
        null_projection_matches,
    })
}

/// The reported (not asserted) identity `c(M, N) = ||P_M - P_{N^perp}||`:
/// returns the pair so a harness can log both sides.
pub fn c_vs_projector_gap(m: &Subspace, n: &Subspace, tol: &ToleranceConfig) -> Result<(f64, f64)> {
    let c = cos_c(m, n, tol)?;
    let n_perp = n.complement()?;
    let gap = op_norm(&(&m.projector() - &n_perp.projector()))?;
    Ok((c, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn line(ambient: usize, coords: &[f64]) -> Subspace {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        let m = Matrix::from_fn(ambient, 1, |i, _| {
            num_complex::Complex64::new(coords[i] / norm, 0.0)
        });
        Subspace::from_orthonormal(m, &tol()).unwrap()
    }

    #[test]
    fn cos_c0_examples() {
        let t = tol();
        let e1 = line(2, &[1.0, 0.0]);
        let e2 = line(2, &[0.0, 1.0]);
        let diag = line(2, &[1.0, 1.0]);
        assert!(cos_c0(&e1, &e2, &t).unwrap() < 1e-14);
        assert!((cos_c0(&e1, &e1, &t).unwrap() - 1.0).abs() < 1e-14);
        let c = cos_c0(&e1, &diag, &t).unwrap();
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn cos_c0_brute_force_oracle_on_lines() {
        // sup over unit vectors of two lines reduces to a phase sweep; a
        // fine grid bounds it from below
        let t = tol();
        let u = line(3, &[1.0, 2.0, -0.5]);
        let w = line(3, &[0.5, -1.0, 1.5]);
        let analytic = cos_c0(&u, &w, &t).unwrap();
        let mut best: f64 = 0.0;
        let x = u.basis();
        let y = w.basis();
        let mut ip = num_complex::Complex64::new(0.0, 0.0);
        for i in 0..3 {
            ip += x[(i, 0)].conj() * y[(i, 0)];
        }
        for k in 0..=2000 {
            let phase =
                num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 2000.0);
            best = best.max((ip * phase).re.abs());
        }
        assert!((analytic - best).abs() < 1e-6);
    }

    #[test]
    fn intersection_examples() {
        let t = tol();
        let e1 = line(2, &[1.0, 0.0]);
        let e2 = line(2, &[0.0, 1.0]);
        let same = intersect(&e1, &e1, &t).unwrap();
        assert_eq!(same.dim(), 1);
        assert!(same.gap(&e1).unwrap() < 1e-12);
        assert_eq!(intersect(&e1, &e2, &t).unwrap().dim(), 0);

        // two planes in C^3 sharing the line through (0,0,1)
        let shared = line(3, &[0.0, 0.0, 1.0]);
        let p1 = Subspace::from_span(
            &Matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]),
            &t,
        )
        .unwrap();
        let p2 = Subspace::from_span(
            &Matrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]),
            &t,
        )
        .unwrap();
        let common = intersect(&p1, &p2, &t).unwrap();
        assert_eq!(common.dim(), 1);
        assert!(common.gap(&shared).unwrap() < 1e-10);
        assert!(common.containment_defect(&p1).unwrap() < 1e-10);
        assert!(common.containment_defect(&p2).unwrap() < 1e-10);
    }

    #[test]
    fn cos_c_and_angle_examples() {
        let t = tol();
        let e1 = line(2, &[1.0, 0.0]);
        let e2 = line(2, &[0.0, 1.0]);
        let diag = line(2, &[1.0, 1.0]);
        // identical subspaces reduce to zero
        assert!(cos_c(&e1, &e1, &t).unwrap() < 1e-14);
        assert!((angle(&e1, &e1, &t).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!(cos_c(&e1, &e2, &t).unwrap() < 1e-14);
        assert!((angle(&e1, &e2, &t).unwrap() - FRAC_PI_2).abs() < 1e-12);
        // trivial intersection: c = c0
        let c = cos_c(&e1, &diag, &t).unwrap();
        assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((angle(&e1, &diag, &t).unwrap() - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn cos_c_below_c0_and_symmetric() {
        let t = tol();
        for trial in 0..40 {
            let mut rng = random::rng_for(139, 40, trial);
            let ambient = 3 + (trial as usize % 3);
            let m = random::random_subspace(ambient, 1 + (trial as usize % ambient), &mut rng);
            let n =
                random::random_subspace(ambient, 1 + ((trial as usize / 2) % ambient), &mut rng);
            let c0 = cos_c0(&m, &n, &t).unwrap();
            let c_mn = cos_c(&m, &n, &t).unwrap();
            let c_nm = cos_c(&n, &m, &t).unwrap();
            assert!(c_mn <= c0 + 1e-10);
            assert!((c_mn - c_nm).abs() < 1e-9);
        }
    }

    #[test]
    fn c0_below_one_iff_trivial_intersection() {
        let t = tol();
        for trial in 0..40 {
            let mut rng = random::rng_for(149, 41, trial);
            let ambient = 4;
            let m = random::random_subspace(ambient, 2, &mut rng);
            let n = random::random_subspace(ambient, 2, &mut rng);
            let c0 = cos_c0(&m, &n, &t).unwrap();
            let trivial = intersect(&m, &n, &t).unwrap().dim() == 0;
            assert_eq!(c0 < 1.0 - t.angle_one_tol, trivial);
        }
        // forced intersection: shared direction
        let mut rng = random::rng_for(149, 42, 999);
        let shared = random::random_subspace(4, 1, &mut rng);
        let extra1 = random::random_subspace(4, 1, &mut rng);
        let extra2 = random::random_subspace(4, 1, &mut rng);
        let m = Subspace::from_span(&shared.basis().hcat(extra1.basis()).unwrap(), &t).unwrap();
        let n = Subspace::from_span(&shared.basis().hcat(extra2.basis()).unwrap(), &t).unwrap();
        let c0 = cos_c0(&m, &n, &t).unwrap();
        assert!(c0 >= 1.0 - t.angle_one_tol);
        assert!(intersect(&m, &n, &t).unwrap().dim() >= 1);
    }

    #[test]
    fn sum_decomposition_examples() {
        let t = tol();
        let e1 = line(2, &[1.0, 0.0]);
        let diag = line(2, &[1.0, 1.0]);
        let v = sum_decomposition_verdict(&e1, &diag, &t).unwrap();
        assert!(v.sum_is_everything && v.consistent());
        let v = sum_decomposition_verdict(&e1, &e1, &t).unwrap();
        assert!(!v.sum_is_everything && v.consistent());

        for trial in 0..60 {
            let mut rng = random::rng_for(151, 43, trial);
            let m = random::random_subspace(5, (trial as usize % 5) + 1, &mut rng);
            let n = random::random_subspace(5, ((trial as usize / 3) % 5) + 1, &mut rng);
            let v = sum_decomposition_verdict(&m, &n, &t).unwrap();
            assert!(v.consistent(), "dimension count vs complement angle");
        }
    }

    #[test]
    fn nullspace_position_examples() {
        let t = tol();
        let b = Matrix::diag(&[1.0, 0.0]);
        let v = nullspace_position_verdicts(&b, &b, &t).unwrap();
        assert!(v.projector_gap_below_one && v.sum_is_domain);
        assert!(v.angle_below_one && v.null_projection_matches);

        // orthogonal nullspace lines: the gap is exactly 1
        let c = Matrix::diag(&[0.0, 1.0]);
        let v = nullspace_position_verdicts(&b, &c, &t).unwrap();
        assert!(!v.projector_gap_below_one);
        assert!(!v.sum_is_domain);

        // small nullspace rotations keep every verdict true
        for trial in 0..25 {
            let mut rng = random::rng_for(157, 44, trial);
            let b = random::random_operator(4, 4, 2, 0.3, 2.0, &mut rng);
            let rot = random::random_near_identity(4, 0.05, &mut rng);
            let c = b.matmul(&rot).unwrap();
            let v = nullspace_position_verdicts(&b, &c, &t).unwrap();
            assert!(v.projector_gap_below_one && v.sum_is_domain);
            assert!(v.angle_below_one && v.null_projection_matches);
        }
    }

    #[test]
    fn position_verdicts_agree_pairwise_on_same_nullity_pairs() {
        let t = tol();
        for trial in 0..60 {
            let mut rng = random::rng_for(163, 45, trial);
            let rank = 1 + (trial as usize % 3);
            let b = random::random_operator(4, 4, rank, 0.2, 2.0, &mut rng);
            let c = random::random_operator(4, 4, rank, 0.2, 2.0, &mut rng);
            let v = nullspace_position_verdicts(&b, &c, &t).unwrap();
            assert_eq!(v.projector_gap_below_one, v.sum_is_domain);
            assert_eq!(v.angle_below_one, v.sum_is_domain);
            assert_eq!(v.null_projection_matches, v.sum_is_domain);
        }
    }

    #[test]
    fn position_verdicts_orthocomplement_duality_any_ranks() {
        // the sum reading and the angle reading are orthocomplement-dual and
        // agree regardless of nullities; the projector-gap reading
        // additionally forces equal nullities
        let t = tol();
        for trial in 0..60 {
            let mut rng = random::rng_for(167, 46, trial);
            let rank_b = 1 + (trial as usize % 3);
            let rank_c = 1 + ((trial as usize / 2) % 3);
            let b = random::random_operator(4, 4, rank_b, 0.2, 2.0, &mut rng);
            let c = random::random_operator(4, 4, rank_c, 0.2, 2.0, &mut rng);
            let v = nullspace_position_verdicts(&b, &c, &t).unwrap();
            assert_eq!(v.sum_is_domain, v.angle_below_one);
            assert_eq!(v.sum_is_domain, v.null_projection_matches);
            if v.projector_gap_below_one {
                assert!(v.sum_is_domain);
            }
        }
    }

    #[test]
    fn reported_identity_has_both_sides() {
        let t = tol();
        let e1 = line(2, &[1.0, 0.0]);
        let (c, gap) = c_vs_projector_gap(&e1, &e1, &t).unwrap();
        // the literal identity fails here: c = 0 but the gap is 1
        assert!(c < 1e-12);
        assert!((gap - 1.0).abs() < 1e-12);
    }
}
