//! Seeded random ensembles of operators and subspaces.
//!
//! Operators are synthesized as `U * diag(sigma) * V^*` with Haar-ish random
//! unitaries, so every generated instance has known rank, known reduced
//! minimum modulus, and known signature. Suites derive per-trial sub-seeds
//! from `(seed, stream, index)` and stay bit-reproducible.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{Matrix, C64};
use crate::subspace::Subspace;
use crate::tol::ToleranceConfig;

pub type SeededRng = ChaCha8Rng;

/// Deterministic sub-seed for trial `index` of stream `stream`
/// (splitmix64-style mixing).
pub fn sub_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, stream: u64, index: u64) -> SeededRng {
    SeededRng::seed_from_u64(sub_seed(seed, stream, index))
}

fn gaussian(rng: &mut SeededRng) -> f64 {
    // Box-Muller
    loop {
        let u: f64 = rng.random();
        if u > 1e-300 {
            let v: f64 = rng.random();
            return (-2.0 * u.ln()).sqrt() * (TAU * v).cos();
        }
    }
}

pub fn complex_gaussian(rng: &mut SeededRng) -> C64 {
    C64::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-ish random unitary: QR of a Gaussian matrix by modified Gram-Schmidt
/// (two passes), with the diagonal phases folded in.
pub fn random_unitary(n: usize, rng: &mut SeededRng) -> Matrix {
    let g = random_matrix(n, n, rng);
    let mut q = Matrix::zeros(n, n);
    for j in 0..n {
        let mut col: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = C64::new(0.0, 0.0);
                for i in 0..n {
                    proj += q[(i, k)].conj() * col[i];
                }
                for i in 0..n {
                    col[i] -= proj * q[(i, k)];
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // Gaussian columns are independent almost surely; still, fall back to
        // a basis vector if a column collapses.
        if norm < 1e-12 {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            col = e;
        } else {
            // phase factor taken from the projection on the original column
            let mut r = C64::new(0.0, 0.0);
            for i in 0..n {
                r += col[i].conj() * g[(i, j)];
            }
            let diag = if r.norm() > 0.0 {
                r / r.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            for c in col.iter_mut() {
                *c = *c / norm * diag;
            }
        }
        for i in 0..n {
            q[(i, j)] = col[i];
        }
    }
    q
}

/// Operator with the exact prescribed singular values (zeros allowed).
pub fn with_singular_values(
    rows: usize,
    cols: usize,
    sigmas: &[f64],
    rng: &mut SeededRng,
) -> Matrix {
    let u = random_unitary(rows, rng);
    let v = random_unitary(cols, rng);
    let s = Matrix::rect_diag(rows, cols, sigmas);
    &(&u * &s) * &v.adjoint()
}

/// Random operator of exact rank `rank` with nonzero singular values drawn
/// uniformly from `[smin, smax]`.
pub fn random_operator(
    rows: usize,
    cols: usize,
    rank: usize,
    smin: f64,
    smax: f64,
    rng: &mut SeededRng,
) -> Matrix {
    debug_assert!(rank <= rows.min(cols));
    let mut sigmas: Vec<f64> = (0..rank).map(|_| rng.random_range(smin..=smax)).collect();
    sigmas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    with_singular_values(rows, cols, &sigmas, rng)
}

/// Random invertible operator with singular values in `[0.5, 2]`.
pub fn random_invertible(n: usize, rng: &mut SeededRng) -> Matrix {
    random_operator(n, n, n, 0.5, 2.0, rng)
}

/// `I + eps * X` with `||X|| <= 1`; invertible whenever `eps < 1`.
pub fn random_near_identity(n: usize, eps: f64, rng: &mut SeededRng) -> Matrix {
    let x = random_matrix(n, n, rng);
    let norm = crate::svd::op_norm(&x).expect("svd of a random matrix");
    let scaled = if norm > 0.0 {
        x.scale_re(eps / norm)
    } else {
        x
    };
    &Matrix::identity(n) + &scaled
}

pub fn random_unit_vector(n: usize, rng: &mut SeededRng) -> Matrix {
    loop {
        let v = Matrix::from_fn(n, 1, |_, _| complex_gaussian(rng));
        let norm = v.vec_norm();
        if norm > 1e-6 {
            return v.scale_re(1.0 / norm);
        }
    }
}

pub fn random_subspace(ambient: usize, dim: usize, rng: &mut SeededRng) -> Subspace {
    debug_assert!(dim <= ambient);
    let u = random_unitary(ambient, rng);
    Subspace::from_orthonormal(u.columns(0, dim), &ToleranceConfig::default())
        .expect("unitary columns are orthonormal")
}

/// Positive semidefinite operator with range exactly the given subspace and
/// eigenvalues on it drawn from `[smin, smax]`.
pub fn random_psd_with_range(
    range: &Subspace,
    smin: f64,
    smax: f64,
    rng: &mut SeededRng,
) -> Matrix {
    let d = range.dim();
    let n = range.ambient_dim();
    if d == 0 {
        return Matrix::zeros(n, n);
    }
    let w = random_unitary(d, rng);
    let eigs: Vec<f64> = (0..d).map(|_| rng.random_range(smin..=smax)).collect();
    let core = &(&w * &Matrix::diag(&eigs)) * &w.adjoint();
    &(range.basis() * &core) * &range.basis().adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_seed_is_deterministic_and_spread() {
        assert_eq!(sub_seed(7, 1, 2), sub_seed(7, 1, 2));
        assert_ne!(sub_seed(7, 1, 2), sub_seed(7, 1, 3));
        assert_ne!(sub_seed(7, 1, 2), sub_seed(7, 2, 2));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = rng_for(42, 0, 0);
        for n in 1..=6 {
            let u = random_unitary(n, &mut rng);
            let gram = &u.adjoint() * &u;
            assert!(gram.max_abs_diff(&Matrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn prescribed_singular_values_are_exact() {
        let mut rng = rng_for(1, 5, 0);
        let a = with_singular_values(4, 3, &[2.0, 1.0, 0.25], &mut rng);
        let f = crate::svd::svd(&a).unwrap();
        for (s, e) in f.singular_values.iter().zip([2.0, 1.0, 0.25]) {
            assert!((s - e).abs() < 1e-12);
        }
    }

    #[test]
    fn psd_with_range_matches_subspace() {
        let mut rng = rng_for(9, 3, 1);
        let s = random_subspace(5, 2, &mut rng);
        let a = random_psd_with_range(&s, 0.5, 2.0, &mut rng);
        let r = crate::subspace::range_basis(&a, &ToleranceConfig::default()).unwrap();
        assert_eq!(r.dim(), 2);
        assert!(r.gap(&s).unwrap() < 1e-10);
        // Hermitian
        assert!(a.max_abs_diff(&a.adjoint()) < 1e-12);
    }
}
