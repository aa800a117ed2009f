//! Numerical toolkit for the metric and orbit geometry of closed-range
//! operators on finite-dimensional complex Hilbert spaces.
//!
//! The crate provides Moore-Penrose calculus (pseudoinverse, projectors,
//! reduced minimum modulus, polar decomposition), angles between subspaces,
//! the range/nullspace perturbation metrics `d_R` and `d_N` with their
//! inequality certificates, the orbit structure of the two-sided
//! invertible-group action with constructive intertwiners and local cross
//! sections, the fixed-range slice with its positive-times-isometry
//! factorization, and a convergence laboratory that evaluates the full
//! battery of pseudoinverse-convergence conditions on generated perturbation
//! sequences.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so concurrent use needs no synchronization.

pub mod angles;
pub mod convergence;
pub mod error;
pub mod fixed_range;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod operator;
pub mod orbit;
pub mod random;
pub mod report;
pub mod subspace;
pub mod suites;
pub mod svd;
pub mod tol;

pub use error::{Error, Result};
pub use matrix::{Matrix, C64};
pub use subspace::Subspace;
pub use svd::{numerical_rank, svd, SvdFactorization};
pub use tol::ToleranceConfig;
