//! Dense complex matrices, row-major storage.
//!
//! This is the universal operator representation of the crate: operators
//! between finite-dimensional complex Hilbert spaces are matrices acting on
//! column vectors. All values are immutable after construction and every
//! operation is a pure function.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex `rows x cols` matrix.
///
/// Degenerate shapes (`rows == 0` or `cols == 0`) are permitted so that the
/// empty basis of the zero subspace is a first-class value; operator-level
/// entry points reject them where the contract requires a genuine operator.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    /// Checked constructor: the entry count must match the shape and every
    /// entry must be finite.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        let m = Matrix { rows, cols, data };
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from real row slices; imaginary parts are zero.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Matrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Rectangular `rows x cols` matrix with the given values on the main
    /// diagonal.
    pub fn rect_diag(rows: usize, cols: usize, entries: &[f64]) -> Self {
        Matrix::from_fn(rows, cols, |i, j| {
            if i == j && i < entries.len() {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Column vector from complex entries.
    pub fn column(entries: Vec<C64>) -> Self {
        let rows = entries.len();
        Matrix {
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn unit_column(n: usize, i: usize) -> Self {
        let mut m = Matrix::zeros(n, 1);
        m[(i, 0)] = C64::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Matrix {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hermitian part `(A + A*)/2`; the input must be square.
    pub fn hermitian_part(&self) -> Matrix {
        debug_assert!(self.is_square());
        let adj = self.adjoint();
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + adj[(i, j)]) * 0.5
        })
    }

    pub fn column_slice(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    /// Copy of columns `lo..hi`.
    pub fn columns(&self, lo: usize, hi: usize) -> Matrix {
        debug_assert!(lo <= hi && hi <= self.cols);
        Matrix::from_fn(self.rows, hi - lo, |i, j| self[(i, lo + j)])
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hcat of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self[(i, j)]
                } else {
                    other[(i, j - self.cols)]
                }
            },
        ))
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add_mat(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub_mat(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(C64, C64) -> C64) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "elementwise op on {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Rank-one outer product `self * other^*` of two column vectors.
    pub fn outer(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != 1 || other.cols != 1 {
            return Err(Error::DimensionMismatch(
                "outer product expects column vectors".into(),
            ));
        }
        Ok(Matrix::from_fn(self.rows, other.rows, |i, j| {
            self[(i, 0)] * other[(j, 0)].conj()
        }))
    }

    /// Hermitian inner product `<self, other> = other^* self` of two column
    /// vectors.
    pub fn inner(&self, other: &Matrix) -> Result<C64> {
        if self.cols != 1 || other.cols != 1 || self.rows != other.rows {
            return Err(Error::DimensionMismatch(
                "inner product expects equal-length column vectors".into(),
            ));
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            acc += other[(i, 0)].conj() * self[(i, 0)];
        }
        Ok(acc)
    }

    pub fn vec_norm(&self) -> f64 {
        self.frobenius_norm()
    }

    /// Solve `self * X = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "solve expects a square matrix".into(),
            ));
        }
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve of {}x{} against {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_abs = a[(col, col)].norm();
            for r in col + 1..n {
                let v = a[(r, col)].norm();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = r;
                }
            }
            if pivot_abs <= f64::EPSILON * scale * n as f64 {
                return Err(Error::Singular(format!(
                    "pivot {pivot_abs:.3e} at column {col}"
                )));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                }
                for j in 0..b.cols {
                    b.data.swap(col * b.cols + j, pivot_row * b.cols + j);
                }
            }
            let pivot = a[(col, col)];
            for r in col + 1..n {
                let factor = a[(r, col)] / pivot;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = a[(col, j)];
                    a[(r, j)] -= factor * v;
                }
                for j in 0..b.cols {
                    let v = b[(col, j)];
                    b[(r, j)] -= factor * v;
                }
            }
        }
        // back substitution
        let mut x = Matrix::zeros(n, rhs.cols);
        for j in 0..rhs.cols {
            for i in (0..n).rev() {
                let mut acc = b[(i, j)];
                for k in i + 1..n {
                    acc -= a[(i, k)] * x[(k, j)];
                }
                x[(i, j)] = acc / a[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.solve(&Matrix::identity(self.rows))
    }

    /// Largest entrywise deviation from another matrix.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.add_mat(rhs).expect("shape mismatch in +")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.sub_mat(rhs).expect("shape mismatch in -")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("shape mismatch in *")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
