//! Matrix file format:
//! `{"rows": m, "cols": n, "entries": [[re, im], ...]}` row-major.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

pub fn matrix_to_json(m: &Matrix) -> String {
    let entries = m.entries().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string(&MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries,
    })
    .expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(s: &str) -> Result<Matrix> {
    let parsed: MatrixJson =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix json: {e}")))?;
    if parsed.rows == 0 || parsed.cols == 0 {
        return Err(Error::Parse("rows and cols must be positive".into()));
    }
    if parsed.entries.len() != parsed.rows * parsed.cols {
        return Err(Error::Parse(format!(
            "expected {} entries for a {}x{} matrix, got {}",
            parsed.rows * parsed.cols,
            parsed.rows,
            parsed.cols,
            parsed.entries.len()
        )));
    }
    let data: Vec<Complex64> = parsed
        .entries
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    Matrix::new(parsed.rows, parsed.cols, data)
        .map_err(|e| Error::Parse(format!("invalid matrix: {e}")))
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)?;
    matrix_from_json(&text)
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    std::fs::write(path, matrix_to_json(m))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = Matrix::from_fn(2, 3, |i, j| Complex64::new(i as f64, -(j as f64)));
        let text = matrix_to_json(&m);
        let back = matrix_from_json(&text).unwrap();
        assert_eq!(back.rows(), 2);
        assert_eq!(back.cols(), 3);
        assert!(back.max_abs_diff(&m) == 0.0);
    }

    #[test]
    fn rejects_mismatched_lengths_and_degenerate_shapes() {
        let bad = r#"{"rows": 2, "cols": 2, "entries": [[1.0, 0.0]]}"#;
        assert!(matches!(matrix_from_json(bad), Err(Error::Parse(_))));
        let degenerate = r#"{"rows": 0, "cols": 2, "entries": []}"#;
        assert!(matches!(matrix_from_json(degenerate), Err(Error::Parse(_))));
        let garbage = "not json";
        assert!(matches!(matrix_from_json(garbage), Err(Error::Parse(_))));
    }
}
