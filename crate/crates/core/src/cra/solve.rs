//! Dense Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

/// Pivots smaller than this in magnitude are treated as zero.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Solves `a · x = b` for square `a` (row-major, `n × n`).
pub fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    assert_eq!(a.len(), n * n, "matrix must be n × n");
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r * n + col]))
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .expect("non-empty pivot range");
        if !(pivot.abs() >= SINGULARITY_THRESHOLD) {
            return Err(Error::SingularSystem { pivot, column: col });
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            b.swap(col, pivot_row);
        }
        for r in (col + 1)..n {
            let factor = a[r * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[r * n + col] = 0.0;
            for j in (col + 1)..n {
                a[r * n + j] -= factor * a[col * n + j];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = ((r + 1)..n).map(|j| a[r * n + j] * x[j]).sum();
        x[r] = (b[r] - s) / a[r * n + r];
    }
    Ok(x)
}

/// `‖a · x − b‖_∞`.
pub fn residual_inf(a: &[f64], x: &[f64], b: &[f64]) -> f64 {
    let n = b.len();
    (0..n)
        .map(|r| {
            let ax: f64 = (0..n).map(|j| a[r * n + j] * x[j]).sum();
            (ax - b[r]).abs()
        })
        .fold(0.0, f64::max)
}
