//! Exact Gaussian elimination over the active field.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("singular system: no pivot in column {0}")]
    Singular(usize),
    #[error("system shape mismatch: {rows} rows, {cols} columns, {rhs} right-hand sides")]
    Shape { rows: usize, cols: usize, rhs: usize },
}

/// Solves the square system `matrix * x = rhs` exactly.
///
/// The pivot in each column is the first nonzero entry at or below the diagonal.
pub fn solve(mut matrix: Vec<Vec<Scalar>>, mut rhs: Vec<Scalar>) -> Result<Vec<Scalar>, LinalgError> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(LinalgError::Shape {
            rows: n,
            cols: matrix.first().map_or(0, Vec::len),
            rhs: rhs.len(),
        });
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !matrix[r][col].is_zero()).ok_or(LinalgError::Singular(col))?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = matrix[col][col].inv().expect("pivot is nonzero");
        for v in matrix[col].iter_mut().skip(col) {
            *v = &*v * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        let pivot_row = matrix[col].clone();
        for r in 0..n {
            if r == col || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            for (v, p) in matrix[r].iter_mut().zip(&pivot_row).skip(col) {
                *v = &*v - &(&factor * p);
            }
            let delta = &factor * &rhs[col];
            rhs[r] = &rhs[r] - &delta;
        }
    }
    Ok(rhs)
}
