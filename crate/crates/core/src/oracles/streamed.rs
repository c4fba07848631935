//! Row-at-a-time references for matrices too large to densify.

use crate::error::{Error, Result};
use crate::types::CsrMatrix;

/// Row `r` of `m` expanded to a dense vector of length `n_cols`.
pub fn dense_row(m: &CsrMatrix, r: usize) -> Vec<f64> {
    let mut row = vec![0.0; m.n_cols()];
    let (cols, vals) = m.row(r);
    for (&c, &v) in cols.iter().zip(vals) {
        row[c] = v;
    }
    row
}

/// `A x`, one densified row at a time.
pub fn streamed_matvec(m: &CsrMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != m.n_cols() {
        return Err(Error::Dimension(format!(
            "vector of length {} for {} columns",
            x.len(),
            m.n_cols()
        )));
    }
    Ok((0..m.n_rows())
        .map(|r| dense_row(m, r).iter().zip(x).map(|(a, b)| a * b).sum())
        .collect())
}

/// `A B` with `B` row-major with `k` columns.
pub fn streamed_matmat(m: &CsrMatrix, b: &[f64], k: usize) -> Result<Vec<f64>> {
    if b.len() != m.n_cols() * k {
        return Err(Error::Dimension("dense operand shape".into()));
    }
    let mut out = vec![0.0; m.n_rows() * k];
    for r in 0..m.n_rows() {
        let row = dense_row(m, r);
        for c in 0..k {
            out[r * k + c] = (0..m.n_cols()).map(|t| row[t] * b[t * k + c]).sum();
        }
    }
    Ok(out)
}

/// One Jacobi update from `x`.
pub fn streamed_jacobi_sweep(m: &CsrMatrix, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let n = m.n_rows();
    if b.len() != n || x.len() != n || m.n_cols() != n {
        return Err(Error::Dimension("Jacobi operand shapes".into()));
    }
    let mut next = vec![0.0; n];
    for i in 0..n {
        let row = dense_row(m, i);
        if row[i] == 0.0 {
            return Err(Error::SingularDiagonal { row: i });
        }
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| row[j] * x[j]).sum();
        next[i] = (b[i] - off) / row[i];
    }
    Ok(next)
}

/// `‖b - Ax‖∞ / (‖A‖∞ ‖x‖∞ + ‖b‖∞)`.
pub fn backward_error(m: &CsrMatrix, x: &[f64], b: &[f64]) -> Result<f64> {
    let ax = streamed_matvec(m, x)?;
    let r = ax
        .iter()
        .zip(b)
        .map(|(a, b)| (b - a).abs())
        .fold(0.0, f64::max);
    let a_norm = (0..m.n_rows())
        .map(|i| m.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let x_norm = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let b_norm = b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let denom = a_norm * x_norm + b_norm;
    Ok(if denom == 0.0 { r } else { r / denom })
}

/// `‖b - Ax‖₂ / ‖b‖₂` (absolute when `b = 0`).
pub fn relative_residual(m: &CsrMatrix, x: &[f64], b: &[f64]) -> Result<f64> {
    let ax = streamed_matvec(m, x)?;
    let r: f64 = ax
        .iter()
        .zip(b)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    let bn: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(if bn == 0.0 { r } else { r / bn })
}

/// `‖got - want‖∞ / ‖want‖∞`; 0 when both vanish.
pub fn relative_error(got: &[f64], want: &[f64]) -> f64 {
    if got.len() != want.len() {
        return f64::INFINITY;
    }
    let diff = got
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(
            0.0,
            |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) },
        );
    let scale = want.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if diff == 0.0 {
        0.0
    } else if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Stored entries sorted by `(row, col)` with value bits for exact
/// comparison.
pub fn sorted_triplets(m: &CsrMatrix) -> Vec<(usize, usize, u64)> {
    let mut t: Vec<_> = m.triplets().map(|(r, c, v)| (r, c, v.to_bits())).collect();
    t.sort_unstable();
    t
}

/// Entries of `mᵀ`, sorted.
pub fn transposed_triplets(m: &CsrMatrix) -> Vec<(usize, usize, u64)> {
    let mut t: Vec<_> = m.triplets().map(|(r, c, v)| (c, r, v.to_bits())).collect();
    t.sort_unstable();
    t
}

/// Entries of `P m Pᵀ` for a forward map, sorted.
pub fn permuted_triplets(m: &CsrMatrix, forward: &[usize]) -> Vec<(usize, usize, u64)> {
    let mut t: Vec<_> = m
        .triplets()
        .map(|(r, c, v)| (forward[r], forward[c], v.to_bits()))
        .collect();
    t.sort_unstable();
    t
}
