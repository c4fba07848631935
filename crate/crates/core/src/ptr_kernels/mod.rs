//! Pointer-traversal kernels over linked sparse storage.
//!
//! Every kernel walks heap-linked element chains, so each step of an inner
//! loop depends on the pointer loaded by the previous step. The dense
//! operands are indexed by the `col` member of the current node. Summation
//! always follows chain order.

mod lu;

pub use lu::lu_factor_for_dsolve;

use crate::error::{Error, Result};
use crate::types::{DenseMatrix, LinkedRowMatrix, OrthoLinkedMatrix};

/// Fixed-sweep Jacobi settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub iterations: usize,
    /// Record `||b - Ax|| / ||b||` after every sweep.
    pub record_residual: bool,
}

impl Default for JacobiParams {
    fn default() -> Self {
        Self {
            iterations: 100,
            record_residual: false,
        }
    }
}

/// Stopping rule for [`pcg`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgParams {
    pub max_iterations: usize,
    /// Relative residual `||r|| / ||b||` at which iteration stops.
    pub tolerance: f64,
}

impl Default for PcgParams {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            tolerance: 1e-10,
        }
    }
}

/// Result of a Jacobi run.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiResult {
    pub x: Vec<f64>,
    /// Relative residual after each sweep; empty unless requested.
    pub residuals: Vec<f64>,
}

/// Result of a PCG run.
#[derive(Debug, Clone, PartialEq)]
pub struct PcgResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `||b - Ax|| / ||b||` recomputed from the returned `x`.
    pub relative_residual: f64,
}

/// Sparse matrix times dense vector, with the row chain as the innermost
/// loop.
pub fn spmatvec(left: &LinkedRowMatrix, right: &[f64]) -> Result<Vec<f64>> {
    if right.len() != left.size() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a {}x{} matrix",
            right.len(),
            left.size(),
            left.size()
        )));
    }
    let mut result = vec![0.0; left.size()];
    spmatvec_into(left, right, &mut result);
    Ok(result)
}

/// [`spmatvec`] into a caller-owned buffer; lengths must already agree.
pub fn spmatvec_into(left: &LinkedRowMatrix, right: &[f64], result: &mut [f64]) {
    for (row, out) in result.iter_mut().enumerate() {
        let mut acc = 0.0;
        let mut element = left.first_in_row(row);
        while let Some(e) = element {
            acc += e.value * right[e.col];
            element = e.next_in_row.as_deref();
        }
        *out = acc;
    }
}

/// Sparse matrix times a C-style dense matrix.
///
/// The chain walk is the outer loop; for each element the inner loop
/// sweeps the dense columns of `right[element.col]`.
pub fn spmatmat(left: &LinkedRowMatrix, right: &DenseMatrix) -> Result<DenseMatrix> {
    if right.n_rows() != left.size() {
        return Err(Error::Dimension(format!(
            "dense operand has {} rows, sparse matrix is {}x{}",
            right.n_rows(),
            left.size(),
            left.size()
        )));
    }
    let mut result = DenseMatrix::zeros(left.size(), right.n_cols());
    spmatmat_into(left, right, &mut result);
    Ok(result)
}

/// [`spmatmat`] into a caller-owned buffer, which is cleared first.
pub fn spmatmat_into(left: &LinkedRowMatrix, right: &DenseMatrix, result: &mut DenseMatrix) {
    let cols = right.n_cols();
    for row in 0..left.size() {
        let out = result.row_mut(row);
        out.fill(0.0);
        let mut element = left.first_in_row(row);
        while let Some(e) = element {
            let src = right.row(e.col);
            for col in 0..cols {
                out[col] += e.value * src[col];
            }
            element = e.next_in_row.as_deref();
        }
    }
}

/// Jacobi iteration for `Ax = b` with a fixed number of sweeps.
///
/// Each row chain is split at the diagonal: the first loop stops as soon
/// as it reaches a column not below the row index, the second finishes the
/// chain after the diagonal. Old and new iterates are kept in separate
/// buffers.
pub fn jacit(
    a: &LinkedRowMatrix,
    b: &[f64],
    x0: &[f64],
    params: &JacobiParams,
) -> Result<JacobiResult> {
    let n = a.size();
    if b.len() != n || x0.len() != n {
        return Err(Error::Dimension(format!(
            "right-hand side {} / start {} for a {n}x{n} matrix",
            b.len(),
            x0.len()
        )));
    }
    if params.iterations == 0 {
        return Err(Error::Parameter("Jacobi needs at least one sweep".into()));
    }
    let mut x_1 = x0.to_vec();
    let mut x_2 = vec![0.0; n];
    let mut residuals = Vec::new();
    let b_norm = norm2(b);
    for _ in 0..params.iterations {
        jacobi_sweep(a, b, &x_1, &mut x_2)?;
        std::mem::swap(&mut x_1, &mut x_2);
        if params.record_residual {
            let ax = spmatvec(a, &x_1)?;
            let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
            residuals.push(if b_norm > 0.0 {
                norm2(&r) / b_norm
            } else {
                norm2(&r)
            });
        }
    }
    Ok(JacobiResult { x: x_1, residuals })
}

/// One simultaneous-update sweep: `x_2 = D^-1 (b - (A - D) x_1)`.
pub fn jacobi_sweep(a: &LinkedRowMatrix, b: &[f64], x_1: &[f64], x_2: &mut [f64]) -> Result<()> {
    for i in 0..a.size() {
        let mut acc = b[i];
        let mut element = a.first_in_row(i);
        while let Some(e) = element.filter(|e| e.col < i) {
            acc -= e.value * x_1[e.col];
            element = e.next_in_row.as_deref();
        }
        let diag = match element {
            Some(e) if e.col == i && e.value != 0.0 => e,
            _ => return Err(Error::SingularDiagonal { row: i }),
        };
        element = diag.next_in_row.as_deref();
        while let Some(e) = element {
            acc -= e.value * x_1[e.col];
            element = e.next_in_row.as_deref();
        }
        x_2[i] = acc / diag.value;
    }
    Ok(())
}

/// Solves `Ax = rhs` with an LU factorization held in orthogonal storage.
///
/// `lu` carries the strictly lower part of a unit lower factor and the
/// upper factor (diagonal included), with the row pivoting recorded in its
/// internal-to-external row map. The solve runs four phases: gather the
/// right-hand side into internal order, forward substitution down the
/// column chains, backward substitution along the row chains, and scatter
/// into external order.
pub fn dsolve(lu: &OrthoLinkedMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = lu.size();
    if rhs.len() != n {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a {n}x{n} factorization",
            rhs.len()
        )));
    }
    let mut intermediate = vec![0.0; n];
    let mut solution = vec![0.0; n];
    dsolve_into(lu, rhs, &mut intermediate, &mut solution)?;
    Ok(solution)
}

/// [`dsolve`] with caller-owned work and output buffers.
pub fn dsolve_into(
    lu: &OrthoLinkedMatrix,
    rhs: &[f64],
    intermediate: &mut [f64],
    solution: &mut [f64],
) -> Result<()> {
    let n = lu.size();
    let row_map = lu.int_to_ext_row_map();
    for i in (0..n).rev() {
        intermediate[i] = rhs[row_map[i]];
    }

    // Lc = Pb, column by column below the diagonal.
    for j in 0..n {
        let pivot = intermediate[j];
        let mut element = lu.diag(j).next_in_col();
        while let Some(e) = element {
            intermediate[e.row] -= e.value * pivot;
            element = e.next_in_col();
        }
    }

    // Ux = c, row by row right of the diagonal.
    for i in (0..n).rev() {
        let diag = lu.diag(i);
        if diag.value == 0.0 {
            return Err(Error::Singular { col: i });
        }
        let mut acc = intermediate[i];
        let mut element = diag.next_in_row();
        while let Some(e) = element {
            acc -= e.value * intermediate[e.col];
            element = e.next_in_row();
        }
        intermediate[i] = acc / diag.value;
    }

    let col_map = lu.int_to_ext_col_map();
    for i in (0..n).rev() {
        solution[col_map[i]] = intermediate[i];
    }
    Ok(())
}

/// Conjugate gradient with a diagonal (Jacobi) preconditioner, from x = 0.
///
/// Each iteration performs one [`spmatvec`] followed by dot products and
/// vector updates on dense arrays. Convergence is declared when the
/// recurrence residual drops to the tolerance and the recomputed residual
/// confirms it; otherwise the recurrence residual is replaced by the true
/// one and iteration continues.
pub fn pcg(a: &LinkedRowMatrix, b: &[f64], params: &PcgParams) -> Result<PcgResult> {
    let n = a.size();
    if b.len() != n {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a {n}x{n} matrix",
            b.len()
        )));
    }
    if params.max_iterations == 0 || params.tolerance.is_nan() || params.tolerance <= 0.0 {
        return Err(Error::Parameter(
            "PCG needs max_iterations >= 1 and a positive tolerance".into(),
        ));
    }

    let mut inv_diag = vec![0.0; n];
    for (i, d) in inv_diag.iter_mut().enumerate() {
        let diag = a
            .row(i)
            .find(|e| e.col == i)
            .map(|e| e.value)
            .filter(|&v| v != 0.0)
            .ok_or(Error::Preconditioner { row: i })?;
        *d = 1.0 / diag;
    }

    let b_norm = norm2(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(PcgResult {
            x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);

    for iteration in 1..=params.max_iterations {
        spmatvec_into(a, &p, &mut q);
        let pq = dot(&p, &q);
        if pq == 0.0 || !pq.is_finite() {
            return Err(Error::Divergence { iteration });
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let r_norm = norm2(&r);
        if !r_norm.is_finite() {
            return Err(Error::Divergence { iteration });
        }
        if r_norm / b_norm <= params.tolerance {
            let true_residual = residual(a, b, &x, &mut q);
            let rel = norm2(&true_residual) / b_norm;
            if rel <= params.tolerance {
                return Ok(PcgResult {
                    x,
                    iterations: iteration,
                    relative_residual: rel,
                });
            }
            r = true_residual;
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        if !rz_next.is_finite() {
            return Err(Error::Divergence { iteration });
        }
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    let r = residual(a, b, &x, &mut q);
    let rel = norm2(&r) / b_norm;
    if !rel.is_finite() {
        return Err(Error::Divergence {
            iteration: params.max_iterations,
        });
    }
    Ok(PcgResult {
        x,
        iterations: params.max_iterations,
        relative_residual: rel,
    })
}

fn residual(a: &LinkedRowMatrix, b: &[f64], x: &[f64], scratch: &mut [f64]) -> Vec<f64> {
    spmatvec_into(a, x, scratch);
    b.iter()
        .zip(scratch.iter())
        .map(|(bi, ai)| bi - ai)
        .collect()
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{CsrMatrix, LinkedRowMatrix};

    fn linked(triplets: &[(usize, usize, f64)], n: usize) -> LinkedRowMatrix {
        LinkedRowMatrix::from_csr(&CsrMatrix::from_triplets(n, n, triplets).unwrap()).unwrap()
    }

    #[test]
    fn spmatvec_identity() {
        let a = LinkedRowMatrix::from_csr(&CsrMatrix::identity(3)).unwrap();
        assert_eq!(spmatvec(&a, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn spmatvec_empty_row_is_zero() {
        let a = linked(&[(0, 0, 2.0), (2, 1, 3.0)], 3);
        let y = spmatvec(&a, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(y, vec![2.0, 0.0, 3.0]);
        assert!(y[1].to_bits() == 0.0f64.to_bits());
    }

    #[test]
    fn spmatvec_dimension_error() {
        let a = LinkedRowMatrix::from_csr(&CsrMatrix::identity(3)).unwrap();
        assert!(matches!(spmatvec(&a, &[1.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn spmatmat_identity_and_zero() {
        let a = LinkedRowMatrix::from_csr(&CsrMatrix::identity(2)).unwrap();
        let m = DenseMatrix::from_row_major(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(spmatmat(&a, &m).unwrap(), m);
        let z = LinkedRowMatrix::from_csr(&CsrMatrix::empty(2, 2)).unwrap();
        assert!(spmatmat(&z, &m)
            .unwrap()
            .to_row_major()
            .iter()
            .all(|&v| v == 0.0));
        let wrong = DenseMatrix::zeros(3, 1);
        assert!(spmatmat(&a, &wrong).is_err());
    }

    #[test]
    fn jacit_identity_one_sweep() {
        let a = LinkedRowMatrix::from_csr(&CsrMatrix::identity(3)).unwrap();
        let params = JacobiParams {
            iterations: 1,
            record_residual: false,
        };
        let r = jacit(&a, &[4.0, 5.0, 6.0], &[9.0, 9.0, 9.0], &params).unwrap();
        assert_eq!(r.x, vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn jacit_missing_or_zero_diagonal() {
        let a = linked(&[(0, 0, 1.0), (1, 0, 1.0)], 2);
        let err = jacit(&a, &[1.0, 1.0], &[0.0, 0.0], &JacobiParams::default());
        assert!(matches!(err, Err(Error::SingularDiagonal { row: 1 })));
        let a = linked(&[(0, 0, 0.0), (1, 1, 1.0)], 2);
        let err = jacit(&a, &[1.0, 1.0], &[0.0, 0.0], &JacobiParams::default());
        assert!(matches!(err, Err(Error::SingularDiagonal { row: 0 })));
    }

    #[test]
    fn jacit_records_residuals_when_asked() {
        let a = linked(&[(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0)], 2);
        let params = JacobiParams {
            iterations: 30,
            record_residual: true,
        };
        let r = jacit(&a, &[1.0, 2.0], &[0.0, 0.0], &params).unwrap();
        assert_eq!(r.residuals.len(), 30);
        assert!(r.residuals[29] < r.residuals[0]);
        assert!(r.residuals[29] < 1e-12);
    }

    #[test]
    fn dsolve_unit_lower_system() {
        // L = [[1, 0], [2, 1]], U = I.
        let csr = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 2.0), (1, 1, 1.0)]).unwrap();
        let lu = OrthoLinkedMatrix::from_csr(&csr).unwrap();
        assert_eq!(dsolve(&lu, &[1.0, 1.0]).unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn dsolve_zero_pivot_is_singular() {
        let csr = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0)]).unwrap();
        let lu = OrthoLinkedMatrix::from_csr(&csr).unwrap();
        assert!(matches!(
            dsolve(&lu, &[1.0, 1.0]),
            Err(Error::Singular { col: 1 })
        ));
    }

    #[test]
    fn dsolve_applies_gather_and_scatter_maps() {
        // Internal system is the identity; maps swap rows and rotate columns.
        let csr = CsrMatrix::identity(3);
        let lu = OrthoLinkedMatrix::from_csr_with_maps(&csr, vec![1, 0, 2], vec![2, 0, 1]).unwrap();
        let x = dsolve(&lu, &[10.0, 20.0, 30.0]).unwrap();
        // intermediate = [20, 10, 30]; solution[col_map[i]] = intermediate[i]
        assert_eq!(x, vec![10.0, 30.0, 20.0]);
    }

    #[test]
    fn pcg_identity_converges_in_one_step() {
        let a = LinkedRowMatrix::from_csr(&CsrMatrix::identity(4)).unwrap();
        let b = [1.0, -2.0, 3.5, 0.25];
        let params = PcgParams {
            max_iterations: 10,
            tolerance: 1e-12,
        };
        let r = pcg(&a, &b, &params).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.x, b.to_vec());
        assert_eq!(r.relative_residual, 0.0);
    }

    #[test]
    fn pcg_zero_rhs_returns_zero() {
        let a = LinkedRowMatrix::from_csr(&CsrMatrix::identity(2)).unwrap();
        let r = pcg(&a, &[0.0, 0.0], &PcgParams::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.x, vec![0.0, 0.0]);
    }

    #[test]
    fn pcg_errors() {
        let a = linked(&[(0, 0, 1.0), (1, 0, 1.0)], 2);
        assert!(matches!(
            pcg(&a, &[1.0, 1.0], &PcgParams::default()),
            Err(Error::Preconditioner { row: 1 })
        ));
        let a = LinkedRowMatrix::from_csr(&CsrMatrix::identity(2)).unwrap();
        let bad = PcgParams {
            max_iterations: 0,
            tolerance: 1e-8,
        };
        assert!(matches!(
            pcg(&a, &[1.0, 1.0], &bad),
            Err(Error::Parameter(_))
        ));
        let bad = PcgParams {
            max_iterations: 5,
            tolerance: 0.0,
        };
        assert!(pcg(&a, &[1.0, 1.0], &bad).is_err());
    }

    #[test]
    fn pcg_reports_divergence_on_indefinite_breakdown() {
        // p.Ap = 0 on the first step for this indefinite matrix.
        let a = linked(&[(0, 0, 1.0), (1, 1, -1.0)], 2);
        assert!(matches!(
            pcg(&a, &[1.0, 1.0], &PcgParams::default()),
            Err(Error::Divergence { iteration: 1 })
        ));
    }
}
