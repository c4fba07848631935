use crate::error::{Error, Result};
use crate::types::{CsrMatrix, Permutation};

/// Output of the MPERM fill loop; rows may be unsorted.
#[derive(Debug, Clone)]
pub struct MpermFill {
    pub row_ptr: Vec<usize>,
    pub col_ind: Vec<usize>,
    pub values: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl MpermFill {
    /// Sorts every row by column and returns the CSR result.
    pub fn into_sorted(self) -> (CsrMatrix, Vec<f64>) {
        let n = self.row_ptr.len() - 1;
        let mut col_ind = self.col_ind;
        let mut values = self.values;
        let mut pairs = Vec::new();
        for r in 0..n {
            let range = self.row_ptr[r]..self.row_ptr[r + 1];
            if col_ind[range.clone()].windows(2).all(|w| w[0] < w[1]) {
                continue;
            }
            pairs.clear();
            pairs.extend(
                col_ind[range.clone()]
                    .iter()
                    .copied()
                    .zip(values[range.clone()].iter().copied()),
            );
            pairs.sort_unstable_by_key(|&(c, _)| c);
            for (k, (c, v)) in range.zip(pairs.iter().copied()) {
                col_ind[k] = c;
                values[k] = v;
            }
        }
        (
            CsrMatrix::from_parts_unchecked(n, n, self.row_ptr, col_ind, values),
            self.rhs,
        )
    }
}

/// Symmetric permutation `B = P A Pᵀ` with `B[p(i)][p(j)] = A[i][j]` and
/// `b'[p(i)] = b[i]`.
pub fn mperm(m: &CsrMatrix, p: &Permutation, b: &[f64]) -> Result<(CsrMatrix, Vec<f64>)> {
    m.require_square("symmetric permutation")?;
    if p.len() != m.n_rows() {
        return Err(Error::Precondition(format!(
            "permutation of length {} for a {}x{} matrix",
            p.len(),
            m.n_rows(),
            m.n_cols()
        )));
    }
    if b.len() != m.n_rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a {}x{} matrix",
            b.len(),
            m.n_rows(),
            m.n_cols()
        )));
    }
    Ok(mperm_fill(m, p, b).into_sorted())
}

/// Timed part of [`mperm`]: new row sizes read through the inverse map, a
/// prefix sum of offsets, then a copy of each old row with its columns
/// relabeled by the forward map.
pub fn mperm_fill(m: &CsrMatrix, p: &Permutation, b: &[f64]) -> MpermFill {
    let n = m.n_rows();
    let ia = m.row_ptr();
    let ja = m.col_ind();
    let a = m.values();
    let iord = p.inverse();
    let riord = p.forward();

    let mut iao = vec![0usize; n + 1];
    for ii in 0..n {
        let old = iord[ii];
        iao[ii + 1] = ia[old + 1] - ia[old];
    }
    for ii in 0..n {
        iao[ii + 1] += iao[ii];
    }

    let mut jao = vec![0usize; ja.len()];
    let mut ao = vec![0.0f64; a.len()];
    for ii in 0..n {
        let k0 = ia[iord[ii]].wrapping_sub(iao[ii]);
        for k in iao[ii]..iao[ii + 1] {
            let src = k0.wrapping_add(k);
            jao[k] = riord[ja[src]];
            ao[k] = a[src];
        }
    }

    let mut rhs = vec![0.0f64; n];
    for i in 0..n {
        rhs[riord[i]] = b[i];
    }

    MpermFill {
        row_ptr: iao,
        col_ind: jao,
        values: ao,
        rhs,
    }
}
