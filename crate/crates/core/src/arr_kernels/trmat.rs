use crate::types::CsrMatrix;

/// Structural transpose of a CSR matrix.
///
/// Phase one counts entries per column, phase two turns counts into start
/// offsets, phase three scatters every entry to `ptr[col]++`, after which
/// the offsets are shifted one position right to become the row pointer.
/// Scanning the source row-major keeps every output row sorted.
pub fn trmat(m: &CsrMatrix) -> CsrMatrix {
    let n_rows = m.n_rows();
    let n_cols = m.n_cols();
    let ia = m.row_ptr();
    let ja = m.col_ind();
    let a = m.values();

    let mut ptr = vec![0usize; n_cols + 1];
    for &c in ja {
        ptr[c] += 1;
    }

    let mut sum = 0;
    for p in ptr.iter_mut() {
        let count = *p;
        *p = sum;
        sum += count;
    }

    let mut col_ind = vec![0usize; ja.len()];
    let mut values = vec![0.0f64; a.len()];
    for r in 0..n_rows {
        for k in ia[r]..ia[r + 1] {
            let c = ja[k];
            let dest = ptr[c];
            col_ind[dest] = r;
            values[dest] = a[k];
            ptr[c] += 1;
        }
    }

    for c in (1..=n_cols).rev() {
        ptr[c] = ptr[c - 1];
    }
    ptr[0] = 0;

    CsrMatrix::from_parts_unchecked(n_cols, n_rows, ptr, col_ind, values)
}
