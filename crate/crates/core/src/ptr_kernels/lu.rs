use crate::error::{Error, Result};
use crate::types::{CsrMatrix, OrthoLinkedMatrix};

const UNPIVOTED: usize = usize::MAX;

/// Factorizes `P m = L U` for [`super::dsolve`].
///
/// Left-looking sparse LU with partial pivoting: each column is solved
/// against the already computed part of L over the column's reach, then the
/// largest remaining magnitude becomes the pivot (ties to the lowest
/// original row). L is unit lower with an implicit diagonal; its strictly
/// lower entries and U (diagonal included) share one orthogonal structure.
/// Row `k` of the result is pivot step `k`, so `int_to_ext_row_map[k]` is
/// the original row chosen at that step. The column map is the identity.
pub fn lu_factor_for_dsolve(m: &CsrMatrix) -> Result<OrthoLinkedMatrix> {
    m.require_square("LU factorization")?;
    let n = m.n_rows();

    // Column access to m.
    let mut col_ptr = vec![0usize; n + 1];
    for &c in m.col_ind() {
        col_ptr[c + 1] += 1;
    }
    for c in 0..n {
        col_ptr[c + 1] += col_ptr[c];
    }
    let mut next = col_ptr.clone();
    let mut col_rows = vec![0usize; m.nnz()];
    let mut col_vals = vec![0.0f64; m.nnz()];
    for (r, c, v) in m.triplets() {
        col_rows[next[c]] = r;
        col_vals[next[c]] = v;
        next[c] += 1;
    }

    // L columns by pivot step, rows in original numbering.
    let mut l_cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    let mut u_triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut pinv = vec![UNPIVOTED; n];
    let mut perm = Vec::with_capacity(n);

    let mut x = vec![0.0f64; n];
    let mut mark = vec![usize::MAX; n];
    let mut topo = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();

    for j in 0..n {
        let rows = &col_rows[col_ptr[j]..col_ptr[j + 1]];
        let vals = &col_vals[col_ptr[j]..col_ptr[j + 1]];

        // Reach of the column's pattern in the graph of L, reverse postorder.
        topo.clear();
        for &start in rows {
            if mark[start] == j {
                continue;
            }
            mark[start] = j;
            stack.push((start, 0));
            while let Some(&mut (node, ref mut child)) = stack.last_mut() {
                let k = pinv[node];
                let children: &[(usize, f64)] = if k == UNPIVOTED { &[] } else { &l_cols[k] };
                if let Some(&(next_row, _)) = children.get(*child) {
                    *child += 1;
                    if mark[next_row] != j {
                        mark[next_row] = j;
                        stack.push((next_row, 0));
                    }
                } else {
                    stack.pop();
                    topo.push(node);
                }
            }
        }

        for &r in &topo {
            x[r] = 0.0;
        }
        for (&r, &v) in rows.iter().zip(vals) {
            x[r] = v;
        }

        for &r in topo.iter().rev() {
            let k = pinv[r];
            if k == UNPIVOTED {
                continue;
            }
            let xr = x[r];
            for &(i, l) in &l_cols[k] {
                x[i] -= l * xr;
            }
        }

        let mut pivot_row = UNPIVOTED;
        let mut pivot_abs = -1.0f64;
        for &r in &topo {
            let k = pinv[r];
            if k != UNPIVOTED {
                u_triplets.push((k, j, x[r]));
            } else {
                let a = x[r].abs();
                if a > pivot_abs || (a == pivot_abs && r < pivot_row) {
                    pivot_abs = a;
                    pivot_row = r;
                }
            }
        }
        if pivot_row == UNPIVOTED || pivot_abs <= 0.0 || !pivot_abs.is_finite() {
            return Err(Error::Singular { col: j });
        }
        let pivot = x[pivot_row];
        u_triplets.push((j, j, pivot));
        pinv[pivot_row] = j;
        perm.push(pivot_row);

        let mut l_col = Vec::new();
        for &r in &topo {
            if pinv[r] == UNPIVOTED {
                l_col.push((r, x[r] / pivot));
            }
        }
        l_cols.push(l_col);
    }

    let mut triplets = u_triplets;
    for (k, col) in l_cols.iter().enumerate() {
        triplets.extend(col.iter().map(|&(r, l)| (pinv[r], k, l)));
    }
    let merged = CsrMatrix::from_triplets(n, n, &triplets)?;
    OrthoLinkedMatrix::from_csr_with_maps(&merged, perm, (0..n).collect())
}
