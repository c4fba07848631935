use crate::error::{Error, Result};
use crate::mat_io::TriMesh;
use crate::types::CsrMatrix;

/// Linear-triangle Laplace stiffness `K = (b bᵀ + c cᵀ) / (4 |A|)`.
///
/// `b_i = y_j - y_k` and `c_i = x_k - x_j` with `(i, j, k)` cyclic. The
/// result is symmetric and each row sums to zero. Orientation does not
/// matter; a zero-area triangle is rejected.
pub fn local_stiffness(p1: [f64; 2], p2: [f64; 2], p3: [f64; 2]) -> Result<[[f64; 3]; 3]> {
    let p = [p1, p2, p3];
    let twice_area = (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p3[0] - p1[0]) * (p2[1] - p1[1]);
    if twice_area == 0.0 || !twice_area.is_finite() {
        return Err(Error::Geometry { element: 0 });
    }
    let mut b = [0.0; 3];
    let mut c = [0.0; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        b[i] = p[j][1] - p[k][1];
        c[i] = p[k][0] - p[j][0];
    }
    let scale = 2.0 * twice_area.abs();
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (b[i] * b[j] + c[i] * c[j]) / scale;
        }
    }
    Ok(k)
}

/// Symbolic global pattern for a mesh: the union of every element's
/// node pairs, rows sorted, diagonal included.
#[derive(Debug, Clone)]
pub struct AsmPlan {
    n: usize,
    row_ptr: Vec<usize>,
    col_ind: Vec<usize>,
}

impl AsmPlan {
    pub fn new(mesh: &TriMesh) -> Self {
        let n = mesh.n_nodes();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in mesh.elements() {
            for &a in e {
                adj[a].extend_from_slice(e);
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_ind = Vec::new();
        row_ptr.push(0);
        for mut row in adj {
            row.sort_unstable();
            row.dedup();
            col_ind.extend(row);
            row_ptr.push(col_ind.len());
        }
        Self {
            n,
            row_ptr,
            col_ind,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_ind.len()
    }
}

/// Assembles the global stiffness matrix of a mesh.
pub fn asm_assemble(mesh: &TriMesh) -> Result<CsrMatrix> {
    let plan = AsmPlan::new(mesh);
    let mut values = vec![0.0; plan.nnz()];
    asm_scatter(&plan, mesh, &mut values)?;
    let mut k = asm_pattern(&plan);
    k.values_mut().copy_from_slice(&values);
    Ok(k)
}

/// The plan's pattern as a CSR matrix with zero values.
pub fn asm_pattern(plan: &AsmPlan) -> CsrMatrix {
    CsrMatrix::from_parts_unchecked(
        plan.n,
        plan.n,
        plan.row_ptr.clone(),
        plan.col_ind.clone(),
        vec![0.0; plan.col_ind.len()],
    )
}

/// Timed part of assembly: clears `values`, then for each element adds its
/// local matrix into the global pattern through the connectivity table.
/// Each column is located by a linear scan of its global row.
pub fn asm_scatter(plan: &AsmPlan, mesh: &TriMesh, values: &mut [f64]) -> Result<()> {
    values.fill(0.0);
    let nodes = mesh.nodes();
    for (index, conn) in mesh.elements().iter().enumerate() {
        let local = local_stiffness(nodes[conn[0]], nodes[conn[1]], nodes[conn[2]])
            .map_err(|_| Error::Geometry { element: index })?;
        for i in 0..3 {
            let row = conn[i];
            let start = plan.row_ptr[row];
            let end = plan.row_ptr[row + 1];
            for j in 0..3 {
                let col = conn[j];
                let mut k = start;
                while k < end && plan.col_ind[k] != col {
                    k += 1;
                }
                debug_assert!(k < end, "pattern misses ({row}, {col})");
                values[k] += local[i][j];
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat_io::gen_tri_mesh;

    #[test]
    fn unit_right_triangle() {
        let k = local_stiffness([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]).unwrap();
        assert_eq!(k, [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]]);
    }

    #[test]
    fn translation_and_orientation_invariant() {
        let a = local_stiffness([0.0, 0.0], [2.0, 0.5], [0.3, 1.7]).unwrap();
        let b = local_stiffness([10.0, -4.0], [12.0, -3.5], [10.3, -2.3]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-12);
            }
            assert!(a[i].iter().sum::<f64>().abs() < 1e-14);
        }
        let cw = local_stiffness([0.0, 0.0], [0.0, 1.0], [1.0, 0.0]).unwrap();
        assert_eq!(cw[0][0], 1.0);
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(
            local_stiffness([0.0, 0.0], [1.0, 1.0], [2.0, 2.0]),
            Err(Error::Geometry { .. })
        ));
    }

    #[test]
    fn single_element_equals_local() {
        let mesh =
            TriMesh::try_new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]]).unwrap();
        let k = asm_assemble(&mesh).unwrap();
        let local = local_stiffness([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]).unwrap();
        for (r, row) in local.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(k.get(r, c).unwrap(), v);
            }
        }
    }

    #[test]
    fn two_triangle_square_is_symmetric_with_zero_rows() {
        let k = asm_assemble(&gen_tri_mesh(1, 1).unwrap()).unwrap();
        assert_eq!(k.n_rows(), 4);
        assert!(k.is_symmetric());
        for r in 0..4 {
            assert!(k.row(r).1.iter().sum::<f64>().abs() < 1e-12);
        }
    }
}
