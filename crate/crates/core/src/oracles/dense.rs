use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::mat_io::TriMesh;
use crate::types::{CsrMatrix, LinkedRowMatrix, OrthoLinkedMatrix};

/// Largest dimension [`dense_of`] will materialize.
pub const DENSE_LIMIT: usize = 4096;

/// Square matrix in one contiguous row-major block.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSquare {
    n: usize,
    cells: Vec<f64>,
}

impl DenseSquare {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            cells: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::zeros(n);
        for i in 0..n {
            d[(i, i)] = 1.0;
        }
        d
    }

    pub fn from_row_major(n: usize, cells: Vec<f64>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::Dimension(format!(
                "{} cells for a {n}x{n} matrix",
                cells.len()
            )));
        }
        Ok(Self { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    /// Stored nonzeros as a CSR matrix (zeros dropped).
    pub fn to_csr(&self) -> CsrMatrix {
        let mut t = Vec::new();
        for r in 0..self.n {
            for c in 0..self.n {
                let v = self[(r, c)];
                if v != 0.0 {
                    t.push((r, c, v));
                }
            }
        }
        CsrMatrix::from_triplets(self.n, self.n, &t).expect("dense cells are unique")
    }
}

impl Index<(usize, usize)> for DenseSquare {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.cells[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for DenseSquare {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.cells[r * self.n + c]
    }
}

/// Sparse storages that can be expanded into a [`DenseSquare`].
pub trait Densify {
    fn dense_size(&self) -> Result<usize>;
    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64));
}

impl Densify for CsrMatrix {
    fn dense_size(&self) -> Result<usize> {
        if self.n_rows() != self.n_cols() {
            return Err(Error::Dimension(format!(
                "cannot densify a {}x{} matrix as square",
                self.n_rows(),
                self.n_cols()
            )));
        }
        Ok(self.n_rows())
    }

    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        for (r, c, v) in self.triplets() {
            f(r, c, v);
        }
    }
}

impl Densify for LinkedRowMatrix {
    fn dense_size(&self) -> Result<usize> {
        Ok(self.size())
    }

    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        for r in 0..self.size() {
            for e in self.row(r) {
                f(r, e.col, e.value);
            }
        }
    }
}

impl Densify for OrthoLinkedMatrix {
    fn dense_size(&self) -> Result<usize> {
        Ok(self.size())
    }

    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        for r in 0..self.size() {
            for e in self.row(r) {
                f(e.row, e.col, e.value);
            }
        }
    }
}

/// Exact densification; absent entries are 0.0. Ortho storage is expanded
/// in its internal ordering.
pub fn dense_of<M: Densify + ?Sized>(m: &M) -> Result<DenseSquare> {
    let n = m.dense_size()?;
    if n > DENSE_LIMIT {
        return Err(Error::SizeGuard {
            n,
            limit: DENSE_LIMIT,
        });
    }
    let mut d = DenseSquare::zeros(n);
    m.for_each_entry(&mut |r, c, v| d[(r, c)] = v);
    Ok(d)
}

fn check_len(what: &str, len: usize, n: usize) -> Result<()> {
    if len != n {
        return Err(Error::Dimension(format!(
            "{what} has length {len}, expected {n}"
        )));
    }
    Ok(())
}

pub fn dense_matvec(a: &DenseSquare, x: &[f64]) -> Result<Vec<f64>> {
    check_len("vector", x.len(), a.n)?;
    Ok((0..a.n)
        .map(|r| {
            let mut s = 0.0;
            for c in 0..a.n {
                s += a[(r, c)] * x[c];
            }
            s
        })
        .collect())
}

/// `A B` with `B` given row-major with `k` columns.
pub fn dense_matmat(a: &DenseSquare, b: &[f64], k: usize) -> Result<Vec<f64>> {
    check_len("dense operand", b.len(), a.n * k)?;
    let mut out = vec![0.0; a.n * k];
    for r in 0..a.n {
        for c in 0..k {
            let mut s = 0.0;
            for t in 0..a.n {
                s += a[(r, t)] * b[t * k + c];
            }
            out[r * k + c] = s;
        }
    }
    Ok(out)
}

pub fn dense_transpose(a: &DenseSquare) -> DenseSquare {
    let mut t = DenseSquare::zeros(a.n);
    for r in 0..a.n {
        for c in 0..a.n {
            t[(c, r)] = a[(r, c)];
        }
    }
    t
}

/// `B[p(i)][p(j)] = A[i][j]` for a forward map `p`.
pub fn dense_permute_sym(a: &DenseSquare, forward: &[usize]) -> Result<DenseSquare> {
    check_len("permutation", forward.len(), a.n)?;
    let mut seen = vec![false; a.n];
    for &p in forward {
        if p >= a.n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Precondition("not a permutation".into()));
        }
    }
    let mut b = DenseSquare::zeros(a.n);
    for i in 0..a.n {
        for j in 0..a.n {
            b[(forward[i], forward[j])] = a[(i, j)];
        }
    }
    Ok(b)
}

/// One simultaneous Jacobi update from `x`.
pub fn dense_jacobi_sweep(a: &DenseSquare, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    check_len("right-hand side", b.len(), a.n)?;
    check_len("iterate", x.len(), a.n)?;
    let mut next = vec![0.0; a.n];
    for i in 0..a.n {
        if a[(i, i)] == 0.0 {
            return Err(Error::SingularDiagonal { row: i });
        }
        let mut s = b[i];
        for j in 0..a.n {
            if j != i {
                s -= a[(i, j)] * x[j];
            }
        }
        next[i] = s / a[(i, i)];
    }
    Ok(next)
}

/// Dense `P A = L U`; `lu` holds both factors, `piv[k]` the original row of
/// step `k`.
#[derive(Debug, Clone)]
pub struct DenseLu {
    pub lu: DenseSquare,
    pub piv: Vec<usize>,
}

pub fn dense_lu(a: &DenseSquare) -> Result<DenseLu> {
    let n = a.n;
    let mut lu = a.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut p = k;
        for r in k + 1..n {
            if lu[(r, k)].abs() > lu[(p, k)].abs() {
                p = r;
            }
        }
        if lu[(p, k)] == 0.0 {
            return Err(Error::Singular { col: k });
        }
        if p != k {
            for c in 0..n {
                lu.cells.swap(k * n + c, p * n + c);
            }
            piv.swap(k, p);
        }
        for r in k + 1..n {
            let l = lu[(r, k)] / lu[(k, k)];
            lu[(r, k)] = l;
            for c in k + 1..n {
                let u = lu[(k, c)];
                lu[(r, c)] -= l * u;
            }
        }
    }
    Ok(DenseLu { lu, piv })
}

pub fn dense_lu_solve(f: &DenseLu, b: &[f64]) -> Result<Vec<f64>> {
    let n = f.lu.n;
    check_len("right-hand side", b.len(), n)?;
    let mut y: Vec<f64> = f.piv.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            y[i] -= f.lu[(i, j)] * y[j];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            y[i] -= f.lu[(i, j)] * y[j];
        }
        y[i] /= f.lu[(i, i)];
    }
    Ok(y)
}

/// Gaussian elimination on the augmented system with partial pivoting.
pub fn dense_direct_solve(a: &DenseSquare, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n;
    check_len("right-hand side", b.len(), n)?;
    let w = n + 1;
    let mut aug = vec![0.0; n * w];
    for r in 0..n {
        aug[r * w..r * w + n].copy_from_slice(a.row(r));
        aug[r * w + n] = b[r];
    }
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| {
                aug[x * w + k]
                    .abs()
                    .total_cmp(&aug[y * w + k].abs())
                    .then(y.cmp(&x))
            })
            .unwrap_or(k);
        if aug[p * w + k] == 0.0 {
            return Err(Error::Singular { col: k });
        }
        for c in 0..w {
            aug.swap(k * w + c, p * w + c);
        }
        for r in 0..n {
            if r == k {
                continue;
            }
            let f = aug[r * w + k] / aug[k * w + k];
            if f != 0.0 {
                for c in k..w {
                    aug[r * w + c] -= f * aug[k * w + c];
                }
            }
        }
    }
    Ok((0..n).map(|r| aug[r * w + n] / aug[r * w + r]).collect())
}

/// 1-norm condition estimate from explicit solves against unit vectors.
pub fn condition_estimate(a: &DenseSquare) -> Result<f64> {
    let n = a.n;
    let f = dense_lu(a)?;
    let norm_1 = |col: &dyn Fn(usize) -> f64| (0..n).map(col).map(f64::abs).sum::<f64>();
    let mut a_norm = 0.0f64;
    for c in 0..n {
        a_norm = a_norm.max(norm_1(&|r| a[(r, c)]));
    }
    let mut inv_norm = 0.0f64;
    for c in 0..n {
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        let col = dense_lu_solve(&f, &e)?;
        inv_norm = inv_norm.max(col.iter().map(|v| v.abs()).sum());
    }
    Ok(a_norm * inv_norm)
}

/// Global stiffness via gradients of the barycentric basis:
/// `K_ij = |A| ∇φ_i · ∇φ_j`.
pub fn dense_assemble(mesh: &TriMesh) -> Result<DenseSquare> {
    let n = mesh.n_nodes();
    if n > DENSE_LIMIT {
        return Err(Error::SizeGuard {
            n,
            limit: DENSE_LIMIT,
        });
    }
    let nodes = mesh.nodes();
    let mut k = DenseSquare::zeros(n);
    for (index, e) in mesh.elements().iter().enumerate() {
        let [a, b, c] = [nodes[e[0]], nodes[e[1]], nodes[e[2]]];
        let j = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 {
            return Err(Error::Geometry { element: index });
        }
        // Rows of J^-T applied to reference gradients (-1,-1), (1,0), (0,1).
        let inv_t = [
            [j[1][1] / det, -j[1][0] / det],
            [-j[0][1] / det, j[0][0] / det],
        ];
        let reference = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
        let grads: Vec<[f64; 2]> = reference
            .iter()
            .map(|g| {
                [
                    inv_t[0][0] * g[0] + inv_t[0][1] * g[1],
                    inv_t[1][0] * g[0] + inv_t[1][1] * g[1],
                ]
            })
            .collect();
        let area = det.abs() / 2.0;
        for p in 0..3 {
            for q in 0..3 {
                k[(e[p], e[q])] += area * (grads[p][0] * grads[q][0] + grads[p][1] * grads[q][1]);
            }
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_empty_densify() {
        assert_eq!(
            dense_of(&CsrMatrix::identity(3)).unwrap(),
            DenseSquare::identity(3)
        );
        assert_eq!(
            dense_of(&CsrMatrix::empty(2, 2)).unwrap(),
            DenseSquare::zeros(2)
        );
    }

    #[test]
    fn size_guard() {
        let big = CsrMatrix::empty(DENSE_LIMIT + 1, DENSE_LIMIT + 1);
        assert!(matches!(dense_of(&big), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn transpose_identity() {
        assert_eq!(
            dense_transpose(&DenseSquare::identity(4)),
            DenseSquare::identity(4)
        );
    }

    #[test]
    fn direct_solve_identity() {
        let b = [1.0, -2.0, 3.0];
        assert_eq!(
            dense_direct_solve(&DenseSquare::identity(3), &b).unwrap(),
            b.to_vec()
        );
    }

    #[test]
    fn singular_systems_error() {
        let a = DenseSquare::from_row_major(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(dense_lu(&a).is_err());
        assert!(dense_direct_solve(&a, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn unit_triangle_stiffness() {
        let mesh =
            TriMesh::try_new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]]).unwrap();
        let k = dense_assemble(&mesh).unwrap();
        assert_eq!(
            k.cells(),
            &[1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5]
        );
    }
}
