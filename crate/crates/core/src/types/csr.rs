use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Array-based compressed sparse row storage.
///
/// `row_ptr` has `n_rows + 1` entries; row `r` occupies
/// `col_ind[row_ptr[r]..row_ptr[r + 1]]` and the matching slice of `values`.
/// Column indices are strictly increasing inside a row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_ind: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from raw arrays, checking every structural invariant.
    pub fn try_new(
        n_rows: usize,
        n_cols: usize,
        row_ptr: Vec<usize>,
        col_ind: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != n_rows + 1 {
            return Err(Error::Structure(format!(
                "row_ptr has {} entries, expected {}",
                row_ptr.len(),
                n_rows + 1
            )));
        }
        if row_ptr[0] != 0 {
            return Err(Error::Structure("row_ptr[0] must be 0".into()));
        }
        if col_ind.len() != values.len() || row_ptr[n_rows] != col_ind.len() {
            return Err(Error::Structure(format!(
                "row_ptr ends at {}, but {} column indices and {} values given",
                row_ptr[n_rows],
                col_ind.len(),
                values.len()
            )));
        }
        for r in 0..n_rows {
            if row_ptr[r] > row_ptr[r + 1] {
                return Err(Error::Structure(format!("row_ptr decreases at row {r}")));
            }
            let cols = &col_ind[row_ptr[r]..row_ptr[r + 1]];
            for (k, &c) in cols.iter().enumerate() {
                if c >= n_cols {
                    return Err(Error::Structure(format!(
                        "column {c} out of range in row {r} (n_cols = {n_cols})"
                    )));
                }
                if k > 0 && cols[k - 1] >= c {
                    return Err(Error::Structure(format!(
                        "columns not strictly increasing in row {r}"
                    )));
                }
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_ind,
            values,
        })
    }

    /// Builds a matrix from unordered `(row, col, value)` triplets.
    ///
    /// Duplicate coordinates are rejected rather than summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        for &(r, c, _) in &sorted {
            if r >= n_rows || c >= n_cols {
                return Err(Error::Structure(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
        }
        sorted.sort_by_key(|t| (t.0, t.1));
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::Duplicate {
                    row: w[0].0 + 1,
                    col: w[0].1 + 1,
                });
            }
        }
        let mut row_ptr = vec![0usize; n_rows + 1];
        for &(r, _, _) in &sorted {
            row_ptr[r + 1] += 1;
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let col_ind = sorted.iter().map(|t| t.1).collect();
        let values = sorted.iter().map(|t| t.2).collect();
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_ind,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_ind: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// An `n_rows x n_cols` matrix with no stored entries.
    pub fn empty(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            row_ptr: vec![0; n_rows + 1],
            col_ind: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Assembles a matrix from arrays already known to be valid.
    ///
    /// Used by kernels whose construction guarantees the invariants; debug
    /// builds still check them.
    pub(crate) fn from_parts_unchecked(
        n_rows: usize,
        n_cols: usize,
        row_ptr: Vec<usize>,
        col_ind: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        let m = Self {
            n_rows,
            n_cols,
            row_ptr,
            col_ind,
            values,
        };
        debug_assert!(
            Self::try_new(
                m.n_rows,
                m.n_cols,
                m.row_ptr.clone(),
                m.col_ind.clone(),
                m.values.clone()
            )
            .is_ok(),
            "kernel produced invalid CSR"
        );
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_ind(&self) -> &[usize] {
        &self.col_ind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_ind[range.clone()], &self.values[range])
    }

    /// Stored value at `(r, c)`, if the entry exists.
    pub fn get(&self, r: usize, c: usize) -> Option<f64> {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).ok().map(|k| vals[k])
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what} requires a square matrix, got {}x{}",
                self.n_rows, self.n_cols
            )))
        }
    }

    /// True when the nonzero pattern equals that of the transpose.
    pub fn is_pattern_symmetric(&self) -> bool {
        self.is_square()
            && self
                .triplets()
                .all(|(r, c, _)| r == c || self.get(c, r).is_some())
    }

    /// True when pattern and values equal those of the transpose.
    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && self
                .triplets()
                .all(|(r, c, v)| r == c || self.get(c, r) == Some(v))
    }
}
