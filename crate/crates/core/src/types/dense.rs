use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// C-style two-dimensional array: a table of individually allocated rows.
///
/// Reading `m[r][c]` goes through the row table first and then into the
/// row, two dependent loads per access.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    n_cols: usize,
    rows: Vec<Box<[f64]>>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_cols,
            rows: (0..n_rows)
                .map(|_| vec![0.0; n_cols].into_boxed_slice())
                .collect(),
        }
    }

    /// Builds from contiguous row-major data.
    pub fn from_row_major(n_rows: usize, n_cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(Error::Dimension(format!(
                "{} values for a {n_rows}x{n_cols} matrix",
                data.len()
            )));
        }
        let rows = if n_cols == 0 {
            (0..n_rows).map(|_| Box::<[f64]>::default()).collect()
        } else {
            data.chunks(n_cols).map(Box::from).collect()
        };
        Ok(Self { n_cols, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.rows[r]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.rows[r]
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        self.rows.iter().flat_map(|r| r.iter().copied()).collect()
    }

    pub fn fill(&mut self, value: f64) {
        for row in &mut self.rows {
            row.fill(value);
        }
    }
}

impl std::ops::Index<usize> for DenseMatrix {
    type Output = [f64];

    fn index(&self, r: usize) -> &[f64] {
        &self.rows[r]
    }
}

impl std::ops::IndexMut<usize> for DenseMatrix {
    fn index_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.rows[r]
    }
}
