use crate::error::Result;
use crate::types::CsrMatrix;

/// One heap-allocated node of a row chain.
#[derive(Debug)]
pub struct RowElement {
    pub value: f64,
    pub col: usize,
    pub next_in_row: Option<Box<RowElement>>,
}

/// Compressed row storage whose rows are singly linked lists.
///
/// Every element is its own allocation, created in row-major order, so a
/// row traversal chases one pointer per entry.
#[derive(Debug)]
pub struct LinkedRowMatrix {
    size: usize,
    first_in_row: Vec<Option<Box<RowElement>>>,
    entries: usize,
}

/// Iterator over one row chain.
pub struct RowChain<'a> {
    cursor: Option<&'a RowElement>,
}

impl<'a> Iterator for RowChain<'a> {
    type Item = &'a RowElement;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.cursor?;
        self.cursor = current.next_in_row.as_deref();
        Some(current)
    }
}

impl LinkedRowMatrix {
    /// Converts a square CSR matrix into row chains.
    pub fn from_csr(m: &CsrMatrix) -> Result<Self> {
        m.require_square("linked row storage")?;
        let n = m.n_rows();
        let mut first_in_row: Vec<Option<Box<RowElement>>> = Vec::with_capacity(n);
        for r in 0..n {
            let (cols, vals) = m.row(r);
            let mut head: Option<Box<RowElement>> = None;
            let mut tail = &mut head;
            for (&col, &value) in cols.iter().zip(vals) {
                let node = tail.insert(Box::new(RowElement {
                    value,
                    col,
                    next_in_row: None,
                }));
                tail = &mut node.next_in_row;
            }
            first_in_row.push(head);
        }
        Ok(Self {
            size: n,
            first_in_row,
            entries: m.nnz(),
        })
    }

    /// Flattens the chains back into CSR arrays.
    pub fn to_csr(&self) -> CsrMatrix {
        let n = self.size;
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_ind = Vec::with_capacity(self.entries);
        let mut values = Vec::with_capacity(self.entries);
        row_ptr.push(0);
        for r in 0..n {
            for e in self.row(r) {
                col_ind.push(e.col);
                values.push(e.value);
            }
            row_ptr.push(col_ind.len());
        }
        CsrMatrix::from_parts_unchecked(n, n, row_ptr, col_ind, values)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of elements reachable from the row heads.
    pub fn entries(&self) -> usize {
        self.entries
    }

    pub fn first_in_row(&self, r: usize) -> Option<&RowElement> {
        self.first_in_row[r].as_deref()
    }

    pub fn row(&self, r: usize) -> RowChain<'_> {
        RowChain {
            cursor: self.first_in_row(r),
        }
    }
}

impl Drop for LinkedRowMatrix {
    // Unlink iteratively; the default recursive drop could overflow the
    // stack on very long rows.
    fn drop(&mut self) {
        for head in &mut self.first_in_row {
            let mut cursor = head.take();
            while let Some(mut node) = cursor {
                cursor = node.next_in_row.take();
            }
        }
    }
}
