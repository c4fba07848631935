use std::marker::PhantomData;
use std::ptr::NonNull;

use crate::error::{Error, Result};
use crate::types::{CsrMatrix, Permutation};

/// A node linked into both its row chain and its column chain.
#[derive(Debug)]
pub struct OrthoElement {
    pub value: f64,
    pub row: usize,
    pub col: usize,
    next_in_row: Option<NonNull<OrthoElement>>,
    next_in_col: Option<NonNull<OrthoElement>>,
}

impl OrthoElement {
    pub fn next_in_row(&self) -> Option<&OrthoElement> {
        // SAFETY: nodes are owned by the matrix that handed out `self` and
        // live until that matrix is dropped; the borrow of `self` keeps the
        // matrix borrowed.
        self.next_in_row.map(|p| unsafe { p.as_ref() })
    }

    pub fn next_in_col(&self) -> Option<&OrthoElement> {
        // SAFETY: as above.
        self.next_in_col.map(|p| unsafe { p.as_ref() })
    }
}

/// Sparse matrix stored as orthogonal linked lists.
///
/// Each element is a separate heap node threaded through a row chain
/// (ascending column) and a column chain (ascending row). Every diagonal
/// element exists; missing diagonals are inserted as explicit zeros. The
/// internal-to-external maps describe how internal rows and columns relate
/// to the caller's ordering.
pub struct OrthoLinkedMatrix {
    size: usize,
    first_in_row: Vec<Option<NonNull<OrthoElement>>>,
    first_in_col: Vec<Option<NonNull<OrthoElement>>>,
    diag: Vec<NonNull<OrthoElement>>,
    int_to_ext_row_map: Vec<usize>,
    int_to_ext_col_map: Vec<usize>,
    entries: usize,
    _owns: PhantomData<Box<OrthoElement>>,
}

// SAFETY: the matrix exclusively owns its nodes and offers no mutation
// after construction, so moving or sharing it across threads is sound.
unsafe impl Send for OrthoLinkedMatrix {}
unsafe impl Sync for OrthoLinkedMatrix {}

/// Iterator along a row or column chain.
pub struct Chain<'a> {
    cursor: Option<&'a OrthoElement>,
    by_row: bool,
}

impl<'a> Iterator for Chain<'a> {
    type Item = &'a OrthoElement;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.cursor?;
        self.cursor = if self.by_row {
            current.next_in_row()
        } else {
            current.next_in_col()
        };
        Some(current)
    }
}

impl OrthoLinkedMatrix {
    /// Builds orthogonal storage with identity permutation maps.
    pub fn from_csr(m: &CsrMatrix) -> Result<Self> {
        m.require_square("orthogonal linked storage")?;
        let identity: Vec<usize> = (0..m.n_rows()).collect();
        Self::from_csr_with_maps(m, identity.clone(), identity)
    }

    /// Builds orthogonal storage with explicit internal-to-external maps.
    pub fn from_csr_with_maps(
        m: &CsrMatrix,
        int_to_ext_row_map: Vec<usize>,
        int_to_ext_col_map: Vec<usize>,
    ) -> Result<Self> {
        m.require_square("orthogonal linked storage")?;
        let n = m.n_rows();
        for (what, map) in [
            ("row", &int_to_ext_row_map),
            ("column", &int_to_ext_col_map),
        ] {
            if map.len() != n || Permutation::from_forward(map.clone()).is_err() {
                return Err(Error::Precondition(format!(
                    "{what} map is not a permutation of 0..{n}"
                )));
            }
        }

        let mut first_in_row = vec![None; n];
        let mut first_in_col: Vec<Option<NonNull<OrthoElement>>> = vec![None; n];
        let mut col_tail: Vec<Option<NonNull<OrthoElement>>> = vec![None; n];
        let mut diag: Vec<Option<NonNull<OrthoElement>>> = vec![None; n];
        let mut entries = 0;

        for r in 0..n {
            let (cols, vals) = m.row(r);
            let mut row_tail: Option<NonNull<OrthoElement>> = None;
            let has_diag = cols.binary_search(&r).is_ok();
            let mut pending_diag = !has_diag;
            let mut k = 0;
            while k < cols.len() || pending_diag {
                let (col, value) = if pending_diag && (k == cols.len() || cols[k] > r) {
                    pending_diag = false;
                    (r, 0.0)
                } else {
                    let item = (cols[k], vals[k]);
                    k += 1;
                    item
                };
                let node = NonNull::from(Box::leak(Box::new(OrthoElement {
                    value,
                    row: r,
                    col,
                    next_in_row: None,
                    next_in_col: None,
                })));
                entries += 1;
                match row_tail {
                    // SAFETY: `tail` was allocated above and is not aliased
                    // by any live reference.
                    Some(mut tail) => unsafe { tail.as_mut().next_in_row = Some(node) },
                    None => first_in_row[r] = Some(node),
                }
                row_tail = Some(node);
                match col_tail[col] {
                    // SAFETY: as above.
                    Some(mut tail) => unsafe { tail.as_mut().next_in_col = Some(node) },
                    None => first_in_col[col] = Some(node),
                }
                col_tail[col] = Some(node);
                if col == r {
                    diag[r] = Some(node);
                }
            }
        }

        Ok(Self {
            size: n,
            first_in_row,
            first_in_col,
            diag: diag
                .into_iter()
                .map(|d| d.expect("diagonal inserted for every row"))
                .collect(),
            int_to_ext_row_map,
            int_to_ext_col_map,
            entries,
            _owns: PhantomData,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of elements, including inserted zero diagonals.
    pub fn entries(&self) -> usize {
        self.entries
    }

    pub fn first_in_row(&self, r: usize) -> Option<&OrthoElement> {
        // SAFETY: nodes live as long as `self`.
        self.first_in_row[r].map(|p| unsafe { p.as_ref() })
    }

    pub fn first_in_col(&self, c: usize) -> Option<&OrthoElement> {
        // SAFETY: nodes live as long as `self`.
        self.first_in_col[c].map(|p| unsafe { p.as_ref() })
    }

    pub fn diag(&self, i: usize) -> &OrthoElement {
        // SAFETY: nodes live as long as `self`.
        unsafe { self.diag[i].as_ref() }
    }

    pub fn row(&self, r: usize) -> Chain<'_> {
        Chain {
            cursor: self.first_in_row(r),
            by_row: true,
        }
    }

    pub fn col(&self, c: usize) -> Chain<'_> {
        Chain {
            cursor: self.first_in_col(c),
            by_row: false,
        }
    }

    pub fn int_to_ext_row_map(&self) -> &[usize] {
        &self.int_to_ext_row_map
    }

    pub fn int_to_ext_col_map(&self) -> &[usize] {
        &self.int_to_ext_col_map
    }

    /// Row-chain contents as CSR, in internal ordering.
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
}

impl Drop for OrthoLinkedMatrix {
    fn drop(&mut self) {
        // Every node sits in exactly one row chain, so freeing along rows
        // releases each allocation once.
        for head in &mut self.first_in_row {
            let mut cursor = head.take();
            while let Some(p) = cursor {
                // SAFETY: `p` came from `Box::leak` in the constructor and is
                // reached exactly once along its row chain.
                let node = unsafe { Box::from_raw(p.as_ptr()) };
                cursor = node.next_in_row;
            }
        }
    }
}

impl std::fmt::Debug for OrthoLinkedMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrthoLinkedMatrix")
            .field("size", &self.size)
            .field("entries", &self.entries)
            .field("int_to_ext_row_map", &self.int_to_ext_row_map)
            .field("int_to_ext_col_map", &self.int_to_ext_col_map)
            .finish_non_exhaustive()
    }
}
