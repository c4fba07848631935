//! Storage schemes shared by every kernel.
//!
//! Three sparse layouts are provided: array-based CSR, row chains of
//! individually allocated nodes, and orthogonal row/column chains. Indices
//! are 0-based throughout; 1-based indices only appear in file formats.

mod csr;
mod dense;
mod linked;
mod ortho;
mod perm;

pub use csr::CsrMatrix;
pub use dense::DenseMatrix;
pub use linked::{LinkedRowMatrix, RowChain, RowElement};
pub use ortho::{Chain, OrthoElement, OrthoLinkedMatrix};
pub use perm::Permutation;

use crate::error::Result;

/// Builds row-chain storage from CSR.
pub fn csr_to_linked(m: &CsrMatrix) -> Result<LinkedRowMatrix> {
    LinkedRowMatrix::from_csr(m)
}

/// Builds orthogonal storage from CSR, inserting zero diagonals where absent.
pub fn csr_to_ortho(m: &CsrMatrix) -> Result<OrthoLinkedMatrix> {
    OrthoLinkedMatrix::from_csr(m)
}

/// Flattens row chains back into CSR.
pub fn linked_to_csr(m: &LinkedRowMatrix) -> CsrMatrix {
    m.to_csr()
}
