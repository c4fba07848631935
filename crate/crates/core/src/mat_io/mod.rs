//! Matrix ingestion, validation against the published collection
//! characteristics, and synthetic generators.

mod collection;
mod generate;
mod market;
mod mesh;
mod standins;

pub use collection::{published, published_entry, validate_characteristics, ValidationReport};
pub use generate::{gen_arrow, gen_banded, gen_random, gen_spd, with_dominant_diagonal, Band};
pub use market::{
    matrix_name, parse_matrix_market, read_matrix_market, write_matrix_market,
    write_matrix_market_to, MatrixMeta, Symmetry, WriteOptions, SYNTHETIC_MARKER,
};
pub use mesh::{gen_tri_mesh, TriMesh};
pub use standins::{standins, StandIn};

use crate::error::Result;
use crate::types::CsrMatrix;

/// Keeps the lower triangle (diagonal included) and mirrors it upward.
///
/// Turns an unsymmetric matrix into a symmetric one for orderings that
/// need an undirected adjacency structure.
pub fn symmetrize_lower(m: &CsrMatrix) -> Result<CsrMatrix> {
    m.require_square("symmetrize_lower")?;
    let mut triplets = Vec::with_capacity(2 * m.nnz());
    for (r, c, v) in m.triplets().filter(|&(r, c, _)| c <= r) {
        triplets.push((r, c, v));
        if c < r {
            triplets.push((c, r, v));
        }
    }
    CsrMatrix::from_triplets(m.n_rows(), m.n_cols(), &triplets)
}
