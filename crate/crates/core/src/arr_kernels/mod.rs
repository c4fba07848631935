//! Indirection-array kernels over CSR and mesh connectivity arrays.
//!
//! Every inner loop indexes one array with the contents of another, so the
//! access stream is data dependent but the index arrays themselves stream
//! contiguously.

mod asm;
mod cmck;
mod mperm;
mod trmat;

pub use asm::{asm_assemble, asm_pattern, asm_scatter, local_stiffness, AsmPlan};
pub use cmck::{bandwidth, cmck, cmck_order, CmckWork};
pub use mperm::{mperm, mperm_fill, MpermFill};
pub use trmat::trmat;
