//! Sparse matrix kernels with irregular memory access.
//!
//! Two families share the storage types in [`types`]: kernels that chase
//! pointers through linked element chains ([`ptr_kernels`]) and kernels
//! that index arrays through other arrays ([`arr_kernels`]). [`oracles`]
//! holds dense brute-force references, and [`bench`] wraps every kernel
//! into a timed, checkable workload.

pub mod arr_kernels;
pub mod bench;
pub mod error;
pub mod mat_io;
pub mod oracles;
pub mod ptr_kernels;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
