//! Brute-force references used by tests and by the validation gate. Never
//! timed, and independent of the kernel implementations.

mod dense;
mod ordering;
mod streamed;

pub use dense::*;
pub use ordering::*;
pub use streamed::*;
