//! Exact lattice-theoretic computations around mirror symmetry for elliptic
//! curves, lattice-polarized K3 surfaces and toric Calabi–Yau hypersurfaces.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals).

pub mod corpus;
pub mod error;
pub mod io;
pub mod k3;
pub mod lattice;
pub mod matrix;
pub mod monodromy;
pub mod mukai;
pub mod toric;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
