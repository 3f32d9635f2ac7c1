//! Exact and numerical tools for the group ring and group C*-algebra of the
//! discrete Heisenberg group `H₃`.
//!
//! Exact arithmetic in the group ring `C[H₃]`, derivation decomposition,
//! centralizer and cyclic-cohomology classification, numerical Fredholm-module
//! pairings, and integer bookkeeping of the six-term sequences in K-theory and
//! K-homology.

pub mod algebra;
pub mod derivations;
pub mod group_structure;
pub mod kk;
pub mod error;
pub mod fredholm;
pub mod sampling;
pub mod acceptance;

pub use error::{HncError, Result};
