//! Fredholm modules over the group C*-algebra as truncated operators, and the
//! index, trace and lattice-Chern routes to their pairings with K-theory.

pub mod bott;
pub mod chern;
pub mod dirac;
pub mod even;
pub mod index;
pub mod operator;
pub mod spec;

pub use bott::{bott_projector, constant_projector, field_from_algebra, FieldSource, ProjectorField};
pub use chern::{lattice_chern, ChernReport};
pub use dirac::{dirac_even_pairing, DiracPairingReport};
pub use even::{even_pairing_trace, EvenPairingReport};
pub use index::{fredholm_index, odd_pairing, IndexReport, OddPairingReport};
pub use operator::{build_representation, unitary_equivalence_check, TruncatedOperator, Window};
pub use spec::{parse_algebra_matrix, AlgebraMatrix, FredholmModuleSpec, KClass, ModuleName, Parity};
