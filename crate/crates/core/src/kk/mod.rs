//! Integer bookkeeping for the six-term sequences in K-theory and K-homology
//! and the pairings between them.

pub mod pairing;
pub mod sequences;
pub mod smith;

pub use pairing::{
    check_duality, check_faithfulness, check_phi_pullback, pairing_tables, verify_tables, DualityReport,
    FaithfulnessReport, PairingTable, TableVerification, VerifyConfig,
};
pub use sequences::{
    check_exactness, khomology_sequence, pv_ktheory_sequence, run_mutations, AbelianGroupPresentation,
    ExactnessReport, IntegerMap,
};
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
