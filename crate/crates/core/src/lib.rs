//! Entanglement structure of random stabilizer states.
//!
//! Bit-packed GF(2) linear algebra, Pauli operators, stabilizer groups and
//! Clifford elements, the subgroup formulas that count extractable EPR and
//! GHZ states, brute-force oracles for small instances, and a seeded Monte
//! Carlo harness that compares sampled ensembles against analytic bounds.

pub mod clifford;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod gf2;
pub mod oracle;
pub mod pauli;
pub mod stabilizer;
mod symplectic;

pub use clifford::CliffordElement;
pub use entanglement::{
    entanglement_report, ghz_count, local_log_rank, mixed_epr_lower_bound,
    pure_bipartite_entanglement, EntanglementReport, MixedBound,
};
pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentKind, ExperimentReport};
pub use gf2::{BitMatrix, BitVector};
pub use pauli::PauliOperator;
pub use stabilizer::{Partition, Party, StabilizerGroup, ValidityReason};
