//! Automorphisms, orbits, density oracles and graph-algebra ranks.

pub mod action;
pub mod automorphism;
pub mod closure;
pub mod connection;
pub mod linalg;
pub mod oracle;

pub use action::{permute_tuple_function, r_operator, spectral_action_check, SpectralActionReport};
pub use automorphism::{automorphisms, automorphisms_with_cap, AutGroup, Orbits, Permutation};
pub use connection::{
    algebra_dimension, connection_matrix, node_transitivity_report, AlgebraDimension, ConnectionMatrix,
    TransitivityReport,
};
pub use linalg::{is_psd, rank};
pub use oracle::{orbit_equiv_oracle, same_partition, signature_partition, OracleVerdict, SignaturePartition};
