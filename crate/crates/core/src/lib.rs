//! Subgroup lattices of finite permutation groups, their non-permutability graphs and spectra,
//! Möbius values, and the subgroup commutativity degree and factorization number computed by
//! several independent routes.
//!
//! The numeric core is generic over the scalar type; the aliases below fix the common choices.

mod bigstr;
pub mod bitset;
pub mod closed_forms;
pub mod degrees;
pub mod error;
pub mod graph;
pub mod group;
pub mod iso;
pub mod lattice;
pub mod literature;
pub mod perm;
pub mod spectral;

pub use bitset::BitSet;
pub use closed_forms::{
    compare_census, dickson_census, f2_pgl_closed, f2_psl_closed, mobius_hall, mobius_symmetric,
    CensusCount, CensusEntry, PrimePower,
};
pub use degrees::{
    f2_direct, f2_mobius, f2_split_adjacency, f2_split_laplacian, partition_hk, sd_direct,
    sd_spectral, sd_via_f2, verify_identities, DegreeAnalysis, DegreeReport, ExactRational,
    HKPartition, SplitVariant,
};
pub use error::{Error, Result};
pub use graph::{build_graph, NonPermutabilityGraph};
pub use group::{generate_group, generate_group_with_cap, FiniteGroup};
pub use iso::{type_census, TypeSignature};
pub use lattice::{
    enumerate_subgroups, enumerate_subgroups_with_cap, Interval, Subgroup, SubgroupLattice,
};
pub use perm::{compose, element_order, format_generators, parse_generators, Permutation};
pub use spectral::{
    eigenvalues_symmetric, spectral_sums, verify_trace_identities, DenseSymMatrix, Spectrum,
    TraceReport,
};

/// Double-precision matrix, the default for spectra.
pub type Matrix64 = DenseSymMatrix<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type Matrix32 = DenseSymMatrix<f32>;
pub type Spectrum32 = Spectrum<f32>;
/// Exact integer matrix as built from a graph.
pub type IntMatrix = DenseSymMatrix<i64>;
