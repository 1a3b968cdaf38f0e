//! Instance generators and verifiers connecting graph problems to
//! alignment problems.
//!
//! The chain runs in two independent directions:
//!
//! * [`rdhp`] and [`scs`]: restricted directed graphs whose Hamiltonian
//!   paths correspond to shortest common superstrings of a derived string
//!   family hitting an exact target length, with witness translation in
//!   both directions and an exact superstring solver for cross-checks.
//! * [`encode`]: expansion of such string families into wildcard strings
//!   over per-string letters, where optimal placements are pinned to a
//!   block grid by interlocking binary codes.
//! * [`smc`]: shifted matrix cover instances derived from undirected
//!   graphs, linking per-row shifts to graph colorings.

pub mod encode;
pub mod rdhp;
pub mod scs;
pub mod smc;

pub use encode::{
    audit_encoding, block_alignment_audit, encode_scs_to_soda, encoded_superstring,
    EncodedInstance, EncodedKind, Role,
};
pub use rdhp::{sample_rdhp, sample_rdhp_with, RdhpInstance, HAM_SEARCH_CAP};
pub use scs::{
    exact_scs, exact_scs_seq, ham_path_to_superstring, overlap_merge, rdhp_to_scs,
    superstring_to_ham_path, ScsInstance, ScsSymbol, DEFAULT_SCS_CAP,
};
pub use smc::{
    brute_force_smc, brute_force_smc_seq, coloring_to_smc, is_three_colorable, sample_graph,
    shifts_to_coloring, Color, SmcInstance, SmcWitness, SMC_ROWS_CAP,
};
