//! Double-array trie size minimization.
//!
//! The crate is organized around one pipeline and its surroundings:
//!
//! * [`trie`] — ordinary tries over small integer alphabets, built from
//!   string sets, plus exhaustive enumeration of small trie shapes.
//! * [`double_array`] — the double-array representation (`base`/`check`),
//!   greedy first-fit construction, lookup, and verification against a trie.
//! * [`soda`] — the string-packing problem that captures double-array layout:
//!   one wildcard string per internal trie node, and the shortest common
//!   text in which all of them occur. Includes a brute-force oracle, fast
//!   optimal solvers for alphabets of size 2 and 3, and the exact
//!   double-array builder on top.
//! * [`sat`] — a small CDCL SAT solver with assumptions, DIMACS parsing and
//!   printing, and a driver for external solvers.
//! * [`maxsat`] — the partial MaxSAT encoding of double-array layout,
//!   cardinality encodings, WCNF serialization, and the optimization
//!   strategies (full minimization, binary search, single decision calls).
//! * [`reductions`] — generators and verifiers for the hardness reductions:
//!   restricted directed Hamiltonian path to shortest common superstring,
//!   superstring to the packing problem, and graph 3-coloring to shifted
//!   matrix covering.
//!
//! Heavy search routines are data-parallel via `rayon` when the `parallel`
//! feature (on by default) is enabled; every parallel entry point has a
//! `*_seq` sibling that is always compiled and returns bit-identical
//! results.

pub mod double_array;
pub mod error;
pub mod maxsat;
pub mod reductions;
pub mod sat;
pub mod soda;
pub mod trie;

pub use error::{Error, Result};
