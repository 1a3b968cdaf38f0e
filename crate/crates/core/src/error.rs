//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by builders, solvers, generators, and verifiers.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (bad file syntax, out-of-range ids,
    /// duplicate strings, invalid graph description, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// The instance is structurally valid but exceeds a hard size limit of an
    /// exact algorithm (brute-force search, dynamic program, ...).
    #[error("instance too large: {0}")]
    Capacity(String),

    /// A problem outside the instance itself: I/O failure, an external solver
    /// that cannot be spawned or speaks an unexpected protocol, and the like.
    #[error("environment error: {0}")]
    Environment(String),

    /// A certificate or artifact failed verification (a claimed superstring
    /// that does not embed every pattern, a double array that does not match
    /// its trie, a solution that violates the target structure, ...).
    #[error("structural check failed: {0}")]
    Structural(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Environment(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
