use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} is limited to L <= {max}, got L = {got}")]
    Capacity {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("eigensolver did not converge (L = {size}, lambda = {lambda})")]
    EigenNonConvergence { size: usize, lambda: C64 },

    #[error(
        "incomplete root set for L = {size}, lambda = {lambda}: expected {expected} \
         quasi-momenta, found {found:?}"
    )]
    IncompleteRoots {
        size: usize,
        lambda: C64,
        expected: usize,
        found: Vec<C64>,
    },

    #[error("EP census mismatch for L = {size}: expected {expected} records, found {found:?}")]
    CensusMismatch {
        size: usize,
        expected: usize,
        found: Vec<C64>,
    },

    #[error("cardinality mismatch: {left} vs {right}")]
    CardinalityMismatch { left: usize, right: usize },
}

impl Error {
    /// `true` for errors caused by bad input rather than by a numerical
    /// failure or a size guard.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter(_) | Error::Domain(_))
    }
}
