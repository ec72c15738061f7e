use thiserror::Error;

use crate::groebner::{GbStats, ModuleElement};
use crate::poly::Polynomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the algebra layers.
///
/// Parse and manifest errors live in [`crate::io`]; everything that can go
/// wrong inside a computation is reported here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient mismatch: {0}")]
    Ambient(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    Rank { expected: usize, found: usize },

    #[error("resource limit exceeded ({reason}) after {} s-pairs, {} reductions; partial basis of {} elements", stats.s_pairs, stats.reductions, partial.len())]
    Timeout {
        reason: String,
        partial: Vec<ModuleElement>,
        stats: GbStats,
    },

    #[error("supplied inverse does not compose to the identity: component {component} is {found}")]
    InverseCheckFailed { component: usize, found: String },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("map is not equidimensional ({source_dim} -> {target_dim})")]
    NotEquidimensional { source_dim: usize, target_dim: usize },

    #[error("map has identically vanishing jacobian determinant")]
    NotSubmersive,

    #[error("eliminated discriminant ideal is not principal ({0} generators)")]
    NotPrincipal(usize),

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("vector field is not logarithmic along the divisor: remainder {0}")]
    NotLogarithmic(Polynomial),

    #[error("descent residue error: {0}")]
    DescentResidue(String),

    #[error("input generator {index} is not liftable over the unfolding")]
    InputNotLiftable { index: usize },

    #[error("output generator {index} has no certificate over the core germ")]
    OutputNotCertified { index: usize },

    #[error("certificate failed re-verification: {0}")]
    CertificateInvalid(String),
}

impl Error {
    pub(crate) fn ambient(msg: impl Into<String>) -> Self {
        Error::Ambient(msg.into())
    }

    pub fn is_timeout(&self) -> bool {
        matches!(self, Error::Timeout { .. })
    }
}
