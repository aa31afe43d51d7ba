use thiserror::Error;

use crate::kernel::rational::{format_rational, format_vector, Rational, Vector};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid document: {0}")]
    Format(String),

    #[error("cone is not pointed; lineality space has dimension {}", lineality.len())]
    NonPointed { lineality: Vec<Vector> },

    #[error("cone carries strict inequalities; close it before testing membership")]
    StrictCone,

    #[error("`{0}` needs a polyhedral cone")]
    NonPolyhedral(&'static str),

    #[error("the cone of positive semidefinite {0}x{0} matrices is self-dual and has no finite description")]
    SelfDualPsd(usize),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("unit vector is zero")]
    ZeroUnit,

    #[error("unit is not an order unit")]
    NotOrderUnit,

    #[error("subspace is not an order ideal: 0 <= {} <= {} but the former is outside", format_vector(q), format_vector(p))]
    NotOrderIdeal { q: Vector, p: Vector },

    #[error("map is not unital")]
    NotUnital,

    #[error("map is not positive")]
    NotPositive,

    #[error("map is not surjective")]
    NotSurjective,

    #[error("target space is not the standard l-infinity space")]
    NotLinf,

    #[error("linear program infeasible; Farkas multipliers {}", format_vector(farkas))]
    Infeasible { farkas: Vector },

    #[error("{what} exceeds the limit {limit}")]
    LimitExceeded { what: &'static str, limit: usize },

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("requested defect {} not reached; best achieved {}", format_rational(requested), format_rational(best))]
    ToleranceNotMet { requested: Box<Rational>, best: Box<Rational> },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
