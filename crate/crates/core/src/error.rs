use thiserror::Error;

use crate::table::Index;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient table has no nonzero entry")]
    EmptyTable,
    #[error("index ({}, {}) exceeds dimension {dimension}", index.component, index.power)]
    IndexOutOfDimension { index: Index, dimension: u32 },
    #[error("knot is not certified")]
    NotCertified,
    #[error("linear part of the knot is zero")]
    ZeroLinearPart,
    #[error("sequence has a nonzero entry at index {index} beyond dimension {dimension}")]
    SupportExceedsDim { index: u32, dimension: u32 },
    #[error("vector is zero")]
    ZeroVector,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("input must be nonnegative")]
    NegativeInput,
    #[error("point and ball live in different spaces")]
    SpaceMismatch,
    #[error("point is not a member of the region")]
    NotMember,
    #[error("exponents must satisfy 1 <= s <= r (got r = {r}, s = {s})")]
    BadExponents { r: String, s: String },
    #[error("parameter bound violated: {0}")]
    ParameterBoundViolated(String),
    #[error("homotopy parameter {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("certification failed at parameter {s}")]
    CertificationFailed { s: String },
    #[error("invalid metric exponent {0}: must be >= 1")]
    InvalidExponent(String),
    #[error("{0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
