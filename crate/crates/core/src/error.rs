use thiserror::Error;

use crate::geometry::Plane;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("zero vector has no direction")]
    InvalidDirection,

    #[error("coordinate {value} out of range for p = {p}")]
    CoordinateOutOfRange { value: u32, p: u32 },

    #[error("a line needs two distinct points")]
    DegenerateLine,

    #[error("point difference needs two distinct points")]
    DegeneratePair,

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("weight has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },

    #[error("residue {value} at index {index} is not in [0, {p})")]
    ResidueOutOfRange { index: usize, value: i64, p: u32 },

    #[error("cylinder spec needs exactly {expected} fibers, got {got}")]
    InvalidCylinderSpec { expected: usize, got: usize },

    #[error("monomial degree {degree} exceeds p - 1 = {max}")]
    DegreeTooHigh { degree: u32, max: u32 },

    #[error("precondition violated: {reason}")]
    PreconditionViolated {
        reason: String,
        witness: Option<(Plane, i64)>,
    },

    #[error("coefficient sum {sum} is nonzero mod p; anchor rewrite does not apply")]
    NotRepresentable { sum: u32 },

    #[error("total weight {total} differs from p^2 = {expected}")]
    SizeViolation { total: i64, expected: i64 },

    #[error("negative weight {value} at index {index}; not a multiset")]
    NotAMultiset { index: usize, value: i64 },

    #[error("lift stuck: negative value at index {negative_at} but no point carries weight >= p")]
    LiftObstruction { negative_at: usize, state: Vec<i64> },

    #[error("emitted certificate does not evaluate to its target")]
    CertificateMismatch,

    #[error("not a permutation of 0..{p}")]
    InvalidBijection { p: u32 },

    #[error("p = {p} is beyond the exhaustive search limit of 3")]
    ScaleRefused { p: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn precondition(reason: impl Into<String>) -> Self {
        Error::PreconditionViolated {
            reason: reason.into(),
            witness: None,
        }
    }
}
