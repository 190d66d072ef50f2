use thiserror::Error;

use crate::poly::RingDescriptor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: RingDescriptor, right: RingDescriptor },
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("variable index {index} out of range for a ring with {vars} variables")]
    VariableIndex { index: usize, vars: usize },
    #[error("expected a polynomial in R_{expected}, found {found}")]
    WrongRing { expected: usize, found: RingDescriptor },
    #[error("operation requires a non-extended ring")]
    ExtendedRing,
    #[error("operation requires the extended ring R_n[y0,y1]")]
    NotExtended,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not isobaric")]
    NotIsobaric,
    #[error("polynomial is not homogeneous in y0, y1")]
    NotCovariant,
    #[error("polynomial is not in the kernel of D_n")]
    NotInvariant,
    #[error("not a local slice: D_n s must be a nonzero element of ker D_n")]
    NotLocalSlice,
    #[error("{what} = {value} out of range (allowed {allowed})")]
    OutOfRange { what: &'static str, value: i64, allowed: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn out_of_range(
        what: &'static str,
        value: impl TryInto<i64>,
        allowed: impl Into<String>,
    ) -> Self {
        Error::OutOfRange { what, value: value.try_into().unwrap_or(i64::MAX), allowed: allowed.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
