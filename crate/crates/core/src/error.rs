use thiserror::Error;

use crate::gf::GfError;
use crate::poly::PolyError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("evaluation set is empty")]
    NoPoints,
    #[error("basis function {function} has a pole at point {point}")]
    Pole { function: usize, point: usize },
    #[error("point {point} does not lie on the curve")]
    PointOffCurve { point: usize },
    #[error("message has length {got}, code dimension is {expected}")]
    MessageLength { got: usize, expected: usize },
    #[error("word has length {got}, code length is {expected}")]
    WordLength { got: usize, expected: usize },
    #[error("code has dimension 0")]
    ZeroDimension,
    #[error("coordinate {index} is out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("repair group for coordinate {target} (group {group}) fails certification")]
    CertificationFailed { target: usize, group: usize },
    #[error("recovery structure must be certified before use")]
    Uncertified,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Error {
        Error::InvalidParameters(msg.into())
    }
}
