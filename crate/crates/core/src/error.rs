use thiserror::Error;

use crate::hochschild::Cochain;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("linear map is singular")]
    SingularMap,

    #[error("parametrized map has identically zero determinant")]
    IdenticallySingular,

    #[error("algebra is not associative")]
    NotAssociative,

    #[error("cochain of degree {degree} is not a cocycle")]
    NotACocycle { degree: usize },

    #[error("filtration is not multiplicative: A_{p} * A_{q} is not contained in A_{}", p + q)]
    NotMultiplicative { p: usize, q: usize },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("deformation has no nonzero term")]
    AllZero,

    #[error("deformation equation fails at order {order}")]
    PrefixInvalid { order: usize },

    #[error("obstruction at order {order} is not a coboundary")]
    FailureAtOrder { order: usize, obstruction: Box<Cochain> },

    #[error("degeneration condition fails")]
    ConditionFails { residual: Box<Cochain> },

    #[error("linearization at order {order} is singular; continuation is not unique")]
    SingularLinearization { order: usize },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
