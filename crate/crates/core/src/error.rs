use crate::qcore::QubitLabel;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit {0} appears in both registers")]
    RegisterClash(QubitLabel),
    #[error("qubit {0} is not part of the register")]
    UnknownQubit(QubitLabel),
    #[error("invalid register: {0}")]
    InvalidRegister(&'static str),
    #[error("shape mismatch: {0}")]
    ShapeError(&'static str),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("not a valid density matrix: {0}")]
    NotDensityMatrix(&'static str),
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("measurement basis is not orthonormal (max deviation {0:e})")]
    BasisError(f64),
    #[error("constraint Gram matrices differ (max deviation {0:e})")]
    NotIsometric(f64),
    #[error("partition must be a nonempty proper subset of the register")]
    PartitionError,
    #[error("overlap magnitude {0} >= 1: the two states cannot be discriminated")]
    DegenerateOverlap(f64),
    #[error("parameter `{name}` = {value} is out of range")]
    RangeError { name: &'static str, value: f64 },
    #[error("embedding does not reproduce the instance overlaps (deviation {0:e})")]
    EmbeddingError(f64),
    #[error("geometric phase undefined: {0}")]
    UndefinedPhase(&'static str),
    #[error("non-finite value encountered: {0}")]
    NumericalError(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
