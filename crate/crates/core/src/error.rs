use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid dimension {0}; must be at least 1")]
    ZeroDimension(usize),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("operator is not hermitian (max |M - M^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("operator is not a projector (max |M^2 - M| = {0:e})")]
    NotProjector(f64),

    #[error("projector trace {0} is not an integer")]
    NonIntegerTrace(f64),

    #[error("expectation value has imaginary part {0:e}")]
    ComplexExpectation(f64),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("symmetry class lambda must be +1 or -1, got {0}")]
    InvalidLambda(i64),

    #[error("compute budget exceeded: {0}")]
    Budget(String),

    #[error("antisymmetrized state vanishes (Pauli exclusion)")]
    PauliExcluded,

    #[error("constituent states are not orthogonal (|<psi,phi>| = {0:e})")]
    NotOrthogonal(f64),

    #[error("wrong two-particle state kind: expected {0}")]
    WrongKind(&'static str),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integer overflow in exact count")]
    Overflow,

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
