use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("divisor is not monic in `{0}`")]
    NonMonicDivisor(String),
    #[error("division by a non-invertible element: {0}")]
    NotInvertible(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("incompatible denominator systems: {0}")]
    IncompatibleDenominators(String),
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("Hensel precondition failed: {0}")]
    HenselPrecondition(String),
    #[error("unsupported splitting: {0}")]
    UnsupportedSplitting(String),
    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),
    #[error("inseparable presentation: {0}")]
    Inseparable(String),
    #[error("malformed form: {0}")]
    MalformedForm(String),
    #[error("form is not closed; d(form) has the term {witness}")]
    NotClosed { witness: String },
    #[error("embedding mismatch: {0}")]
    EmbeddingMismatch(String),
    #[error("degree limit {limit} exceeded (saw degree {degree})")]
    DegreeLimit { limit: u32, degree: u32 },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown corpus suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
