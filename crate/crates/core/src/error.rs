use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operation needs a finite shape, got windowed shape {0}")]
    InfiniteShape(String),
    #[error("map is not multiplicative: {0}")]
    NotMultiplicative(String),
    #[error("morphisms are not mutually inverse: {0}")]
    NotInverse(String),
    #[error("solve along a section is inconsistent: {0}")]
    SolveInconsistent(String),
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("no root of unity of order {n} in {field}")]
    NoRootOfUnity { field: String, n: u64 },
    #[error("q-binomial ({n} choose {k})_q is nonzero")]
    QBinomialNonzero { n: u64, k: u64 },
    #[error("window {window} too small, need at least {needed}")]
    WindowTooSmall { window: i64, needed: i64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown example {0}")]
    UnknownExample(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
