use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial is not usable as a field modulus: {0}")]
    BadModulus(String),
    #[error("root index {index} out of range ({count} real roots)")]
    RootIndex { index: usize, count: usize },
    #[error("element is already a square in {0}")]
    AlreadySquare(String),
    #[error("element is not a square: {0}")]
    NotSquare(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements live in different fields ({0} vs {1})")]
    FieldMismatch(String, String),
    #[error("element is not integral: {0}")]
    NotIntegral(String),
    #[error("no totally positive generator: {0}")]
    NoTotallyPositiveGenerator(String),
    #[error("not coprime to the level: {0}")]
    NotCoprime(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("unsupported input: {0}")]
    Scope(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
