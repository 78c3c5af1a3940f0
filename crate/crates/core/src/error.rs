use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("size {size} exceeds the configured cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("function lives on the {found} side, expected {expected}")]
    SideMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("cannot mix exact and float grid functions")]
    ModeMismatch,
    #[error("the axis-factorized transform only runs in float mode")]
    ExactModeUnsupported,
    #[error("invalid exponents: {0}")]
    BadExponents(String),
    #[error("invalid exponent: {0}")]
    BadExponent(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires an even dimension, got d = {0}")]
    OddDimension(usize),
    #[error("operation requires dimension at least {min}, got d = {d}")]
    TooSmallDimension { d: usize, min: usize },
    #[error("radius t = 0 is excluded")]
    ZeroRadius,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("-1 is not a square in F_{0}")]
    MinusOneNotSquare(u32),
    #[error("set size {size} outside 0..={max}")]
    SizeOutOfRange { size: usize, max: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("element {value} out of range for F_{q}")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("exact result is not of the expected form: {0}")]
    Inexact(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
