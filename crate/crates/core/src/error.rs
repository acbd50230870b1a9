use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{a} is not invertible modulo {q}")]
    NotCoprime { a: i64, q: u64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} has no representation 4p = d^2 + 27b^2")]
    NotRepresentable(u64),

    #[error("inapplicable: {0}")]
    Inapplicable(String),

    #[error("power mean residual {residual:e} exceeds tolerance (modulus {modulus})")]
    NumericResidual { modulus: u64, residual: f64 },

    #[error("closed form is not an integer at modulus {0}")]
    NonIntegralRhs(u64),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
