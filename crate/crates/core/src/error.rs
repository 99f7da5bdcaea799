use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} has a non-finite entry")]
    NonFinite(String),

    #[error("invalid system shape: {0}")]
    InvalidShape(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("too many particles: m = {m} exceeds the enumeration cap of {cap}")]
    TooManyParticles { m: usize, cap: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("factor {index} is not a unit vector (norm {norm})")]
    NotUnitNorm { index: usize, norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("outcome {outcome} has zero probability ({probability:.3e}); conditioning is undefined")]
    IncompatibleOutcome { outcome: usize, probability: f64 },

    #[error(
        "exchangeability characterizations disagree (projector residual {projector:.3e}, pairwise residual {pairwise:.3e})"
    )]
    CharacterizationMismatch { projector: f64, pairwise: f64 },

    #[error("operation supports only n = 2, m = 2 systems, got n = {n}, m = {m}")]
    UnsupportedShape { n: usize, m: usize },

    #[error("density matrix is not exchangeable (residual {residual:.3e})")]
    NotExchangeable { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
