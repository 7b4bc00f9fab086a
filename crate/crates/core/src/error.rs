use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("spin {spin} is not a positive half-integer")]
    NonHalfIntegerSpin { spin: f64 },

    #[error("dephasing rate must be non-negative, got {gamma}")]
    NegativeGamma { gamma: f64 },

    #[error("{field} must be finite, got {value}")]
    NonFiniteParameter { field: &'static str, value: f64 },

    #[error("{field} = {value} is outside [{lo}, {hi}]")]
    AngleOutOfRange {
        field: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dense representation needs dimension {dim}, cap is {cap}")]
    SpinTooLargeForDense { dim: usize, cap: usize },

    #[error("moment order {order} outside 1..={max}")]
    MomentOrderOutOfRange { order: u64, max: u64 },

    #[error("mean spin length {norm:e} is below the frame threshold")]
    VanishingMeanSpin { norm: f64 },

    #[error("reduced variance {v_minus:e} is negative beyond the numerical floor")]
    NegativeVariance { v_minus: f64 },

    #[error("initial state sits on a pole (sin theta0 = 0)")]
    PoleState,

    #[error("short-time formula needs tau > 0")]
    ZeroTime,

    #[error("formula needs gamma > 0, got {gamma}")]
    NonpositiveGamma { gamma: f64 },

    #[error("integration step {step:e} exceeds the stability bound {max:e}")]
    StepTooLarge { step: f64, max: f64 },

    #[error("no interior minimum of xi^2 found in the searched range")]
    NoMinimumFound,

    #[error("grid is empty")]
    EmptyGrid,

    #[error("grid must be non-negative and strictly increasing")]
    InvalidGrid,

    #[error("power-law fit is degenerate: {reason}")]
    FitDegenerate { reason: &'static str },

    #[error("power-law data must be positive, got ({x}, {y})")]
    NonpositiveData { x: f64, y: f64 },

    #[error("spin {spin} is below the scaling-sweep minimum {min}")]
    SpinTooSmall { spin: f64, min: f64 },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonHalfIntegerSpin { .. } => "NonHalfIntegerSpin",
            Error::NegativeGamma { .. } => "NegativeGamma",
            Error::NonFiniteParameter { .. } => "NonFiniteParameter",
            Error::AngleOutOfRange { .. } => "AngleOutOfRange",
            Error::SpinTooLargeForDense { .. } => "SpinTooLargeForDense",
            Error::MomentOrderOutOfRange { .. } => "MomentOrderOutOfRange",
            Error::VanishingMeanSpin { .. } => "VanishingMeanSpin",
            Error::NegativeVariance { .. } => "NegativeVariance",
            Error::PoleState => "PoleState",
            Error::ZeroTime => "ZeroTime",
            Error::NonpositiveGamma { .. } => "NonpositiveGamma",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NoMinimumFound => "NoMinimumFound",
            Error::EmptyGrid => "EmptyGrid",
            Error::InvalidGrid => "InvalidGrid",
            Error::FitDegenerate { .. } => "FitDegenerate",
            Error::NonpositiveData { .. } => "NonpositiveData",
            Error::SpinTooSmall { .. } => "SpinTooSmall",
        }
    }
}
