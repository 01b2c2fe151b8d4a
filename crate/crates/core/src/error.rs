use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("Gamma has a pole at {0}")]
    GammaPole(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("insufficient precision: need {needed}, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },

    #[error("nonzero coefficient at fractional exponent {exp24}/24")]
    FractionalExponent { exp24: i64 },

    #[error("series is not in the weight {weight} space: residual at q^{index}")]
    NotInSpace { weight: i64, index: i64 },

    #[error("singular linear system")]
    SingularSystem,

    #[error("unsupported Hecke field degree: cusp space of weight {weight} has dimension {dim}")]
    UnsupportedHeckeField { weight: i64, dim: usize },

    #[error("could not resolve the square part of {0} by trial division")]
    SquarefreeUnresolved(String),
}

pub type Result<T> = std::result::Result<T, Error>;
