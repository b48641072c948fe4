use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("leading coefficient {coeff} at t^{exponent} is not a unit")]
    NonUnitLeadingCoefficient { exponent: i64, coeff: String },

    #[error("series has no known nonzero coefficient (zero up to t^{hi})")]
    ZeroSeries { hi: i64 },

    #[error("dimension vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("roots lie on different axes")]
    AxisMismatch,

    #[error("roots must lie on lines {first} < {second}")]
    LineOrder { first: usize, second: usize },

    #[error("order is not a permutation of the roots: {0}")]
    IncompleteOrder(String),

    #[error("order violates the ordering rules at positions {first} and {second}")]
    InvalidOrder { first: usize, second: usize },

    #[error("basis product requires nonzero dimension vectors")]
    ZeroVectorOperand,

    #[error("algebra elements live in different truncation boxes")]
    BoxMismatch,

    #[error("the two sides of {0} differ")]
    IdentityMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
