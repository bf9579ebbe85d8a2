use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The precision ladder reached its cap without certifying a comparison.
    #[error("precision exhausted at {cap} bits while {context}")]
    PrecisionExhausted { cap: u32, context: String },

    #[error("polynomial has no real root greater than 1")]
    NotBracketed,

    #[error("no catalogued height for {0}")]
    UnsupportedNumber(String),

    #[error("domain error: {0}")]
    DomainError(String),

    /// mu is symbolically zero; the inhomogeneous reduction does not apply.
    #[error("mu is identically zero; use the Legendre criterion")]
    MuDegenerate,

    #[error("value straddles a half-integer; refine before taking the distance to the nearest integer")]
    AmbiguousMidpoint,

    #[error("epsilon was non-positive for {attempts} consecutive convergents starting at index {first_index}")]
    EpsilonNonpositive { first_index: usize, attempts: usize },

    #[error("Legendre criterion not applicable: {0}")]
    LegendreInapplicable(String),

    #[error("division by an interval containing zero")]
    DivisionByZero,

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn exhausted(cap: u32, context: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            cap,
            context: context.into(),
        }
    }
}
