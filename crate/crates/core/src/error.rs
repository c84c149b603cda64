use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("neither sign makes the functional equation self-consistent (residuals +1: {plus:.3e}, -1: {minus:.3e})")]
    AmbiguousSign { plus: f64, minus: f64 },

    #[error("sign of the functional equation is unknown")]
    UnknownSign,

    #[error("need {needed} coefficients, only {available} stored")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("duplicate interpolation node at index {0}")]
    DuplicateNode(usize),

    #[error("root finding did not converge: {0}")]
    NoConvergence(String),

    #[error("polynomial value at z = 1 vanishes ({0:.3e}); divide out (1 - z) first")]
    ValueAtOneVanishes(f64),

    #[error("division by (1 - z) left relative remainder {0:.3e}")]
    RemainderTooLarge(f64),

    #[error("target {target} is outside the range of h_k for k = {k}")]
    BracketFailure { k: u32, target: f64 },

    #[error("enumeration of {0} points exceeds the budget")]
    TooLarge(u128),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
