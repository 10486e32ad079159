use alloc::string::String;

/// Failures reported by the approximation toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("argument {x} lies outside [-1, 1]")]
    OutsideUnitInterval { x: f64 },

    #[error("function evaluation produced a non-finite value at x = {x}")]
    NonFiniteValue { x: f64 },

    #[error("denominator vanishes at x = {x}")]
    DenominatorZero { x: f64 },

    #[error("polynomial has no coefficients")]
    EmptyPolynomial,

    #[error("singular linear system (zero pivot in column {column}){hint}")]
    Singular { column: usize, hint: &'static str },

    #[error("nonlinear Padé–Chebyshev approximant does not exist: {0}")]
    NonlinearNonexistent(String),

    #[error("error approximant undefined: denominator difference is identically zero")]
    ErrorApproximantUndefined,

    #[error("approximants are not comparable: {0}")]
    Mismatch(String),

    #[error("unknown function '{name}' (available: {available})")]
    UnknownFunction { name: String, available: String },

    #[error("function '{0}' has no Taylor expansion at the origin")]
    NoTaylorProvider(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
