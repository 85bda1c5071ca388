use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("not divisible by h^{power}: coefficient of h^{offending} is nonzero")]
    NotDivisibleByH { power: usize, offending: usize },

    #[error("entry ({row}, {col}) is not divisible by h^{power}")]
    EntryNotDivisible {
        row: usize,
        col: usize,
        power: usize,
    },

    #[error("pole: numerator valuation {numerator} is below denominator valuation {denominator}")]
    Pole {
        numerator: usize,
        denominator: usize,
    },

    #[error("series is identically zero to its order")]
    ZeroSeries,

    #[error("inner series must have zero constant term (found {0})")]
    NonzeroConstantTerm(String),

    #[error("series normalization violated: {0}")]
    Normalization(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("matrix is not nilpotent within dimension {dim}")]
    NotNilpotent { dim: usize },

    #[error("series order {order} is below the nilpotency index {required}")]
    InsufficientOrder { order: usize, required: usize },

    #[error("invalid spin 2j = {0}")]
    InvalidSpin(i64),

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("`{symbol}` is not allowed in the {dialect} dialect")]
    Dialect {
        symbol: String,
        dialect: &'static str,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}
