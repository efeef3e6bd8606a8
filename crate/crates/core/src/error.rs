use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { got: usize, max: usize },

    #[error("expected {expected} variables, got {got}")]
    VariableMismatch { expected: usize, got: usize },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("no spike of degree {degree} in {nvars} variables (mu = {mu})")]
    NoSpike { nvars: usize, degree: u32, mu: u32 },

    #[error("invalid weight vector {0}")]
    InvalidWeight(String),

    #[error("degree space has {required} monomials, limit is {limit}")]
    ResourceLimit { required: u128, limit: u128 },

    #[error("Kameko map needs d >= s and d - s even (s = {nvars}, d = {degree})")]
    KamekoDegree { nvars: usize, degree: u32 },

    #[error("invalid index {index} (allowed 1..={max})")]
    InvalidIndex { index: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("t = {t} is outside the supported range {range}")]
    OutOfRange { t: u32, range: String },

    #[error("golden data inconsistent: {0}")]
    Golden(String),
}
