use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("could not parse {what}: {input:?}")]
    ParseFailure { what: &'static str, input: String },
    #[error("partition is not weakly decreasing at position {index}: {parts:?}")]
    NotWeaklyDecreasing { index: usize, parts: Vec<i64> },
    #[error("partition has a negative part at position {index}: {parts:?}")]
    NegativePart { index: usize, parts: Vec<i64> },
    #[error("partitions have mismatched lengths: {0:?}")]
    RankMismatch(Vec<usize>),
    #[error("weights are unbalanced: |lambda| + |mu| = {lhs} but |nu| = {rhs}")]
    Unbalanced { lhs: i64, rhs: i64 },
    #[error("rank must be at least {min}, got {n}")]
    RankTooSmall { n: usize, min: usize },
    #[error("scale {scale} times n^2 = {n_sq} is not an integer")]
    NonIntegralScale { scale: String, n_sq: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("search exceeded the budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("body lies in the hyperplane of row {row} and has zero volume")]
    FlatBody { row: usize },
    #[error("point lies on or outside the boundary (row {row}, residual {residual})")]
    OnBoundary { row: usize, residual: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("body has dimension zero")]
    DegenerateBody,
    #[error("rounding failed: {0}")]
    RoundingFailure(String),
    #[error("{name} = {value} is out of range ({range})")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("theta-combination of the two triples is not integral")]
    NonIntegralMidpoint,
    #[error("sampling starved: {accepted} accepted after {attempts} attempts")]
    SamplingStarved { accepted: usize, attempts: u64 },
    #[error("invalid body description: {0}")]
    InvalidBody(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
