use thiserror::Error;

/// Every domain failure the library can report.
///
/// The CLI maps these to exit code 1 with a JSON body; usage errors never
/// reach this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("operation requires a field, got {0}")]
    NotAField(String),
    #[error("matrix is singular")]
    Singular,
    #[error("division by a non-unit")]
    NonUnit,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("bad weight: {0}")]
    BadWeight(String),
    #[error("parameter {index} reduces to 1")]
    DegenerateParameter { index: usize },
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("restriction undefined: lambda_S = 1")]
    DegenerateRestriction,
    #[error("no invariant form for this involution")]
    NoForm,
    #[error("invariant form not unique (space of dimension {0})")]
    NonUnique(usize),
    #[error("ill-conditioned numerical problem: {0}")]
    IllConditioned(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("orbit exceeds cap of {0} points")]
    TooLarge(usize),
    #[error("bad Lie algebra target: {0}")]
    BadTarget(String),
    #[error("negative rank {0}")]
    NegativeRank(i64),
    #[error("non-integral quotient: {0}")]
    NonIntegral(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("rank {0} too small (need n >= 3)")]
    RankTooSmall(usize),
    #[error("unsupported ramification: {0}")]
    UnsupportedRamification(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
