use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("rank must be at least 1")]
    ZeroRank,

    #[error("generator a{index} is out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("exponent overflows a 64-bit integer")]
    ExponentOverflow,

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("sheet {sheet} is out of range for degree {degree}")]
    SheetOutOfRange { sheet: usize, degree: usize },

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("permutation for color a{color} is not a bijection on {degree} sheets")]
    NotABijection { color: usize, degree: usize },

    #[error("malformed cover document: {0}")]
    Json(String),

    #[error("cover is not connected")]
    Disconnected,

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("rank {rank} is too small, at least {required} generators are needed")]
    RankTooSmall { rank: usize, required: usize },

    #[error("expected an odd positive exponent, got {0}")]
    EvenExponent(i64),

    /// The exhaustive search stopped before finding an answer. Every
    /// connected cover of degree at most `lower_bound` was examined.
    #[error("search budget exhausted: {reason} (all degrees <= {lower_bound} examined)")]
    BudgetExceeded { lower_bound: usize, reason: String },

    /// A postcondition that the construction guarantees did not hold.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
