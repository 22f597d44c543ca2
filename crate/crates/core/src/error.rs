use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line direction must have positive coordinates")]
    NonPositiveDirection,

    #[error("invalid rectangle: {0}")]
    InvalidRect(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("both modules are trivial")]
    BothTrivial,

    #[error("brute-force bottleneck limited to {limit} points, got {points}")]
    TooLarge { points: usize, limit: usize },

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("anchor height {0} must lie above every candidate point")]
    InvalidAnchor(String),

    #[error("weighted cost is not affine near the limit direction")]
    NonAffineLimit,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
