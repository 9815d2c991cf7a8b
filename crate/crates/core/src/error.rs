use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("word {word} is not a minimal coset representative for Gr({k},{n})")]
    InvalidWord { word: String, k: usize, n: usize },

    /// An invariant of a construction was violated. Seeing this is a bug.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// The graph does not admit a coboundary with δ∘δ = 0.
    #[error("cochain complex construction failed: {0}")]
    Construction(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no dominance center for cell {cell}: {reason}")]
    NoCenter { cell: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
