use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numeric core and the analysis harnesses.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dim { expected: usize, found: usize },
    #[error("requested {requested} components but the valid range is 1..={max}")]
    Rank { requested: usize, max: usize },
    #[error("zero-norm vector")]
    ZeroVector,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("direction is not unit length (norm {norm})")]
    Norm { norm: f64 },
    #[error("cardinality error: {0}")]
    Cardinality(String),
    #[error("numerical failure: {0}")]
    Numerics(&'static str),
    #[error("token metadata required: {0}")]
    MetadataRequired(&'static str),
    #[error("selection matched no rows")]
    EmptySelection,
    #[error("sentence {0} not found in store")]
    NotFound(u64),
    #[error("insufficient annotation for lemma {lemma:?}: {reason}")]
    InsufficientAnnotation { lemma: String, reason: String },
    #[error("invalid store: {0}")]
    InvalidStore(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of the numerical machinery itself, as opposed to bad
    /// input data.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numerics(_) | Error::Rank { .. } | Error::ZeroVector | Error::DegenerateInput(_)
        )
    }
}
