use thiserror::Error;

/// Everything that can go wrong across the crate. Parse-level problems get
/// their own variants so the CLI can report them distinctly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index must be nonempty here")]
    EmptyIndex,
    #[error("index parts must be positive")]
    ZeroPart,
    #[error("index text is empty")]
    EmptyIndexText,
    #[error("malformed index part {0:?}")]
    MalformedPart(String),
    #[error("index is not admissible (first part must be at least 2)")]
    NonAdmissibleIndex,
    #[error("word letters must be 0 or 1")]
    BadLetter,
    #[error("word is not admissible (must start with 0 and end with 1)")]
    NonAdmissibleWord,
    #[error("truncation must be at least {0}")]
    TruncationTooSmall(u64),
    #[error("truncation must be at most {0}")]
    TruncationTooLarge(u64),
    #[error("poset has more than {0} vertices")]
    TooManyVertices(usize),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("cover relation loops through {0:?}")]
    Cycle(String),
    #[error("vertex {0:?} has no label")]
    MissingLabel(String),
    #[error("label of vertex {0:?} must be 0 or 1")]
    BadLabel(String),
    #[error("label is given for unknown vertex {0:?}")]
    LabelForUnknownVertex(String),
    #[error("poset is not admissible (minimal vertices must be labeled 1, maximal vertices 0)")]
    NonAdmissiblePoset,
    #[error("vertices {0:?} and {1:?} must be incomparable")]
    NotIncomparable(String, String),
    #[error("series diverges: {0}")]
    Divergent(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("malformed shape: {0}")]
    MalformedShape(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
