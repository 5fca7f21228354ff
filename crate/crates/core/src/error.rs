use serde_json::Value;
use thiserror::Error;

/// Errors raised by the library. Each variant carries a stable machine code
/// and an optional JSON witness describing the offending input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid rank: {0}")]
    InvalidRank(String),
    #[error("invalid transition matrix: {0}")]
    InvalidTransitionMatrix(String),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    EnumerationBudgetExceeded { needed: u128, budget: u128 },
    #[error("operation requires an irreducible transition matrix")]
    RequiresIrreducible,
    #[error("word is not admissible: {0:?}")]
    NotAdmissible(Vec<usize>),
    #[error("truncation level {0} is too small (need at least 2)")]
    TruncationTooSmall(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("summability violation: q = {q} must exceed 2/p = {bound}")]
    SummabilityViolation { q: f64, bound: f64 },
    #[error("insufficient spectrum: {distinct} distinct values, need at least {needed}")]
    InsufficientSpectrum { distinct: usize, needed: usize },
    #[error("operation requires an even triple")]
    RequiresEvenTriple,
    #[error("invalid presentation: {0}")]
    PresentationInvalid(String),
    #[error("operation requires square faces, got arity {0}")]
    RequiresSquares(usize),
    #[error("presentation is not BM reducible: {0}")]
    NotBMReducible(String),
    #[error("invalid dimension table: {0}")]
    InvalidTable(String),
    #[error("degenerate Euclidean polygon: the only root is x = 0")]
    DegenerateEuclidean,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("no sign change on the bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("did not converge: {0}")]
    NoConvergence(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::InvalidRank(_) => "InvalidRank",
            Error::InvalidTransitionMatrix(_) => "InvalidTransitionMatrix",
            Error::EnumerationBudgetExceeded { .. } => "EnumerationBudgetExceeded",
            Error::RequiresIrreducible => "RequiresIrreducible",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::TruncationTooSmall(_) => "TruncationTooSmall",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::SummabilityViolation { .. } => "SummabilityViolation",
            Error::InsufficientSpectrum { .. } => "InsufficientSpectrum",
            Error::RequiresEvenTriple => "RequiresEvenTriple",
            Error::PresentationInvalid(_) => "PresentationInvalid",
            Error::RequiresSquares(_) => "RequiresSquares",
            Error::NotBMReducible(_) => "NotBMReducible",
            Error::InvalidTable(_) => "InvalidTable",
            Error::DegenerateEuclidean => "DegenerateEuclidean",
            Error::InvalidPolygon(_) => "InvalidPolygon",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::Overflow(_) => "Overflow",
            Error::NoConvergence(_) => "NoConvergence",
            Error::Io(_) => "Io",
            Error::Parse(_) => "Parse",
            Error::UnsupportedFormat(_) => "UnsupportedFormat",
        }
    }

    /// Structured witness for machine-readable error output.
    pub fn witness(&self) -> Value {
        use serde_json::json;
        match self {
            Error::EnumerationBudgetExceeded { needed, budget } => {
                json!({ "needed": needed.to_string(), "budget": budget.to_string() })
            }
            Error::NotAdmissible(w) => json!(w),
            Error::TruncationTooSmall(n) => json!({ "levels": n }),
            Error::SummabilityViolation { q, bound } => json!({ "q": q, "bound": bound }),
            Error::InsufficientSpectrum { distinct, needed } => {
                json!({ "distinct": distinct, "needed": needed })
            }
            Error::RequiresSquares(k) => json!({ "arity": k }),
            Error::BracketFailure { lo, hi } => json!({ "lo": lo, "hi": hi }),
            Error::RequiresIrreducible | Error::RequiresEvenTriple | Error::DegenerateEuclidean => {
                Value::Null
            }
            Error::InvalidGraph(s)
            | Error::InvalidRank(s)
            | Error::InvalidTransitionMatrix(s)
            | Error::InvalidParameter(s)
            | Error::PresentationInvalid(s)
            | Error::NotBMReducible(s)
            | Error::InvalidTable(s)
            | Error::InvalidPolygon(s)
            | Error::Overflow(s)
            | Error::NoConvergence(s)
            | Error::Io(s)
            | Error::Parse(s)
            | Error::UnsupportedFormat(s) => Value::String(s.clone()),
        }
    }
}

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
