use std::fmt;

/// Errors produced by dataset validation, feature extraction, ranking and
/// subset evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum FirError {
    /// A matrix entry is NaN or infinite.
    InvalidValue { row: usize, col: usize },
    /// A label is outside {0, 1}.
    InvalidLabel { row: usize, value: f64 },
    /// Empty matrix or empty input collection.
    EmptyInput(String),
    /// All values identical; higher moments are undefined.
    DegenerateDistribution,
    /// Mask violates its invariants (size, connectivity, dimensions).
    InvalidMask(String),
    /// No valid pixel pair for the co-occurrence offset.
    EmptyGlcm,
    /// A class has too few samples for the requested operation.
    InsufficientClass(String),
    /// Too few samples overall (e.g. n <= k for a kNN graph).
    InsufficientSamples { needed: usize, got: usize },
    /// Method identifier not among the supported rankers.
    UnknownMethod(String),
    /// Penalty grid is not strictly decreasing.
    InvalidGrid,
    /// Iterative solver failed to converge.
    ConvergenceFailure(String),
    /// Dimension mismatch between two inputs.
    ShapeError(String),
    /// Subset-size bound outside 1..=d.
    InvalidBound { kmax: usize, d: usize },
    /// Feature index outside 1..=d.
    InvalidIndex { index: usize, d: usize },
    /// Exhaustive search guard: too many features to enumerate.
    TooManyFeatures { d: usize, limit: usize },
    /// Every fold was skipped; no AUC could be computed.
    EvaluationFailure(String),
    /// Malformed input file.
    ParseError { path: String, detail: String },
    /// No usable input found (e.g. zero image/mask pairs).
    NoInput(String),
    /// Underlying I/O failure.
    Io(String),
}

impl fmt::Display for FirError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FirError::InvalidValue { row, col } => {
                write!(f, "non-finite value at row {row}, column {col}")
            }
            FirError::InvalidLabel { row, value } => {
                write!(f, "label {value} at row {row} is not 0 or 1")
            }
            FirError::EmptyInput(what) => write!(f, "empty input: {what}"),
            FirError::DegenerateDistribution => {
                write!(
                    f,
                    "all values identical; kurtosis and skewness are undefined"
                )
            }
            FirError::InvalidMask(detail) => write!(f, "invalid mask: {detail}"),
            FirError::EmptyGlcm => write!(f, "no valid pixel pair for the co-occurrence offset"),
            FirError::InsufficientClass(detail) => {
                write!(f, "insufficient samples in a class: {detail}")
            }
            FirError::InsufficientSamples { needed, got } => {
                write!(f, "needs at least {needed} samples, got {got}")
            }
            FirError::UnknownMethod(name) => write!(f, "unknown ranking method `{name}`"),
            FirError::InvalidGrid => write!(f, "penalty grid must be strictly decreasing"),
            FirError::ConvergenceFailure(detail) => write!(f, "failed to converge: {detail}"),
            FirError::ShapeError(detail) => write!(f, "shape mismatch: {detail}"),
            FirError::InvalidBound { kmax, d } => {
                write!(f, "subset size bound {kmax} outside 1..={d}")
            }
            FirError::InvalidIndex { index, d } => {
                write!(f, "feature index {index} outside 1..={d}")
            }
            FirError::TooManyFeatures { d, limit } => {
                write!(
                    f,
                    "{d} features exceed the exhaustive-search limit of {limit}"
                )
            }
            FirError::EvaluationFailure(detail) => write!(f, "evaluation failed: {detail}"),
            FirError::ParseError { path, detail } => write!(f, "cannot parse {path}: {detail}"),
            FirError::NoInput(detail) => write!(f, "no input: {detail}"),
            FirError::Io(detail) => write!(f, "i/o error: {detail}"),
        }
    }
}

impl std::error::Error for FirError {}

impl From<std::io::Error> for FirError {
    fn from(e: std::io::Error) -> Self {
        FirError::Io(e.to_string())
    }
}
