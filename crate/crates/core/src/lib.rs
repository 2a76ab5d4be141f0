//! Feature importance ranking toolkit.
//!
//! Extracts intensity, shape and texture features from annotated grayscale
//! lesion images, ranks features with fourteen filter methods behind one
//! interface, and evaluates rankings against an exhaustive linear-SVM
//! subset search through the `eff = m/n` effectiveness metric.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod imaging;
pub mod rankers;
pub mod svm;
pub mod synth;

mod numeric;

pub use dataset::{Dataset, EffResult, Ranking, RngSeed};
pub use error::FirError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, FirError>;
