//! Classical-test-theory statistics over response matrices.
//!
//! Everything here is a pure function of its input. Multivariate
//! statistics use listwise deletion; univariate ones use every available
//! value.

mod correlation;
mod descriptive;
mod factor;
mod reliability;
mod report;

pub use correlation::{correlation_grid, correlation_matrix, pearson, CorrelationMatrix};
pub use descriptive::{descriptives, histogram, sample_variance, sturges_bins, DescriptiveStats, Histogram};
pub use factor::{fit_one_factor, mcdonald_omega, FactorModel, MAX_ITERATIONS, TOLERANCE};
pub use reliability::{alpha_from_covariance, covariance_matrix, cronbach_alpha};
pub use report::{
    reliability_report, AnalysisGranularity, ColumnStats, HistogramSeries, Note, NoteKind, ReliabilityReport,
    ReportConfig, OMEGA_FORMULA,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("zero variance")]
    ZeroVariance,
    #[error("total score has zero variance")]
    DegenerateTotal,
    #[error("need at least {needed} items, got {got}")]
    TooFewItems { needed: usize, got: usize },
    #[error("inputs of different lengths ({left} and {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("matrix is not square and symmetric")]
    NotSymmetric,
    #[error("non-finite value in input")]
    NonFinite,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
