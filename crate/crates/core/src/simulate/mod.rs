//! Synthetic cohorts with a known one-factor structure.
//!
//! Every student draws from their own stream, seeded by
//! `seeds::derive(seed, student_index)`, so results never depend on the
//! order in which students are processed.

mod attempts;
mod cohort;

pub use attempts::{drive_attempts, simulate_attempts, SimStudent, SLOPE};
pub use cohort::{sample_students, simulate_matrix, CohortSpec, Discretization, SimItem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulateError {
    #[error("cohort needs at least one student")]
    NoStudents,
    #[error("cohort needs at least one item")]
    NoItems,
    #[error("item {label}: loading {loading} must satisfy loading^2 < 1")]
    InvalidLoading { label: String, loading: f64 },
    #[error("item {0}: non-finite or negative parameter")]
    InvalidParameter(String),
    #[error("item label {0} is reserved or repeated")]
    InvalidLabel(String),
}

#[cfg(test)]
mod tests;
