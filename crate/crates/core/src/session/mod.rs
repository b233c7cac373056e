//! Quiz attempts: seeded instantiation, grading on submit, time and
//! attempt limits, an append-only event log, and response-matrix export.

mod attempt;
mod engine;
mod events;
mod matrix;
mod quiz;

pub use attempt::{
    instantiate, Attempt, AttemptItem, AttemptState, FeedbackView, ItemSummary, ScoreSummary, StoredResponse,
};
pub use engine::SessionEngine;
pub use events::{parse_log, replay, write_log, Event, EventStore, FileStore, MemoryStore, LOG_HEADER};
pub use matrix::{export_matrix, matrix_columns, Column, ColumnKind, Granularity, ResponseMatrix, TOTAL_LABEL};
pub use quiz::{FeedbackMode, ItemSource, Quiz, QuizDocument, QuizEntry, QuizSettings, QUIZ_VERSION};

use crate::assessment::GradeError;
use crate::mathcore::MathError;

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("unknown quiz {0}")]
    UnknownQuiz(String),
    #[error("unknown attempt {0}")]
    UnknownAttempt(String),
    #[error("item {0} is not part of this attempt")]
    UnknownItem(String),
    #[error("student {student} has used all {max} attempts")]
    AttemptLimitReached { student: String, max: u32 },
    #[error("attempt {0} is no longer in progress")]
    AttemptNotActive(String),
    #[error("time limit of attempt {0} has passed")]
    TimeExpired(String),
    #[error("attempt {0} is already finalized")]
    AlreadyFinalized(String),
    #[error("invalid quiz: {0}")]
    InvalidQuiz(String),
    #[error(transparent)]
    Grade(GradeError),
    #[error("item generation failed: {0}")]
    Generation(MathError),
    #[error("event store: {0}")]
    Store(String),
    #[error("event log replay: {0}")]
    Replay(String),
    #[error("response matrix: {0}")]
    Matrix(String),
}

#[cfg(test)]
mod tests;
