//! Items, the question-bank document, and grading.
//!
//! Items are immutable and grading is pure, so both can be shared freely
//! across threads. Prompts carry display math as opaque markup; nothing
//! here interprets it.

mod bank;
mod generated;
mod grade;
mod item;

use thiserror::Error;

use crate::mathcore::rational::{parse_rational, Rational, RationalParseError};

pub use bank::{validate_bank, BankDocument, BankIssue, BANK_VERSION};
pub(crate) use bank::label_is_valid;
pub use generated::{
    determinant_equation_markup, instantiate_generated_item, stepwise_item_from_task,
    walkthrough_item, COEFFICIENT_LABELS, ROOT_GROUP, ROOT_LABELS, WALKTHROUGH_ITEM_ID,
};
pub use grade::{
    grade, grade_drag_drop, grade_multiple_choice, grade_stepwise, FieldScore, GradeResult,
    OrderingPolicy, PartVerdict, Verdict,
};
pub use item::{
    DragDropItem, FieldKey, Item, MultipleChoiceItem, Payload, RevealMode, Step, StepwiseItem,
    Submission,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradeError {
    #[error("submission targets unknown item {0}")]
    UnknownItem(String),
    #[error("item {item} expects a {expected} payload")]
    PayloadMismatch { item: String, expected: &'static str },
    #[error("item {item} has no field {label}")]
    UnknownField { item: String, label: String },
    #[error("option {index} outside 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("token {0} placed in more than one slot")]
    DuplicateToken(String),
    #[error("unknown slot {0}")]
    UnknownSlot(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BankError {
    #[error("bank document is not valid: {0}")]
    Syntax(String),
    #[error("unsupported bank version {0}")]
    UnsupportedVersion(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unparseable answer: {0}")]
pub struct Unparseable(#[from] pub RationalParseError);

/// Reads a typed answer: optional sign, integer, finite decimal, or `p/q`.
pub fn parse_numeric_answer(raw: &str) -> Result<Rational, Unparseable> {
    Ok(parse_rational(raw)?)
}
