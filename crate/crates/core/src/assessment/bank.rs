//! The question-bank document and its well-formedness checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::item::{DragDropItem, Item, MultipleChoiceItem, StepwiseItem};
use super::BankError;
use crate::mathcore::rational::{format_rational, Rational};

pub const BANK_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankDocument {
    pub version: u32,
    pub items: Vec<Item>,
}

impl BankDocument {
    pub fn new(items: Vec<Item>) -> Self {
        Self {
            version: BANK_VERSION,
            items,
        }
    }

    pub fn parse(text: &str) -> Result<Self, BankError> {
        let doc: BankDocument = serde_json::from_str(text).map_err(|e| BankError::Syntax(e.to_string()))?;
        if doc.version != BANK_VERSION {
            return Err(BankError::UnsupportedVersion(doc.version));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("bank documents always serialize");
        out.push('\n');
        out
    }

    pub fn find(&self, id: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.id() == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum BankIssue {
    DuplicateId { item: String },
    EmptyId,
    NoSteps { item: String },
    EmptyStep { item: String, step: usize },
    DuplicateFieldLabel { item: String, label: String },
    InvalidLabel { item: String, label: String },
    NegativeWeight { item: String, label: String },
    WeightSum { item: String, sum: String },
    GroupWeightMismatch { item: String, group: String },
    TooFewOptions { item: String },
    CorrectIndexOutOfRange { item: String, index: usize, len: usize },
    DuplicateSlot { item: String, slot: String },
    TooFewTokens { item: String },
    AnswerNotTotal { item: String, slot: String },
    UnknownAnswerSlot { item: String, slot: String },
    UnknownAnswerToken { item: String, token: String },
    NonInjectiveAnswer { item: String, token: String },
}

impl fmt::Display for BankIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use BankIssue::*;
        match self {
            DuplicateId { item } => write!(f, "{item}: duplicate item id"),
            EmptyId => write!(f, "item with an empty id"),
            NoSteps { item } => write!(f, "{item}: stepwise item has no steps"),
            EmptyStep { item, step } => write!(f, "{item}: step {step} has no fields"),
            DuplicateFieldLabel { item, label } => write!(f, "{item}: field label {label} used twice"),
            InvalidLabel { item, label } => {
                write!(f, "{item}: label {label:?} must be non-empty and free of '.', ',', quotes")
            }
            NegativeWeight { item, label } => write!(f, "{item}: field {label} has a negative weight"),
            WeightSum { item, sum } => write!(f, "{item}: field weights sum to {sum}, expected 1"),
            GroupWeightMismatch { item, group } => {
                write!(f, "{item}: fields in group {group} have unequal weights")
            }
            TooFewOptions { item } => write!(f, "{item}: multiple-choice item needs at least 2 options"),
            CorrectIndexOutOfRange { item, index, len } => {
                write!(f, "{item}: correct_index {index} outside 0..{len}")
            }
            DuplicateSlot { item, slot } => write!(f, "{item}: slot {slot} listed twice"),
            TooFewTokens { item } => write!(f, "{item}: fewer tokens than slots"),
            AnswerNotTotal { item, slot } => write!(f, "{item}: slot {slot} has no answer"),
            UnknownAnswerSlot { item, slot } => write!(f, "{item}: answer names unknown slot {slot}"),
            UnknownAnswerToken { item, token } => write!(f, "{item}: answer uses unknown token {token}"),
            NonInjectiveAnswer { item, token } => write!(f, "{item}: token {token} answers more than one slot"),
        }
    }
}

/// Labels end up as CSV headers and `item.field` column names.
pub(crate) fn label_is_valid(label: &str) -> bool {
    !label.trim().is_empty() && !label.contains(['.', ',', '"', '\n', '\r'])
}

/// Lists every invariant violation in `items`; empty iff the bank is well formed.
pub fn validate_bank(items: &[Item]) -> Vec<BankIssue> {
    let mut issues = Vec::new();
    let mut seen = BTreeSet::new();
    for item in items {
        if item.id().trim().is_empty() {
            issues.push(BankIssue::EmptyId);
        } else if !seen.insert(item.id()) {
            issues.push(BankIssue::DuplicateId {
                item: item.id().to_string(),
            });
        }
        match item {
            Item::Stepwise(i) => check_stepwise(i, &mut issues),
            Item::MultipleChoice(i) => check_choice(i, &mut issues),
            Item::DragDrop(i) => check_drag_drop(i, &mut issues),
        }
    }
    issues
}

fn check_stepwise(item: &StepwiseItem, issues: &mut Vec<BankIssue>) {
    let id = || item.id.clone();
    if item.steps.is_empty() {
        issues.push(BankIssue::NoSteps { item: id() });
        return;
    }
    for (n, step) in item.steps.iter().enumerate() {
        if step.fields.is_empty() {
            issues.push(BankIssue::EmptyStep { item: id(), step: n + 1 });
        }
    }
    let mut labels = BTreeSet::new();
    let mut total = Rational::zero();
    let mut group_weights: BTreeMap<&str, BTreeSet<&Rational>> = BTreeMap::new();
    for (_, field) in item.fields() {
        if !labels.insert(field.label.as_str()) {
            issues.push(BankIssue::DuplicateFieldLabel {
                item: id(),
                label: field.label.clone(),
            });
        }
        if !label_is_valid(&field.label) {
            issues.push(BankIssue::InvalidLabel {
                item: id(),
                label: field.label.clone(),
            });
        }
        if field.weight.is_negative() {
            issues.push(BankIssue::NegativeWeight {
                item: id(),
                label: field.label.clone(),
            });
        }
        total += &field.weight;
        if let Some(g) = &field.group {
            group_weights.entry(g).or_default().insert(&field.weight);
        }
    }
    if !total.is_one() {
        issues.push(BankIssue::WeightSum {
            item: id(),
            sum: format_rational(&total),
        });
    }
    for (group, weights) in group_weights {
        if weights.len() > 1 {
            issues.push(BankIssue::GroupWeightMismatch {
                item: id(),
                group: group.to_string(),
            });
        }
    }
}

fn check_choice(item: &MultipleChoiceItem, issues: &mut Vec<BankIssue>) {
    if item.options.len() < 2 {
        issues.push(BankIssue::TooFewOptions {
            item: item.id.clone(),
        });
    }
    if item.correct_index >= item.options.len() {
        issues.push(BankIssue::CorrectIndexOutOfRange {
            item: item.id.clone(),
            index: item.correct_index,
            len: item.options.len(),
        });
    }
}

fn check_drag_drop(item: &DragDropItem, issues: &mut Vec<BankIssue>) {
    let id = || item.id.clone();
    let mut slots = BTreeSet::new();
    for slot in &item.slots {
        if !slots.insert(slot.as_str()) {
            issues.push(BankIssue::DuplicateSlot {
                item: id(),
                slot: slot.clone(),
            });
        }
        if !label_is_valid(slot) {
            issues.push(BankIssue::InvalidLabel {
                item: id(),
                label: slot.clone(),
            });
        }
    }
    if item.tokens.len() < item.slots.len() {
        issues.push(BankIssue::TooFewTokens { item: id() });
    }
    for slot in &item.slots {
        if !item.answer.contains_key(slot) {
            issues.push(BankIssue::AnswerNotTotal {
                item: id(),
                slot: slot.clone(),
            });
        }
    }
    let mut used = BTreeSet::new();
    for (slot, token) in &item.answer {
        if !slots.contains(slot.as_str()) {
            issues.push(BankIssue::UnknownAnswerSlot {
                item: id(),
                slot: slot.clone(),
            });
        }
        if !item.tokens.contains(token) {
            issues.push(BankIssue::UnknownAnswerToken {
                item: id(),
                token: token.clone(),
            });
        }
        if !used.insert(token) {
            issues.push(BankIssue::NonInjectiveAnswer {
                item: id(),
                token: token.clone(),
            });
        }
    }
}
