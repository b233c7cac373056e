//! Grading of submissions against item keys.
//!
//! Grading is a pure function of `(item, submission, policy)`. Numeric keys
//! are compared exactly as rationals.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::item::{
    DragDropItem, Item, MultipleChoiceItem, Payload, StepwiseItem, Submission, CHOICE_PART,
};
use super::parse_numeric_answer;
use super::GradeError;
use crate::mathcore::rational::{int, serde_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingPolicy {
    /// Values in a group are matched as a multiset.
    #[default]
    AnyOrder,
    /// Every field is compared with its own key, groups included.
    AscendingRequired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    Incorrect,
    Missing,
    Unparseable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartVerdict {
    pub label: String,
    /// One-based step for stepwise fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    pub verdict: Verdict,
    pub feedback: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldScore {
    pub label: String,
    /// 1 when the part is correct, else 0.
    pub score: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeResult {
    pub item_id: String,
    #[serde(with = "serde_rational")]
    pub score: Rational,
    pub parts: Vec<PartVerdict>,
    pub field_scores: Vec<FieldScore>,
}

impl GradeResult {
    pub fn is_fully_correct(&self) -> bool {
        self.score.is_one()
    }

    pub fn field_score(&self, label: &str) -> Option<u8> {
        self.field_scores
            .iter()
            .find(|f| f.label == label)
            .map(|f| f.score)
    }

    fn from_parts(item_id: &str, score: Rational, parts: Vec<PartVerdict>) -> Self {
        let field_scores = parts
            .iter()
            .map(|p| FieldScore {
                label: p.label.clone(),
                score: u8::from(p.verdict == Verdict::Correct),
            })
            .collect();
        GradeResult {
            item_id: item_id.to_string(),
            score,
            parts,
            field_scores,
        }
    }
}

/// Grades any item type; stepwise items use `policy` for grouped fields.
pub fn grade(item: &Item, sub: &Submission, policy: OrderingPolicy) -> Result<GradeResult, GradeError> {
    match item {
        Item::Stepwise(i) => grade_stepwise(i, sub, policy),
        Item::MultipleChoice(i) => grade_multiple_choice(i, sub),
        Item::DragDrop(i) => grade_drag_drop(i, sub),
    }
}

fn check_target(item_id: &str, sub: &Submission) -> Result<(), GradeError> {
    if sub.item_id != item_id {
        return Err(GradeError::UnknownItem(sub.item_id.clone()));
    }
    Ok(())
}

enum Entry {
    Missing,
    Unparseable(String),
    Value(Rational),
}

pub fn grade_stepwise(
    item: &StepwiseItem,
    sub: &Submission,
    policy: OrderingPolicy,
) -> Result<GradeResult, GradeError> {
    check_target(&item.id, sub)?;
    let Payload::Fields(raw) = &sub.payload else {
        return Err(GradeError::PayloadMismatch {
            item: item.id.clone(),
            expected: "fields",
        });
    };
    let known: BTreeSet<&str> = item.fields().map(|(_, f)| f.label.as_str()).collect();
    if let Some(extra) = raw.keys().find(|k| !known.contains(k.as_str())) {
        return Err(GradeError::UnknownField {
            item: item.id.clone(),
            label: extra.clone(),
        });
    }

    let fields: Vec<_> = item.fields().collect();
    let entries: Vec<Entry> = fields
        .iter()
        .map(|(_, f)| match raw.get(&f.label) {
            None => Entry::Missing,
            Some(s) if s.trim().is_empty() => Entry::Missing,
            Some(s) => match parse_numeric_answer(s) {
                Ok(v) => Entry::Value(v),
                Err(_) => Entry::Unparseable(s.clone()),
            },
        })
        .collect();

    let mut correct = vec![false; fields.len()];
    // Grouped fields under any-order are matched against the group's key multiset.
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (idx, (_, f)) in fields.iter().enumerate() {
        match (&f.group, policy) {
            (Some(g), OrderingPolicy::AnyOrder) => groups.entry(g.as_str()).or_default().push(idx),
            _ => correct[idx] = matches!(&entries[idx], Entry::Value(v) if *v == f.expected),
        }
    }
    for members in groups.values() {
        let mut unused: Vec<&Rational> = members.iter().map(|&i| &fields[i].1.expected).collect();
        for &idx in members {
            if let Entry::Value(v) = &entries[idx] {
                if let Some(pos) = unused.iter().position(|k| *k == v) {
                    unused.swap_remove(pos);
                    correct[idx] = true;
                }
            }
        }
    }

    let mut score = Rational::zero();
    let parts = fields
        .iter()
        .zip(&entries)
        .zip(&correct)
        .map(|(((step, f), entry), &ok)| {
            if ok {
                score += &f.weight;
            }
            let (verdict, feedback) = match entry {
                _ if ok => (Verdict::Correct, "Correct.".to_string()),
                Entry::Missing => (
                    Verdict::Missing,
                    format!("No answer for {}; check step {step}.", f.label),
                ),
                Entry::Unparseable(s) => (
                    Verdict::Unparseable,
                    format!("Could not read \"{}\" as a number; enter an integer, decimal, or fraction.", s.trim()),
                ),
                Entry::Value(_) => (
                    Verdict::Incorrect,
                    f.feedback.clone().unwrap_or_else(|| format!("Check step {step}.")),
                ),
            };
            PartVerdict {
                label: f.label.clone(),
                step: Some(*step),
                verdict,
                feedback,
            }
        })
        .collect();

    Ok(GradeResult::from_parts(&item.id, score, parts))
}

pub fn grade_multiple_choice(item: &MultipleChoiceItem, sub: &Submission) -> Result<GradeResult, GradeError> {
    check_target(&item.id, sub)?;
    let Payload::Choice(index) = sub.payload else {
        return Err(GradeError::PayloadMismatch {
            item: item.id.clone(),
            expected: "choice",
        });
    };
    if index >= item.options.len() {
        return Err(GradeError::IndexOutOfRange {
            index,
            len: item.options.len(),
        });
    }
    let ok = index == item.correct_index;
    let part = PartVerdict {
        label: CHOICE_PART.to_string(),
        step: None,
        verdict: if ok { Verdict::Correct } else { Verdict::Incorrect },
        feedback: if ok {
            "Correct.".to_string()
        } else {
            item.feedback
                .clone()
                .unwrap_or_else(|| "That option is not correct.".to_string())
        },
    };
    Ok(GradeResult::from_parts(&item.id, int(i64::from(ok)), vec![part]))
}

pub fn grade_drag_drop(item: &DragDropItem, sub: &Submission) -> Result<GradeResult, GradeError> {
    check_target(&item.id, sub)?;
    let Payload::Placements(placed) = &sub.payload else {
        return Err(GradeError::PayloadMismatch {
            item: item.id.clone(),
            expected: "placements",
        });
    };
    if let Some(slot) = placed.keys().find(|s| !item.slots.contains(s)) {
        return Err(GradeError::UnknownSlot(slot.clone()));
    }
    let mut used = BTreeSet::new();
    for token in placed.values() {
        if !used.insert(token) {
            return Err(GradeError::DuplicateToken(token.clone()));
        }
    }

    let mut hits = 0i64;
    let parts: Vec<PartVerdict> = item
        .slots
        .iter()
        .map(|slot| {
            let (verdict, feedback) = match placed.get(slot) {
                None => (Verdict::Missing, format!("Slot {slot} is empty.")),
                Some(t) if item.answer.get(slot) == Some(t) => {
                    hits += 1;
                    (Verdict::Correct, "Correct.".to_string())
                }
                Some(_) => (
                    Verdict::Incorrect,
                    item.feedback
                        .clone()
                        .unwrap_or_else(|| format!("The block in slot {slot} is misplaced.")),
                ),
            };
            PartVerdict {
                label: slot.clone(),
                step: None,
                verdict,
                feedback,
            }
        })
        .collect();
    let score = if item.slots.is_empty() {
        Rational::zero()
    } else {
        Rational::new(hits.into(), (item.slots.len() as i64).into())
    };
    Ok(GradeResult::from_parts(&item.id, score, parts))
}
