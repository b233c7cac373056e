use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::mathcore::rational::{format_rational, serde_rational, Rational};

/// One graded input box of a stepwise item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldKey {
    pub label: String,
    #[serde(with = "serde_rational")]
    pub expected: Rational,
    #[serde(with = "serde_rational")]
    pub weight: Rational,
    /// Fields sharing a group may be answered in any order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Shown when the field is answered incorrectly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback: Option<String>,
    /// Difficulty offset used by the cohort simulator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difficulty: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub prompt: String,
    pub fields: Vec<FieldKey>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RevealMode {
    #[default]
    AllAtOnce,
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepwiseItem {
    pub id: String,
    pub prompt: String,
    pub steps: Vec<Step>,
    #[serde(default)]
    pub reveal_mode: RevealMode,
}

impl StepwiseItem {
    /// Fields in authoring order, each with its one-based step number.
    pub fn fields(&self) -> impl Iterator<Item = (usize, &FieldKey)> {
        self.steps
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.fields.iter().map(move |f| (i + 1, f)))
    }

    /// A submission that answers every field with its key.
    pub fn key_submission(&self) -> Submission {
        Submission {
            item_id: self.id.clone(),
            payload: Payload::Fields(
                self.fields()
                    .map(|(_, f)| (f.label.clone(), format_rational(&f.expected)))
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultipleChoiceItem {
    pub id: String,
    pub prompt: String,
    pub options: Vec<String>,
    pub correct_index: usize,
    #[serde(default)]
    pub shuffle: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback: Option<String>,
}

impl MultipleChoiceItem {
    /// Returns the item with options permuted by `seed` and the
    /// permutation, where `order[k]` is the original index shown at `k`.
    pub fn shuffled(&self, seed: u64) -> (MultipleChoiceItem, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.options.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let options = order.iter().map(|&i| self.options[i].clone()).collect();
        let correct_index = order
            .iter()
            .position(|&i| i == self.correct_index)
            .unwrap_or(self.correct_index);
        let item = MultipleChoiceItem {
            options,
            correct_index,
            ..self.clone()
        };
        (item, order)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DragDropItem {
    pub id: String,
    pub prompt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_ref: Option<String>,
    pub slots: Vec<String>,
    /// Draggable blocks; entries beyond the answer set are distractors.
    pub tokens: Vec<String>,
    /// Correct token for every slot.
    pub answer: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback: Option<String>,
}

impl DragDropItem {
    pub fn with_shuffled_tokens(&self, seed: u64) -> DragDropItem {
        let mut tokens = self.tokens.clone();
        tokens.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        DragDropItem {
            tokens,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Item {
    Stepwise(StepwiseItem),
    MultipleChoice(MultipleChoiceItem),
    DragDrop(DragDropItem),
}

impl Item {
    pub fn id(&self) -> &str {
        match self {
            Item::Stepwise(i) => &i.id,
            Item::MultipleChoice(i) => &i.id,
            Item::DragDrop(i) => &i.id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Item::Stepwise(_) => "stepwise",
            Item::MultipleChoice(_) => "multiple_choice",
            Item::DragDrop(_) => "drag_drop",
        }
    }

    /// Labels of the per-field sub-scores this item reports, in order.
    pub fn part_labels(&self) -> Vec<String> {
        match self {
            Item::Stepwise(i) => i.fields().map(|(_, f)| f.label.clone()).collect(),
            Item::MultipleChoice(_) => vec![CHOICE_PART.to_string()],
            Item::DragDrop(i) => i.slots.clone(),
        }
    }
}

pub(crate) const CHOICE_PART: &str = "choice";

/// What a student sends for one item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub item_id: String,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    /// Raw text per field label.
    Fields(BTreeMap<String, String>),
    /// Index into the options as presented.
    Choice(usize),
    /// Token placed in each filled slot.
    Placements(BTreeMap<String, String>),
}

impl Submission {
    pub fn fields<'a>(item_id: &str, values: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Submission {
            item_id: item_id.to_string(),
            payload: Payload::Fields(
                values
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .collect(),
            ),
        }
    }

    pub fn choice(item_id: &str, index: usize) -> Self {
        Submission {
            item_id: item_id.to_string(),
            payload: Payload::Choice(index),
        }
    }

    pub fn placements<'a>(
        item_id: &str,
        values: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        Submission {
            item_id: item_id.to_string(),
            payload: Payload::Placements(
                values
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .collect(),
            ),
        }
    }
}
