use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::assessment::{label_is_valid, validate_bank, BankDocument, Item, OrderingPolicy};
use crate::mathcore::rational::{int, serde_rational, Rational};
use crate::mathcore::DetTemplate;

use super::matrix::TOTAL_LABEL;
use super::SessionError;

pub const QUIZ_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackMode {
    #[default]
    Immediate,
    OnFinalize,
}

fn default_max_attempts() -> u32 {
    1
}

fn default_scale() -> Rational {
    int(100)
}

fn default_weight() -> Rational {
    int(1)
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuizSettings {
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<u64>,
    #[serde(default = "yes")]
    pub shuffle_options: bool,
    #[serde(default)]
    pub feedback_mode: FeedbackMode,
    /// Points for a fully correct attempt.
    #[serde(default = "default_scale", with = "serde_rational")]
    pub point_scale: Rational,
    #[serde(default)]
    pub ordering: OrderingPolicy,
}

impl Default for QuizSettings {
    fn default() -> Self {
        Self {
            max_attempts: default_max_attempts(),
            time_limit_secs: None,
            shuffle_options: true,
            feedback_mode: FeedbackMode::Immediate,
            point_scale: default_scale(),
            ordering: OrderingPolicy::AnyOrder,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemSource {
    /// Inline item definition.
    Item(Item),
    /// Id of an item in a question bank.
    ItemRef(String),
    /// A fresh determinant-equation task per attempt.
    Generate(DetTemplate),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuizEntry {
    /// Column label in exported matrices, e.g. `B`.
    pub label: String,
    /// Relative share of the point scale.
    #[serde(default = "default_weight", with = "serde_rational")]
    pub weight: Rational,
    /// Item difficulty used by the simulator.
    #[serde(default, skip_serializing_if = "f64_is_zero")]
    pub difficulty: f64,
    #[serde(flatten)]
    pub source: ItemSource,
}

fn f64_is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quiz {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub settings: QuizSettings,
    pub entries: Vec<QuizEntry>,
}

impl Quiz {
    /// Points each entry is worth on the quiz's scale.
    pub fn entry_points(&self) -> Vec<Rational> {
        let total: Rational = self.entries.iter().map(|e| &e.weight).sum();
        self.entries
            .iter()
            .map(|e| {
                if total.is_zero() {
                    Rational::zero()
                } else {
                    &self.settings.point_scale * &e.weight / &total
                }
            })
            .collect()
    }

    /// Replaces `item_ref` entries with the referenced bank items.
    pub fn resolve(mut self, bank: &[Item]) -> Result<Quiz, SessionError> {
        for entry in &mut self.entries {
            if let ItemSource::ItemRef(id) = &entry.source {
                let item = bank
                    .iter()
                    .find(|i| i.id() == id)
                    .ok_or_else(|| SessionError::InvalidQuiz(format!("unknown item reference {id}")))?;
                entry.source = ItemSource::Item(item.clone());
            }
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), SessionError> {
        let invalid = |m: String| Err(SessionError::InvalidQuiz(format!("{}: {m}", self.id)));
        if self.id.trim().is_empty() {
            return invalid("empty quiz id".into());
        }
        if self.entries.is_empty() {
            return invalid("quiz has no items".into());
        }
        if self.settings.max_attempts == 0 {
            return invalid("max_attempts must be at least 1".into());
        }
        if self.settings.point_scale.is_negative() {
            return invalid("point_scale is negative".into());
        }
        let mut labels = BTreeSet::new();
        let mut fixed = Vec::new();
        for entry in &self.entries {
            if !label_is_valid(&entry.label) || entry.label == TOTAL_LABEL {
                return invalid(format!("entry label {:?} is reserved or malformed", entry.label));
            }
            if !labels.insert(entry.label.as_str()) {
                return invalid(format!("entry label {} used twice", entry.label));
            }
            if entry.weight.is_negative() {
                return invalid(format!("entry {} has a negative weight", entry.label));
            }
            match &entry.source {
                ItemSource::Item(item) => fixed.push(item.clone()),
                ItemSource::ItemRef(id) => return invalid(format!("unresolved item reference {id}")),
                ItemSource::Generate(t) => {
                    t.validate().map_err(SessionError::Generation)?;
                }
            }
        }
        let issues = validate_bank(&fixed);
        if let Some(first) = issues.first() {
            return invalid(first.to_string());
        }
        Ok(())
    }
}

/// A quiz file: the quiz plus optional embedded bank items for `item_ref`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuizDocument {
    pub version: u32,
    pub quiz: Quiz,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<Item>,
}

impl QuizDocument {
    pub fn parse(text: &str) -> Result<Self, SessionError> {
        let doc: QuizDocument =
            serde_json::from_str(text).map_err(|e| SessionError::InvalidQuiz(e.to_string()))?;
        if doc.version != QUIZ_VERSION {
            return Err(SessionError::InvalidQuiz(format!("unsupported quiz version {}", doc.version)));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("quiz documents always serialize");
        out.push('\n');
        out
    }

    /// Resolves references against the embedded items, then `banks`, and validates.
    pub fn into_quiz(self, banks: &[BankDocument]) -> Result<Quiz, SessionError> {
        let mut pool = self.items;
        for bank in banks {
            pool.extend(bank.items.iter().cloned());
        }
        let quiz = self.quiz.resolve(&pool)?;
        quiz.validate()?;
        Ok(quiz)
    }
}
