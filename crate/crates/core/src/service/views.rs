//! Client-facing documents. Nothing here carries answer-key material:
//! expected values, correct indices and drag-drop answers stay on the server.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assessment::{GradeResult, Item, RevealMode};
use crate::mathcore::rational::{format_rational, serde_rational, Rational};
use crate::session::{Attempt, AttemptItem, AttemptState, FeedbackMode, Quiz};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuizSummary {
    pub id: String,
    pub title: String,
    pub items: usize,
    pub max_attempts: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_secs: Option<u64>,
    pub feedback_mode: FeedbackMode,
    #[serde(with = "serde_rational")]
    pub point_scale: Rational,
}

impl From<&Quiz> for QuizSummary {
    fn from(q: &Quiz) -> Self {
        Self {
            id: q.id.clone(),
            title: q.title.clone(),
            items: q.entries.len(),
            max_attempts: q.settings.max_attempts,
            time_limit_secs: q.settings.time_limit_secs,
            feedback_mode: q.settings.feedback_mode,
            point_scale: q.settings.point_scale.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldView {
    pub label: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepView {
    pub prompt: String,
    pub fields: Vec<FieldView>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ItemBody {
    Stepwise {
        prompt: String,
        reveal_mode: RevealMode,
        steps: Vec<StepView>,
    },
    MultipleChoice {
        prompt: String,
        options: Vec<String>,
    },
    DragDrop {
        prompt: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        image_ref: Option<String>,
        slots: Vec<String>,
        tokens: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemView {
    pub item_id: String,
    pub label: String,
    pub points: String,
    #[serde(flatten)]
    pub body: ItemBody,
}

impl From<&AttemptItem> for ItemView {
    fn from(served: &AttemptItem) -> Self {
        let body = match &served.item {
            Item::Stepwise(s) => ItemBody::Stepwise {
                prompt: s.prompt.clone(),
                reveal_mode: s.reveal_mode,
                steps: s
                    .steps
                    .iter()
                    .map(|step| StepView {
                        prompt: step.prompt.clone(),
                        fields: step
                            .fields
                            .iter()
                            .map(|f| FieldView {
                                label: f.label.clone(),
                                weight: format_rational(&f.weight),
                            })
                            .collect(),
                    })
                    .collect(),
            },
            Item::MultipleChoice(mc) => ItemBody::MultipleChoice {
                prompt: mc.prompt.clone(),
                options: mc.options.clone(),
            },
            Item::DragDrop(dd) => ItemBody::DragDrop {
                prompt: dd.prompt.clone(),
                image_ref: dd.image_ref.clone(),
                slots: dd.slots.clone(),
                tokens: dd.tokens.clone(),
            },
        };
        Self {
            item_id: served.item.id().to_string(),
            label: served.label.clone(),
            points: format_rational(&served.points),
            body,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseView {
    pub tries: u32,
    pub at: u64,
    /// Shown in immediate-feedback mode, and in every mode once finalized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<GradeResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptView {
    pub attempt_id: String,
    pub quiz_id: String,
    pub student_id: String,
    pub seed: u64,
    pub state: AttemptState,
    pub feedback_mode: FeedbackMode,
    pub started_at: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadline: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finalized_at: Option<u64>,
    pub items: Vec<ItemView>,
    pub responses: BTreeMap<String, ResponseView>,
}

impl From<&Attempt> for AttemptView {
    fn from(a: &Attempt) -> Self {
        let show = a.settings.feedback_mode == FeedbackMode::Immediate || a.state == AttemptState::Finalized;
        Self {
            attempt_id: a.id.clone(),
            quiz_id: a.quiz_id.clone(),
            student_id: a.student_id.clone(),
            seed: a.seed,
            state: a.state,
            feedback_mode: a.settings.feedback_mode,
            started_at: a.started_at,
            deadline: a.deadline(),
            finalized_at: a.finalized_at,
            items: a.items.iter().map(ItemView::from).collect(),
            responses: a
                .responses
                .iter()
                .map(|(id, r)| {
                    (
                        id.clone(),
                        ResponseView {
                            tries: r.tries,
                            at: r.at,
                            result: show.then(|| r.result.clone()),
                        },
                    )
                })
                .collect(),
        }
    }
}
