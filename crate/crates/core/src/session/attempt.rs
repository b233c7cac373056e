use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::assessment::{grade, instantiate_generated_item, GradeResult, Item, Submission};
use crate::mathcore::rational::{serde_rational, Rational};
use crate::seeds;

use super::events::Event;
use super::quiz::{FeedbackMode, ItemSource, Quiz, QuizSettings};
use super::SessionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttemptState {
    InProgress,
    Finalized,
    Expired,
}

/// An item as served in one attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptItem {
    pub entry: usize,
    pub label: String,
    #[serde(with = "serde_rational")]
    pub points: Rational,
    pub item: Item,
    /// For shuffled multiple choice: original option index shown at each position.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub option_order: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredResponse {
    pub submission: Submission,
    pub result: GradeResult,
    pub at: u64,
    /// Submissions received for this item, including replaced ones.
    pub tries: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attempt {
    pub id: String,
    pub quiz_id: String,
    pub student_id: String,
    pub seed: u64,
    pub state: AttemptState,
    pub settings: QuizSettings,
    pub items: Vec<AttemptItem>,
    pub responses: BTreeMap<String, StoredResponse>,
    pub started_at: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finalized_at: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expired_at: Option<u64>,
}

/// What the student sees after submitting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackView {
    pub attempt_id: String,
    pub item_id: String,
    pub accepted: bool,
    /// Present only in immediate-feedback mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<GradeResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemSummary {
    pub item_id: String,
    pub label: String,
    pub answered: bool,
    #[serde(with = "serde_rational")]
    pub score: Rational,
    #[serde(with = "serde_rational")]
    pub points: Rational,
    #[serde(with = "serde_rational")]
    pub earned: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub attempt_id: String,
    pub quiz_id: String,
    pub student_id: String,
    pub state: AttemptState,
    #[serde(with = "serde_rational")]
    pub total: Rational,
    #[serde(with = "serde_rational")]
    pub max: Rational,
    pub items: Vec<ItemSummary>,
}

/// Builds the items an attempt serves; a pure function of `(quiz, seed)`.
///
/// Entry `k` draws from the child seed `seeds::derive(seed, k)`.
pub fn instantiate(quiz: &Quiz, seed: u64) -> Result<Vec<AttemptItem>, SessionError> {
    let points = quiz.entry_points();
    quiz.entries
        .iter()
        .enumerate()
        .map(|(k, entry)| {
            let child = seeds::derive(seed, k as u64);
            let (item, option_order) = match &entry.source {
                ItemSource::Item(Item::MultipleChoice(mc)) if quiz.settings.shuffle_options && mc.shuffle => {
                    let (shown, order) = mc.shuffled(child);
                    (Item::MultipleChoice(shown), Some(order))
                }
                ItemSource::Item(Item::DragDrop(dd)) if quiz.settings.shuffle_options => {
                    (Item::DragDrop(dd.with_shuffled_tokens(child)), None)
                }
                ItemSource::Item(item) => (item.clone(), None),
                ItemSource::Generate(template) => {
                    let item = instantiate_generated_item(&template.with_seed(child))
                        .map_err(SessionError::Generation)?;
                    (Item::Stepwise(item), None)
                }
                ItemSource::ItemRef(id) => {
                    return Err(SessionError::InvalidQuiz(format!("unresolved item reference {id}")))
                }
            };
            Ok(AttemptItem {
                entry: k,
                label: entry.label.clone(),
                points: points[k].clone(),
                item,
                option_order,
            })
        })
        .collect()
}

impl Attempt {
    /// Builds a fresh attempt from its `attempt_started` event.
    pub fn from_started(event: &Event) -> Result<Attempt, SessionError> {
        let Event::AttemptStarted {
            attempt_id,
            quiz_id,
            student_id,
            seed,
            at,
            settings,
            items,
        } = event
        else {
            return Err(SessionError::Replay(format!(
                "attempt {} does not begin with attempt_started",
                event.attempt_id()
            )));
        };
        Ok(Attempt {
            id: attempt_id.clone(),
            quiz_id: quiz_id.clone(),
            student_id: student_id.clone(),
            seed: *seed,
            state: AttemptState::InProgress,
            settings: settings.clone(),
            items: items.clone(),
            responses: BTreeMap::new(),
            started_at: *at,
            finalized_at: None,
            expired_at: None,
        })
    }

    pub fn deadline(&self) -> Option<u64> {
        self.settings
            .time_limit_secs
            .map(|limit| self.started_at.saturating_add(limit))
    }

    pub fn find_item(&self, item_id: &str) -> Option<&AttemptItem> {
        self.items.iter().find(|i| i.item.id() == item_id)
    }

    /// Grades without storing; used to vet a submission before logging it.
    pub fn grade(&self, submission: &Submission) -> Result<GradeResult, SessionError> {
        let served = self
            .find_item(&submission.item_id)
            .ok_or_else(|| SessionError::UnknownItem(submission.item_id.clone()))?;
        grade(&served.item, submission, self.settings.ordering).map_err(SessionError::Grade)
    }

    /// Folds one event into the state. The only mutator.
    pub fn apply(&mut self, event: &Event) -> Result<(), SessionError> {
        if event.attempt_id() != self.id {
            return Err(SessionError::Replay(format!(
                "event for {} applied to {}",
                event.attempt_id(),
                self.id
            )));
        }
        match event {
            Event::AttemptStarted { .. } => {
                return Err(SessionError::Replay(format!("attempt {} started twice", self.id)))
            }
            Event::AnswerSubmitted { submission, at, .. } => {
                if self.state != AttemptState::InProgress {
                    return Err(SessionError::Replay(format!("answer logged for inactive attempt {}", self.id)));
                }
                let result = self.grade(submission)?;
                let tries = self
                    .responses
                    .get(&submission.item_id)
                    .map_or(1, |r| r.tries + 1);
                self.responses.insert(
                    submission.item_id.clone(),
                    StoredResponse {
                        submission: submission.clone(),
                        result,
                        at: *at,
                        tries,
                    },
                );
            }
            Event::AttemptExpired { at, .. } => {
                if self.state != AttemptState::InProgress {
                    return Err(SessionError::Replay(format!("attempt {} expired twice", self.id)));
                }
                self.state = AttemptState::Expired;
                self.expired_at = Some(*at);
            }
            Event::Finalized { at, .. } => {
                if self.state == AttemptState::Finalized {
                    return Err(SessionError::Replay(format!("attempt {} finalized twice", self.id)));
                }
                self.state = AttemptState::Finalized;
                self.finalized_at = Some(*at);
            }
        }
        Ok(())
    }

    pub fn feedback_view(&self, item_id: &str) -> FeedbackView {
        let result = match self.settings.feedback_mode {
            FeedbackMode::Immediate => self.responses.get(item_id).map(|r| r.result.clone()),
            FeedbackMode::OnFinalize => None,
        };
        FeedbackView {
            attempt_id: self.id.clone(),
            item_id: item_id.to_string(),
            accepted: true,
            result,
        }
    }

    /// Points per item and the total; unanswered items earn nothing.
    pub fn summary(&self) -> ScoreSummary {
        let items: Vec<ItemSummary> = self
            .items
            .iter()
            .map(|served| {
                let id = served.item.id();
                let response = self.responses.get(id);
                let score = response.map_or_else(Rational::zero, |r| r.result.score.clone());
                ItemSummary {
                    item_id: id.to_string(),
                    label: served.label.clone(),
                    answered: response.is_some(),
                    earned: &score * &served.points,
                    score,
                    points: served.points.clone(),
                }
            })
            .collect();
        ScoreSummary {
            attempt_id: self.id.clone(),
            quiz_id: self.quiz_id.clone(),
            student_id: self.student_id.clone(),
            state: self.state,
            total: items.iter().map(|i| &i.earned).sum(),
            max: self.items.iter().map(|i| &i.points).sum(),
            items,
        }
    }

    /// Canonical serialized state, used to compare replays.
    pub fn state_json(&self) -> String {
        serde_json::to_string(self).expect("attempts always serialize")
    }
}
