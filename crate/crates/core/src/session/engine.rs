use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, RwLock};

use crate::assessment::Submission;

use super::attempt::{instantiate, Attempt, AttemptState, FeedbackView, ScoreSummary};
use super::events::{replay, Event, EventStore};
use super::quiz::Quiz;
use super::SessionError;

#[derive(Debug, Default)]
struct Registry {
    next_seq: u64,
    /// Attempts started per `(quiz, student)`.
    counts: BTreeMap<(String, String), u32>,
}

/// Runs attempts for registered quizzes and logs every state change.
///
/// Operations on one attempt are serialized by that attempt's lock; the
/// attempt-limit check and the attempt's creation happen under one lock.
pub struct SessionEngine {
    store: Arc<dyn EventStore>,
    quizzes: RwLock<BTreeMap<String, Arc<Quiz>>>,
    attempts: RwLock<BTreeMap<String, Arc<Mutex<Attempt>>>>,
    registry: Mutex<Registry>,
}

impl SessionEngine {
    /// Opens an engine over `store`, replaying any events it already holds.
    pub fn open(store: Arc<dyn EventStore>) -> Result<Self, SessionError> {
        let replayed = replay(&store.events()?)?;
        let mut registry = Registry::default();
        for attempt in replayed.values() {
            *registry
                .counts
                .entry((attempt.quiz_id.clone(), attempt.student_id.clone()))
                .or_default() += 1;
        }
        registry.next_seq = replayed.len() as u64 + 1;
        let attempts = replayed
            .into_iter()
            .map(|(id, a)| (id, Arc::new(Mutex::new(a))))
            .collect();
        Ok(Self {
            store,
            quizzes: RwLock::new(BTreeMap::new()),
            attempts: RwLock::new(attempts),
            registry: Mutex::new(registry),
        })
    }

    pub fn register_quiz(&self, quiz: Quiz) -> Result<(), SessionError> {
        quiz.validate()?;
        self.quizzes
            .write()
            .expect("quiz table poisoned")
            .insert(quiz.id.clone(), Arc::new(quiz));
        Ok(())
    }

    pub fn quiz(&self, id: &str) -> Option<Arc<Quiz>> {
        self.quizzes.read().expect("quiz table poisoned").get(id).cloned()
    }

    pub fn quizzes(&self) -> Vec<Arc<Quiz>> {
        self.quizzes.read().expect("quiz table poisoned").values().cloned().collect()
    }

    pub fn events(&self) -> Result<Vec<Event>, SessionError> {
        self.store.events()
    }

    fn handle(&self, attempt_id: &str) -> Result<Arc<Mutex<Attempt>>, SessionError> {
        self.attempts
            .read()
            .expect("attempt table poisoned")
            .get(attempt_id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownAttempt(attempt_id.to_string()))
    }

    pub fn attempt(&self, attempt_id: &str) -> Result<Attempt, SessionError> {
        Ok(self.handle(attempt_id)?.lock().expect("attempt poisoned").clone())
    }

    pub fn attempts_for_quiz(&self, quiz_id: &str) -> Vec<Attempt> {
        let handles: Vec<_> = self.attempts.read().expect("attempt table poisoned").values().cloned().collect();
        handles
            .iter()
            .map(|h| h.lock().expect("attempt poisoned").clone())
            .filter(|a| a.quiz_id == quiz_id)
            .collect()
    }

    /// Starts an attempt, failing once the student has used `max_attempts`.
    ///
    /// Every started attempt counts toward the limit, whatever its state.
    pub fn start_attempt(&self, quiz_id: &str, student_id: &str, seed: u64, now: u64) -> Result<Attempt, SessionError> {
        let quiz = self.quiz(quiz_id).ok_or_else(|| SessionError::UnknownQuiz(quiz_id.to_string()))?;
        let items = instantiate(&quiz, seed)?;

        let mut registry = self.registry.lock().expect("registry poisoned");
        let key = (quiz_id.to_string(), student_id.to_string());
        let used = registry.counts.get(&key).copied().unwrap_or(0);
        if used >= quiz.settings.max_attempts {
            return Err(SessionError::AttemptLimitReached {
                student: student_id.to_string(),
                max: quiz.settings.max_attempts,
            });
        }
        let event = Event::AttemptStarted {
            attempt_id: format!("att-{:06}", registry.next_seq),
            quiz_id: quiz_id.to_string(),
            student_id: student_id.to_string(),
            seed,
            at: now,
            settings: quiz.settings.clone(),
            items,
        };
        let attempt = Attempt::from_started(&event)?;
        self.store.append(&event)?;
        registry.next_seq += 1;
        registry.counts.insert(key, used + 1);
        self.attempts
            .write()
            .expect("attempt table poisoned")
            .insert(attempt.id.clone(), Arc::new(Mutex::new(attempt.clone())));
        Ok(attempt)
    }

    fn commit(&self, attempt: &mut Attempt, event: Event) -> Result<(), SessionError> {
        self.store.append(&event)?;
        attempt.apply(&event)
    }

    /// Grades and stores a response; a later submission for the same item replaces it.
    pub fn submit_answer(&self, attempt_id: &str, submission: Submission, now: u64) -> Result<FeedbackView, SessionError> {
        let handle = self.handle(attempt_id)?;
        let mut attempt = handle.lock().expect("attempt poisoned");
        if attempt.state != AttemptState::InProgress {
            return Err(SessionError::AttemptNotActive(attempt_id.to_string()));
        }
        if attempt.deadline().is_some_and(|d| now > d) {
            let event = Event::AttemptExpired {
                attempt_id: attempt_id.to_string(),
                at: now,
            };
            self.commit(&mut attempt, event)?;
            return Err(SessionError::TimeExpired(attempt_id.to_string()));
        }
        attempt.grade(&submission)?;
        let item_id = submission.item_id.clone();
        let event = Event::AnswerSubmitted {
            attempt_id: attempt_id.to_string(),
            submission,
            at: now,
        };
        self.commit(&mut attempt, event)?;
        Ok(attempt.feedback_view(&item_id))
    }

    pub fn finalize(&self, attempt_id: &str, now: u64) -> Result<ScoreSummary, SessionError> {
        let handle = self.handle(attempt_id)?;
        let mut attempt = handle.lock().expect("attempt poisoned");
        if attempt.state == AttemptState::Finalized {
            return Err(SessionError::AlreadyFinalized(attempt_id.to_string()));
        }
        let event = Event::Finalized {
            attempt_id: attempt_id.to_string(),
            at: now,
        };
        self.commit(&mut attempt, event)?;
        Ok(attempt.summary())
    }
}
