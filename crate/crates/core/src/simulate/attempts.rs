use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assessment::{DragDropItem, Item, MultipleChoiceItem, Payload, StepwiseItem, Submission};
use crate::mathcore::rational::{format_rational, int, Rational};
use crate::seeds;
use crate::session::{Attempt, Event, MemoryStore, Quiz, SessionEngine, SessionError};

/// Logistic slope: P(correct) = 1 / (1 + exp(-SLOPE * (ability - difficulty))).
pub const SLOPE: f64 = 1.7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimStudent {
    pub id: String,
    pub ability: f64,
}

fn p_correct(ability: f64, difficulty: f64) -> f64 {
    1.0 / (1.0 + (-SLOPE * (ability - difficulty)).exp())
}

struct Responder {
    rng: ChaCha8Rng,
    ability: f64,
    item_difficulty: f64,
}

impl Responder {
    fn knows(&mut self, extra: f64) -> bool {
        let p = p_correct(self.ability, self.item_difficulty + extra);
        self.rng.random::<f64>() < p
    }

    /// Wrong answers are `max(keys) + 1 + k`, which match no key.
    fn stepwise(&mut self, item: &StepwiseItem) -> Submission {
        let ceiling = item
            .fields()
            .map(|(_, f)| f.expected.clone())
            .max()
            .unwrap_or_else(|| int(0));
        let mut values = BTreeMap::new();
        for (k, (_, field)) in item.fields().enumerate() {
            let value = if self.knows(field.difficulty.unwrap_or(0.0)) {
                field.expected.clone()
            } else {
                &ceiling + Rational::one() + int(k as i64)
            };
            values.insert(field.label.clone(), format_rational(&value));
        }
        Submission {
            item_id: item.id.clone(),
            payload: Payload::Fields(values),
        }
    }

    fn multiple_choice(&mut self, item: &MultipleChoiceItem) -> Submission {
        let n = item.options.len();
        let index = if self.knows(0.0) || n < 2 {
            item.correct_index
        } else {
            (item.correct_index + self.rng.random_range(1..n)) % n
        };
        Submission::choice(&item.id, index)
    }

    /// Known slots get their key; the rest get unused tokens that are not
    /// their key, or stay empty, so the placement stays injective.
    fn drag_drop(&mut self, item: &DragDropItem) -> Submission {
        let known: Vec<bool> = item.slots.iter().map(|_| self.knows(0.0)).collect();
        let mut used: BTreeSet<&str> = BTreeSet::new();
        let mut placements = BTreeMap::new();
        for (slot, _) in item.slots.iter().zip(&known).filter(|(_, k)| **k) {
            let token = &item.answer[slot];
            used.insert(token);
            placements.insert(slot.clone(), token.clone());
        }
        for (slot, _) in item.slots.iter().zip(&known).filter(|(_, k)| !**k) {
            let key = item.answer.get(slot).map(String::as_str);
            let spare = item.tokens.iter().find(|t| Some(t.as_str()) != key && !used.contains(t.as_str()));
            if let Some(token) = spare {
                used.insert(token);
                placements.insert(slot.clone(), token.clone());
            }
        }
        Submission {
            item_id: item.id.clone(),
            payload: Payload::Placements(placements),
        }
    }
}

/// Runs one attempt per student through `engine`, answering every item.
///
/// Student `j` starts at time `100 * j` with attempt seed
/// `derive(seed, 2j)` and response stream `derive(seed, 2j + 1)`. Field
/// difficulty is the quiz entry's difficulty plus the field's own offset.
pub fn drive_attempts(
    engine: &SessionEngine,
    quiz: &Quiz,
    cohort: &[SimStudent],
    seed: u64,
) -> Result<Vec<Attempt>, SessionError> {
    let mut done = Vec::with_capacity(cohort.len());
    for (j, student) in cohort.iter().enumerate() {
        let start = 100 * j as u64;
        let attempt = engine.start_attempt(&quiz.id, &student.id, seeds::derive(seed, 2 * j as u64), start)?;
        let mut responder = Responder {
            rng: ChaCha8Rng::seed_from_u64(seeds::derive(seed, 2 * j as u64 + 1)),
            ability: student.ability,
            item_difficulty: 0.0,
        };
        for served in &attempt.items {
            responder.item_difficulty = quiz.entries[served.entry].difficulty;
            let submission = match &served.item {
                Item::Stepwise(i) => responder.stepwise(i),
                Item::MultipleChoice(i) => responder.multiple_choice(i),
                Item::DragDrop(i) => responder.drag_drop(i),
            };
            engine.submit_answer(&attempt.id, submission, start + 1)?;
        }
        engine.finalize(&attempt.id, start + 2)?;
        done.push(engine.attempt(&attempt.id)?);
    }
    Ok(done)
}

/// Simulates the cohort on a fresh in-memory engine and returns its event log.
pub fn simulate_attempts(quiz: &Quiz, cohort: &[SimStudent], seed: u64) -> Result<Vec<Event>, SessionError> {
    let engine = SessionEngine::open(Arc::new(MemoryStore::new()))?;
    engine.register_quiz(quiz.clone())?;
    drive_attempts(&engine, quiz, cohort, seed)?;
    engine.events()
}
