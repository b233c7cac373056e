use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::assessment::{walkthrough_item, Item, MultipleChoiceItem, Payload, StepwiseItem, Submission};
use crate::mathcore::rational::{int, to_f64};
use crate::mathcore::DetTemplate;

fn entry(label: &str, source: ItemSource) -> QuizEntry {
    QuizEntry {
        label: label.into(),
        weight: int(1),
        difficulty: 0.0,
        source,
    }
}

fn mc_item() -> MultipleChoiceItem {
    MultipleChoiceItem {
        id: "mc".into(),
        prompt: "Pick the third.".into(),
        options: (0..5).map(|i| format!("choice {i}")).collect(),
        correct_index: 2,
        shuffle: true,
        feedback: None,
    }
}

fn sample_quiz() -> Quiz {
    Quiz {
        id: "q1".into(),
        title: "Determinants".into(),
        settings: QuizSettings::default(),
        entries: vec![
            entry("B", ItemSource::Item(Item::MultipleChoice(mc_item()))),
            entry("C", ItemSource::Generate(DetTemplate::default())),
            entry("D", ItemSource::Item(Item::Stepwise(walkthrough_item()))),
        ],
    }
}

fn engine_with(quiz: Quiz) -> SessionEngine {
    let engine = SessionEngine::open(Arc::new(MemoryStore::new())).unwrap();
    engine.register_quiz(quiz).unwrap();
    engine
}

fn stepwise(attempt: &Attempt, entry: usize) -> StepwiseItem {
    match &attempt.items[entry].item {
        Item::Stepwise(s) => s.clone(),
        other => panic!("expected stepwise, got {}", other.kind()),
    }
}

fn correct_choice(attempt: &Attempt) -> Submission {
    match &attempt.items[0].item {
        Item::MultipleChoice(mc) => Submission::choice(&mc.id, mc.correct_index),
        _ => unreachable!(),
    }
}

fn answer_everything(engine: &SessionEngine, attempt: &Attempt, now: u64) {
    engine.submit_answer(&attempt.id, correct_choice(attempt), now).unwrap();
    for k in [1, 2] {
        engine.submit_answer(&attempt.id, stepwise(attempt, k).key_submission(), now).unwrap();
    }
}

#[test]
fn instantiation_is_deterministic_per_seed() {
    let quiz = sample_quiz();
    assert_eq!(instantiate(&quiz, 42).unwrap(), instantiate(&quiz, 42).unwrap());
    assert_ne!(instantiate(&quiz, 42).unwrap(), instantiate(&quiz, 43).unwrap());
}

#[test]
fn shuffled_options_keep_the_key() {
    let quiz = sample_quiz();
    let original = mc_item();
    for seed in 0..50 {
        let items = instantiate(&quiz, seed).unwrap();
        let order = items[0].option_order.clone().unwrap();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..5).collect::<Vec<_>>());
        let Item::MultipleChoice(shown) = &items[0].item else { unreachable!() };
        assert_eq!(order[shown.correct_index], original.correct_index);
        for (pos, &orig) in order.iter().enumerate() {
            assert_eq!(shown.options[pos], original.options[orig]);
        }
    }
}

#[test]
fn attempt_limit_counts_started_attempts() {
    let engine = engine_with(sample_quiz());
    let a = engine.start_attempt("q1", "s1", 1, 0).unwrap();
    engine.finalize(&a.id, 10).unwrap();
    assert!(matches!(
        engine.start_attempt("q1", "s1", 2, 20),
        Err(SessionError::AttemptLimitReached { max: 1, .. })
    ));
    assert!(engine.start_attempt("q1", "s2", 2, 20).is_ok());
    assert!(matches!(engine.start_attempt("nope", "s1", 1, 0), Err(SessionError::UnknownQuiz(_))));
}

#[test]
fn immediate_feedback_reports_every_part() {
    let engine = engine_with(sample_quiz());
    let a = engine.start_attempt("q1", "s1", 9, 0).unwrap();
    let view = engine.submit_answer(&a.id, walkthrough_item().key_submission(), 5).unwrap();
    let result = view.result.unwrap();
    assert_eq!(result.score, int(1));
    assert_eq!(result.parts.len(), 5);
}

#[test]
fn deferred_feedback_only_acknowledges() {
    let mut quiz = sample_quiz();
    quiz.settings.feedback_mode = FeedbackMode::OnFinalize;
    let engine = engine_with(quiz);
    let a = engine.start_attempt("q1", "s1", 9, 0).unwrap();
    let view = engine.submit_answer(&a.id, walkthrough_item().key_submission(), 5).unwrap();
    assert!(view.accepted);
    assert!(view.result.is_none());
}

#[test]
fn unknown_item_is_rejected_without_logging() {
    let engine = engine_with(sample_quiz());
    let a = engine.start_attempt("q1", "s1", 9, 0).unwrap();
    let err = engine.submit_answer(&a.id, Submission::choice("other", 0), 1).unwrap_err();
    assert!(matches!(err, SessionError::UnknownItem(_)));
    assert_eq!(engine.events().unwrap().len(), 1);
}

#[test]
fn late_submission_expires_the_attempt() {
    let mut quiz = sample_quiz();
    quiz.settings.time_limit_secs = Some(60);
    let engine = engine_with(quiz);
    let a = engine.start_attempt("q1", "s1", 3, 100).unwrap();
    engine.submit_answer(&a.id, walkthrough_item().key_submission(), 160).unwrap();
    let err = engine.submit_answer(&a.id, correct_choice(&a), 161).unwrap_err();
    assert!(matches!(err, SessionError::TimeExpired(_)));
    let now = engine.attempt(&a.id).unwrap();
    assert_eq!(now.state, AttemptState::Expired);
    assert_eq!(now.responses.len(), 1);
    assert!(matches!(
        engine.submit_answer(&a.id, correct_choice(&a), 162),
        Err(SessionError::AttemptNotActive(_))
    ));
    let summary = engine.finalize(&a.id, 170).unwrap();
    assert_eq!(summary.state, AttemptState::Finalized);
}

#[test]
fn resubmission_replaces_the_response() {
    let engine = engine_with(sample_quiz());
    let a = engine.start_attempt("q1", "s1", 3, 0).unwrap();
    let wrong = Submission::fields(walkthrough_item().id.as_str(), [("E", "0")]);
    engine.submit_answer(&a.id, wrong, 1).unwrap();
    engine.submit_answer(&a.id, walkthrough_item().key_submission(), 2).unwrap();
    let now = engine.attempt(&a.id).unwrap();
    assert_eq!(now.responses.len(), 1);
    let stored = &now.responses[&walkthrough_item().id];
    assert_eq!(stored.tries, 2);
    assert_eq!(stored.result.score, int(1));
    assert_eq!(engine.events().unwrap().len(), 3);
}

#[test]
fn finalize_totals_match_the_point_scale() {
    let engine = engine_with(sample_quiz());
    let full = engine.start_attempt("q1", "s1", 5, 0).unwrap();
    answer_everything(&engine, &full, 1);
    assert_eq!(engine.finalize(&full.id, 2).unwrap().total, int(100));

    let empty = engine.start_attempt("q1", "s2", 5, 0).unwrap();
    let summary = engine.finalize(&empty.id, 2).unwrap();
    assert_eq!(summary.total, int(0));
    assert!(summary.items.iter().all(|i| !i.answered));
    assert!(matches!(engine.finalize(&empty.id, 3), Err(SessionError::AlreadyFinalized(_))));
}

#[test]
fn task_c_with_one_wrong_field_earns_sixteen_of_twenty() {
    let quiz = Quiz {
        id: "task-c".into(),
        title: String::new(),
        settings: QuizSettings {
            point_scale: int(20),
            ..QuizSettings::default()
        },
        entries: vec![entry("C", ItemSource::Generate(DetTemplate::default()))],
    };
    let engine = engine_with(quiz);
    let a = engine.start_attempt("task-c", "s1", 77, 0).unwrap();
    let mut sub = stepwise(&a, 0).key_submission();
    let Payload::Fields(fields) = &mut sub.payload else { unreachable!() };
    fields.insert("G".into(), "1000".into());
    engine.submit_answer(&a.id, sub, 1).unwrap();
    assert_eq!(engine.finalize(&a.id, 2).unwrap().total, int(16));
}

#[test]
fn finalized_attempts_reject_answers() {
    let engine = engine_with(sample_quiz());
    let a = engine.start_attempt("q1", "s1", 5, 0).unwrap();
    engine.finalize(&a.id, 1).unwrap();
    let before = engine.attempt(&a.id).unwrap();
    assert!(matches!(
        engine.submit_answer(&a.id, correct_choice(&a), 2),
        Err(SessionError::AttemptNotActive(_))
    ));
    assert_eq!(engine.attempt(&a.id).unwrap(), before);
}

#[test]
fn replay_reconstructs_identical_state() {
    let mut quiz = sample_quiz();
    quiz.settings.max_attempts = 3;
    quiz.settings.time_limit_secs = Some(100);
    let engine = engine_with(quiz.clone());
    for s in 0..6 {
        let a = engine.start_attempt("q1", &format!("s{s}"), s, 0).unwrap();
        if s % 2 == 0 {
            answer_everything(&engine, &a, 10);
        }
        if s == 3 {
            let _ = engine.submit_answer(&a.id, correct_choice(&a), 500);
        }
        if s != 5 {
            engine.finalize(&a.id, 600).unwrap();
        }
    }
    let text = write_log(&engine.events().unwrap());
    assert!(text.starts_with(LOG_HEADER));
    let replayed = replay(&parse_log(&text).unwrap()).unwrap();
    let live: BTreeMap<_, _> = engine.attempts_for_quiz("q1").into_iter().map(|a| (a.id.clone(), a)).collect();
    assert_eq!(replayed.len(), live.len());
    for (id, a) in &live {
        assert_eq!(replayed[id].state_json(), a.state_json());
    }
}

#[test]
fn file_store_survives_reopen() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.log");
    let first = {
        let engine = SessionEngine::open(Arc::new(FileStore::open(&path).unwrap())).unwrap();
        engine.register_quiz(sample_quiz()).unwrap();
        let a = engine.start_attempt("q1", "s1", 4, 0).unwrap();
        answer_everything(&engine, &a, 1);
        engine.finalize(&a.id, 2).unwrap();
        engine.attempt(&a.id).unwrap()
    };
    let engine = SessionEngine::open(Arc::new(FileStore::open(&path).unwrap())).unwrap();
    engine.register_quiz(sample_quiz()).unwrap();
    assert_eq!(engine.attempt(&first.id).unwrap().state_json(), first.state_json());
    assert!(matches!(
        engine.start_attempt("q1", "s1", 5, 3),
        Err(SessionError::AttemptLimitReached { .. })
    ));
    let second = engine.start_attempt("q1", "s2", 5, 3).unwrap();
    assert_ne!(second.id, first.id);
    assert!(std::fs::read_to_string(&path).unwrap().starts_with(LOG_HEADER));
}

#[test]
fn export_with_field_subscores() {
    let engine = engine_with(sample_quiz());
    let a = engine.start_attempt("q1", "s2", 5, 0).unwrap();
    answer_everything(&engine, &a, 1);
    engine.finalize(&a.id, 2).unwrap();
    let b = engine.start_attempt("q1", "s1", 6, 0).unwrap();
    engine.submit_answer(&b.id, walkthrough_item().key_submission(), 1).unwrap();
    engine.finalize(&b.id, 2).unwrap();
    engine.start_attempt("q1", "s3", 7, 0).unwrap();

    let m = export_matrix(&engine.quiz("q1").unwrap(), &engine.attempts_for_quiz("q1"), Granularity::WithFieldSubscores)
        .unwrap();
    assert_eq!(m.students, ["s1", "s2"]);
    let labels: Vec<&str> = m.columns.iter().map(|c| c.label.as_str()).collect();
    assert_eq!(
        labels,
        ["A", "B", "B.choice", "C", "C.E", "C.F", "C.G", "C.H", "C.I", "D", "D.E", "D.F", "D.G", "D.H", "D.I"]
    );
    let full = &m.cells[1];
    assert_eq!(full[0], Some(100.0));
    assert!(full[m.field_columns(None)[0]..].iter().all(Option::is_some));
    for i in m.field_columns(None) {
        assert_eq!(full[i], Some(1.0));
    }
    let partial = &m.cells[0];
    assert_eq!(partial[m.column_index("B").unwrap()], None);
    assert_eq!(partial[m.column_index("C.H").unwrap()], None);
    assert_eq!(to_f64(&((int(100) / int(3)))), partial[m.column_index("D").unwrap()].unwrap());

    let back = ResponseMatrix::from_csv(&m.to_csv()).unwrap();
    assert_eq!(back, m);
}

#[test]
fn totals_equal_weighted_item_sums() {
    let mut quiz = sample_quiz();
    quiz.entries[0].weight = int(2);
    let engine = engine_with(quiz);
    for s in 0..40u64 {
        let a = engine.start_attempt("q1", &format!("s{s:02}"), s, 0).unwrap();
        if s % 3 != 0 {
            engine.submit_answer(&a.id, correct_choice(&a), 1).unwrap();
        }
        let mut sub = stepwise(&a, 1).key_submission();
        if s % 2 == 0 {
            let Payload::Fields(f) = &mut sub.payload else { unreachable!() };
            f.insert("E".into(), "99".into());
        }
        engine.submit_answer(&a.id, sub, 1).unwrap();
        engine.finalize(&a.id, 2).unwrap();
    }
    let m = export_matrix(&engine.quiz("q1").unwrap(), &engine.attempts_for_quiz("q1"), Granularity::ItemTotals).unwrap();
    for row in &m.cells {
        let sum: f64 = m.item_columns().iter().map(|&i| row[i].unwrap_or(0.0)).sum();
        assert!((row[0].unwrap() - sum).abs() < 1e-9);
    }
}

#[test]
fn csv_rejects_malformed_input() {
    assert!(ResponseMatrix::from_csv("id,A\nx,1\n").is_err());
    assert!(ResponseMatrix::from_csv("student_id,A,A\nx,1,2\n").is_err());
    assert!(ResponseMatrix::from_csv("student_id,A\nx,abc\n").is_err());
    let m = ResponseMatrix::from_csv("student_id,A,B,B.E\nx,,3,1\n").unwrap();
    assert_eq!(m.cells[0], [None, Some(3.0), Some(1.0)]);
    assert_eq!(m.field_columns(Some("B")), [2]);
}

#[test]
fn quiz_documents_resolve_references() {
    let text = r#"{
      "version": 1,
      "quiz": {
        "id": "q",
        "settings": {"max_attempts": 2, "point_scale": "20"},
        "entries": [
          {"label": "C", "generate": {"seed": 0}},
          {"label": "D", "item_ref": "det-walkthrough"}
        ]
      }
    }"#;
    let doc = QuizDocument::parse(text).unwrap();
    let bank = crate::assessment::BankDocument::new(vec![Item::Stepwise(walkthrough_item())]);
    let quiz = doc.clone().into_quiz(std::slice::from_ref(&bank)).unwrap();
    assert_eq!(quiz.entry_points(), [int(10), int(10)]);
    assert!(doc.into_quiz(&[]).is_err());

    let mut bad = sample_quiz();
    bad.entries[0].label = "A".into();
    assert!(bad.validate().is_err());
}
