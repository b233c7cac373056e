//! One student sitting the committed determinants quiz, persisted to an
//! event log on disk and rebuilt from it.
//!
//! ```text
//! cargo run --example quiz_session
//! ```

use std::path::Path;
use std::sync::Arc;

use stepwise::assessment::{Item, Submission};
use stepwise::mathcore::rational::format_rational;
use stepwise::service::load_documents;
use stepwise::session::{replay, FileStore, SessionEngine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (banks, quizzes) = load_documents(&Path::new(env!("CARGO_MANIFEST_DIR")).join("banks"))?;
    let dir = std::env::temp_dir().join(format!("stepwise-session-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let log = dir.join("events.log");

    let engine = SessionEngine::open(Arc::new(FileStore::open(&log)?))?;
    for doc in quizzes {
        engine.register_quiz(doc.into_quiz(&banks)?)?;
    }

    let attempt = engine.start_attempt("determinants", "ada", 11, 1_000)?;
    println!("attempt {} for {}", attempt.id, attempt.student_id);
    for served in &attempt.items {
        // Answer every field with the key, except the last field of each item.
        let Item::Stepwise(item) = &served.item else { continue };
        let mut sub = item.key_submission();
        if let stepwise::assessment::Payload::Fields(values) = &mut sub.payload {
            let last = item.fields().last().unwrap().1.label.clone();
            values.insert(last, "0".into());
        }
        let feedback = engine.submit_answer(&attempt.id, sub, 1_030)?;
        let result = feedback.result.expect("immediate feedback");
        println!("  {} ({} pts): score {}", served.label, format_rational(&served.points), format_rational(&result.score));
    }
    let again = Submission::fields("det4-triangular", [("D", "4")]);
    engine.submit_answer(&attempt.id, again, 1_040)?;

    let summary = engine.finalize(&attempt.id, 1_100)?;
    println!("total {} / {}", format_rational(&summary.total), format_rational(&summary.max));
    match engine.finalize(&attempt.id, 1_101) {
        Err(e) => println!("second finalize: {e}"),
        Ok(_) => unreachable!(),
    }
    match engine.start_attempt("determinants", "ada", 12, 1_200) {
        Err(e) => println!("second attempt: {e}"),
        Ok(_) => unreachable!(),
    }

    let text = std::fs::read_to_string(&log)?;
    println!("\n{} lines in {}", text.lines().count(), log.display());
    let rebuilt = replay(&engine.events()?)?;
    assert_eq!(rebuilt[&attempt.id], engine.attempt(&attempt.id)?);
    println!("replayed state matches");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
