//! Simulated cohorts: a ground-truth one-factor matrix, and a whole class
//! driven through the session engine.
//!
//! ```text
//! cargo run --example simulate_cohort -- 92 2024
//! ```

use std::path::Path;

use stepwise::service::load_documents;
use stepwise::session::{export_matrix, replay, Granularity};
use stepwise::simulate::{sample_students, simulate_attempts, simulate_matrix, CohortSpec, Discretization, SimItem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let students: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(92);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(2024);

    let spec = CohortSpec {
        n_students: students,
        items: vec![
            SimItem::new("B", 0.8, 24.0, 40.0),
            SimItem::new("C", 0.7, 14.0, 20.0),
            SimItem::new("D", 0.6, 26.0, 40.0),
        ],
        seed,
        discretization: Discretization::RoundedClamped,
    };
    let spec = CohortSpec {
        items: spec.items.into_iter().map(|i| SimItem { scale: i.max_points / 4.0, ..i }).collect(),
        ..spec
    };
    let matrix = simulate_matrix(&spec)?;
    println!("model matrix, first rows:");
    for line in matrix.to_csv().lines().take(4) {
        println!("  {line}");
    }

    let (banks, quizzes) = load_documents(&Path::new(env!("CARGO_MANIFEST_DIR")).join("banks"))?;
    let doc = quizzes.into_iter().find(|q| q.quiz.id == "determinants").unwrap();
    let quiz = doc.into_quiz(&banks)?;
    let cohort = sample_students(students, seed);
    let events = simulate_attempts(&quiz, &cohort, seed)?;
    println!("\n{} events for {} students", events.len(), cohort.len());

    let attempts: Vec<_> = replay(&events)?.into_values().collect();
    let exported = export_matrix(&quiz, &attempts, Granularity::WithFieldSubscores)?;
    let labels: Vec<&str> = exported.columns.iter().map(|c| c.label.as_str()).collect();
    println!("exported columns: {}", labels.join(","));
    for line in exported.to_csv().lines().skip(1).take(3) {
        println!("  {line}");
    }
    Ok(())
}
