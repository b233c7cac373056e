//! Reliability analysis of a response-matrix CSV, or of a simulated class
//! when no file is given.
//!
//! ```text
//! cargo run --example reliability_report
//! cargo run --example reliability_report -- matrix.csv fields C
//! ```

use std::path::Path;

use stepwise::cli::render_markdown;
use stepwise::psychometrics::{reliability_report, AnalysisGranularity, ReportConfig};
use stepwise::service::load_documents;
use stepwise::session::{export_matrix, replay, Granularity, ResponseMatrix};
use stepwise::simulate::{sample_students, simulate_attempts};

fn simulated() -> Result<ResponseMatrix, Box<dyn std::error::Error>> {
    let (banks, quizzes) = load_documents(&Path::new(env!("CARGO_MANIFEST_DIR")).join("banks"))?;
    let doc = quizzes.into_iter().find(|q| q.quiz.id == "determinants").unwrap();
    let quiz = doc.into_quiz(&banks)?;
    let events = simulate_attempts(&quiz, &sample_students(92, 7), 7)?;
    let attempts: Vec<_> = replay(&events)?.into_values().collect();
    Ok(export_matrix(&quiz, &attempts, Granularity::WithFieldSubscores)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let matrix = match args.first() {
        Some(path) => ResponseMatrix::from_csv(&std::fs::read_to_string(path)?)?,
        None => simulated()?,
    };
    let granularity = match args.get(1).map(String::as_str) {
        Some("fields") => AnalysisGranularity::Fields,
        _ => AnalysisGranularity::ItemTotals,
    };
    let config = ReportConfig { granularity, item: args.get(2).cloned(), bin_count: None };

    let report = reliability_report(&matrix, &config)?;
    println!("{}", render_markdown(&report));
    if let Some(fit) = &report.factor {
        println!("factor fit: {} iterations, converged {}", fit.iterations, fit.converged);
    }

    if args.is_empty() {
        let fields = ReportConfig { granularity: AnalysisGranularity::Fields, item: Some("C".into()), bin_count: None };
        let report = reliability_report(&matrix, &fields)?;
        println!("{}", render_markdown(&report));
    }
    Ok(())
}
