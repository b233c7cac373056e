//! Step-by-step mathematics assessment with partial credit, and Classical
//! Test Theory reliability analysis of the results.
//!
//! The crate is organized bottom-up:
//!
//! - [`mathcore`]: exact polynomials, determinants, minors, quadratic roots,
//!   and seeded generation of determinant-equation tasks.
//! - [`assessment`]: items (stepwise, multiple-choice, drag-and-drop), the
//!   question-bank document, answer parsing, and grading.
//! - [`session`]: the attempt lifecycle as an append-only event log, and
//!   export of response matrices.
//! - [`psychometrics`]: descriptives, histograms, correlations, Cronbach's
//!   alpha, one-factor loadings, and McDonald's omega.
//! - [`simulate`]: synthetic cohorts with known ground truth.
//! - [`service`]: the HTTP API.
//! - [`cli`]: the `stepwise` operator tool.
//!
//! Runnable walkthroughs of each capability live in `examples/`:
//!
//! ```bash
//! cargo run -p stepwise --example determinant_walkthrough
//! cargo run -p stepwise --example generated_tasks
//! cargo run -p stepwise --example grading
//! cargo run -p stepwise --example quiz_session
//! cargo run -p stepwise --example simulate_cohort
//! cargo run -p stepwise --example reliability_report
//! cargo run -p stepwise --example http_service
//! ```

pub mod assessment;
pub mod cli;
pub mod mathcore;
pub mod psychometrics;
pub mod seeds;
pub mod service;
pub mod session;
pub mod simulate;
