//! HTTP API over the session engine, question banks and analysis.
//!
//! | Method | Path | Body | Response |
//! |---|---|---|---|
//! | GET | `/api/quizzes` | | quiz summaries |
//! | POST | `/api/quizzes/{id}/attempts` | `{student_id, seed?}` | attempt view |
//! | POST | `/api/attempts/{id}/answers` | `{item_id, payload}` | feedback view |
//! | POST | `/api/attempts/{id}/finalize` | | score summary |
//! | GET | `/api/attempts/{id}` | | attempt view |
//! | POST | `/api/admin/banks` | bank document | `{accepted, items}` or 422 with issues |
//! | GET | `/api/admin/export?quiz=&granularity=` | | response-matrix CSV |
//! | POST | `/api/admin/analysis` | CSV, or `{quiz, granularity?, item?, bin_count?}` | reliability report |
//!
//! Errors are `{code, message, detail?}` documents with 404 for unknown
//! ids, 409 for state conflicts and 422 for validation failures.

mod error;
mod routes;
mod views;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

pub use error::{codes, ApiError};
pub use routes::router;
pub use views::{AttemptView, FieldView, ItemBody, ItemView, QuizSummary, ResponseView, StepView};

use crate::assessment::{validate_bank, BankDocument};
use crate::session::{EventStore, FileStore, QuizDocument, SessionEngine};

/// Source of the `now` passed to the session engine, in seconds.
pub trait Clock: Send + Sync {
    fn now(&self) -> u64;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> u64 {
        SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
    }
}

/// A clock that only moves when told to.
#[derive(Debug, Default)]
pub struct ManualClock(AtomicU64);

impl ManualClock {
    pub fn new(start: u64) -> Self {
        Self(AtomicU64::new(start))
    }

    pub fn set(&self, t: u64) {
        self.0.store(t, Ordering::SeqCst);
    }

    pub fn advance(&self, secs: u64) {
        self.0.fetch_add(secs, Ordering::SeqCst);
    }
}

impl Clock for ManualClock {
    fn now(&self) -> u64 {
        self.0.load(Ordering::SeqCst)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("{path}: {message}")]
    Load { path: PathBuf, message: String },
    #[error(transparent)]
    Session(#[from] crate::session::SessionError),
    #[error("server: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub port: u16,
    pub bank_dir: PathBuf,
    pub data_dir: PathBuf,
    /// `None` disables CORS; `*` allows any origin.
    pub cors_origin: Option<String>,
}

pub struct AppState {
    pub engine: SessionEngine,
    pub banks: RwLock<Vec<BankDocument>>,
    pub clock: Arc<dyn Clock>,
}

impl AppState {
    pub fn new(engine: SessionEngine, banks: Vec<BankDocument>, clock: Arc<dyn Clock>) -> Self {
        Self {
            engine,
            banks: RwLock::new(banks),
            clock,
        }
    }
}

/// Bank and quiz documents found in a directory.
///
/// Every `*.json` file is read in name order; files with a `quiz` member
/// are quiz documents, the rest are banks. Quizzes may reference items
/// from any of the banks.
pub fn load_documents(dir: &Path) -> Result<(Vec<BankDocument>, Vec<QuizDocument>), ServiceError> {
    let load_err = |path: &Path, message: String| ServiceError::Load {
        path: path.to_path_buf(),
        message,
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| load_err(dir, e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut banks = Vec::new();
    let mut quizzes = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path).map_err(|e| load_err(&path, e.to_string()))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| load_err(&path, e.to_string()))?;
        if value.get("quiz").is_some() {
            quizzes.push(QuizDocument::parse(&text).map_err(|e| load_err(&path, e.to_string()))?);
        } else {
            let bank = BankDocument::parse(&text).map_err(|e| load_err(&path, e.to_string()))?;
            let issues = validate_bank(&bank.items);
            if let Some(first) = issues.first() {
                return Err(load_err(&path, first.to_string()));
            }
            banks.push(bank);
        }
    }
    Ok((banks, quizzes))
}

/// Opens the event log under `data_dir` and registers every quiz in `bank_dir`.
pub fn build_state(config: &ServiceConfig, clock: Arc<dyn Clock>) -> Result<AppState, ServiceError> {
    std::fs::create_dir_all(&config.data_dir)?;
    let store: Arc<dyn EventStore> = Arc::new(FileStore::open(config.data_dir.join("events.log"))?);
    let engine = SessionEngine::open(store)?;
    let (banks, quizzes) = load_documents(&config.bank_dir)?;
    for doc in quizzes {
        engine.register_quiz(doc.into_quiz(&banks)?)?;
    }
    Ok(AppState::new(engine, banks, clock))
}

/// Serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    let state = Arc::new(build_state(&config, Arc::new(SystemClock))?);
    let app = router(state, config.cors_origin.as_deref());
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", config.port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
