//! The append-only event log.
//!
//! On disk the log is UTF-8 text: the header line `stepwise-event-log v1`
//! followed by one JSON object per line, each tagged by `"event"`.
//! Attempt state is a pure fold over the events of that attempt.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::assessment::Submission;

use super::attempt::{Attempt, AttemptItem};
use super::quiz::QuizSettings;
use super::SessionError;

pub const LOG_HEADER: &str = "stepwise-event-log v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    AttemptStarted {
        attempt_id: String,
        quiz_id: String,
        student_id: String,
        seed: u64,
        at: u64,
        settings: QuizSettings,
        items: Vec<AttemptItem>,
    },
    AnswerSubmitted {
        attempt_id: String,
        submission: Submission,
        at: u64,
    },
    AttemptExpired {
        attempt_id: String,
        at: u64,
    },
    Finalized {
        attempt_id: String,
        at: u64,
    },
}

impl Event {
    pub fn attempt_id(&self) -> &str {
        match self {
            Event::AttemptStarted { attempt_id, .. }
            | Event::AnswerSubmitted { attempt_id, .. }
            | Event::AttemptExpired { attempt_id, .. }
            | Event::Finalized { attempt_id, .. } => attempt_id,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("events always serialize")
    }
}

pub fn write_log(events: &[Event]) -> String {
    let mut out = String::from(LOG_HEADER);
    out.push('\n');
    for e in events {
        out.push_str(&e.to_line());
        out.push('\n');
    }
    out
}

pub fn parse_log(text: &str) -> Result<Vec<Event>, SessionError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == LOG_HEADER => {}
        Some(h) => return Err(SessionError::Replay(format!("unrecognized log header {h:?}"))),
        None => return Ok(Vec::new()),
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| SessionError::Replay(format!("line {}: {e}", n + 2)))
        })
        .collect()
}

/// Rebuilds every attempt from a log, keyed by attempt id.
pub fn replay(events: &[Event]) -> Result<BTreeMap<String, Attempt>, SessionError> {
    let mut attempts: BTreeMap<String, Attempt> = BTreeMap::new();
    for event in events {
        match attempts.get_mut(event.attempt_id()) {
            Some(attempt) => attempt.apply(event)?,
            None => {
                let attempt = Attempt::from_started(event)?;
                attempts.insert(attempt.id.clone(), attempt);
            }
        }
    }
    Ok(attempts)
}

/// Durable home of the event log. Implementations must be thread-safe.
pub trait EventStore: Send + Sync {
    fn append(&self, event: &Event) -> Result<(), SessionError>;
    fn events(&self) -> Result<Vec<Event>, SessionError>;
}

#[derive(Debug, Default)]
pub struct MemoryStore {
    events: Mutex<Vec<Event>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl EventStore for MemoryStore {
    fn append(&self, event: &Event) -> Result<(), SessionError> {
        self.events.lock().expect("store poisoned").push(event.clone());
        Ok(())
    }

    fn events(&self) -> Result<Vec<Event>, SessionError> {
        Ok(self.events.lock().expect("store poisoned").clone())
    }
}

/// Line-per-event file; each append is flushed before returning.
#[derive(Debug)]
pub struct FileStore {
    path: PathBuf,
    file: Mutex<File>,
}

fn io_err(path: &Path, e: std::io::Error) -> SessionError {
    SessionError::Store(format!("{}: {e}", path.display()))
}

impl FileStore {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, SessionError> {
        let path = path.as_ref().to_path_buf();
        let fresh = std::fs::metadata(&path).map(|m| m.len() == 0).unwrap_or(true);
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .read(true)
            .open(&path)
            .map_err(|e| io_err(&path, e))?;
        if fresh {
            writeln!(file, "{LOG_HEADER}").map_err(|e| io_err(&path, e))?;
        }
        Ok(Self {
            path,
            file: Mutex::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl EventStore for FileStore {
    fn append(&self, event: &Event) -> Result<(), SessionError> {
        let mut file = self.file.lock().expect("store poisoned");
        writeln!(file, "{}", event.to_line()).map_err(|e| io_err(&self.path, e))?;
        file.flush().map_err(|e| io_err(&self.path, e))
    }

    fn events(&self) -> Result<Vec<Event>, SessionError> {
        let _guard = self.file.lock().expect("store poisoned");
        let reader = BufReader::new(File::open(&self.path).map_err(|e| io_err(&self.path, e))?);
        let mut text = String::new();
        for line in reader.lines() {
            text.push_str(&line.map_err(|e| io_err(&self.path, e))?);
            text.push('\n');
        }
        parse_log(&text)
    }
}
