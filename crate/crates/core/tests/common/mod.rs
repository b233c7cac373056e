#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use stepwise::assessment::{walkthrough_item, BankDocument, Item};
use stepwise::mathcore::rational::int;
use stepwise::service::{load_documents, router, AppState, ManualClock};
use stepwise::session::{ItemSource, MemoryStore, Quiz, QuizEntry, QuizSettings, SessionEngine};

pub fn bank_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("banks")
}

pub fn demo_banks() -> Vec<BankDocument> {
    load_documents(&bank_dir()).unwrap().0
}

/// Quiz `id` by loading the committed bank directory.
pub fn committed_quiz(id: &str) -> Quiz {
    let (banks, quizzes) = load_documents(&bank_dir()).unwrap();
    quizzes
        .into_iter()
        .find(|q| q.quiz.id == id)
        .unwrap()
        .into_quiz(&banks)
        .unwrap()
}

pub fn walkthrough_quiz(max_attempts: u32) -> Quiz {
    Quiz {
        id: "walkthrough".into(),
        title: "Determinant equation".into(),
        settings: QuizSettings {
            max_attempts,
            time_limit_secs: Some(600),
            ..QuizSettings::default()
        },
        entries: vec![QuizEntry {
            label: "C".into(),
            weight: int(1),
            difficulty: 0.0,
            source: ItemSource::Item(Item::Stepwise(walkthrough_item())),
        }],
    }
}

pub struct TestApp {
    pub router: Router,
    pub state: Arc<AppState>,
    pub clock: Arc<ManualClock>,
}

/// All committed quizzes plus `walkthrough_quiz(max_attempts)` on an in-memory log.
pub fn test_app(max_attempts: u32) -> TestApp {
    let engine = SessionEngine::open(Arc::new(MemoryStore::new())).unwrap();
    let (banks, quizzes) = load_documents(&bank_dir()).unwrap();
    for doc in quizzes {
        engine.register_quiz(doc.into_quiz(&banks).unwrap()).unwrap();
    }
    engine.register_quiz(walkthrough_quiz(max_attempts)).unwrap();
    let clock = Arc::new(ManualClock::new(1_000));
    let state = Arc::new(AppState::new(engine, banks, clock.clone()));
    TestApp {
        router: router(state.clone(), Some("*")),
        state,
        clock,
    }
}

pub struct Reply {
    pub status: StatusCode,
    pub text: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.text).unwrap_or_else(|e| panic!("{e}: {}", self.text))
    }

    pub fn code(&self) -> String {
        self.json()["code"].as_str().unwrap_or_default().to_string()
    }
}

pub async fn call(app: &Router, method: &str, uri: &str, body: Option<(&str, String)>) -> Reply {
    use tower::ServiceExt;
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some((content_type, text)) => {
            req = req.header("content-type", content_type);
            Body::from(text)
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        text: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

pub async fn post_json(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, "POST", uri, Some(("application/json", body.to_string()))).await
}

/// JSON member names that would leak answer keys.
pub const KEY_MEMBERS: [&str; 5] = ["expected", "correct_index", "answer", "key", "option_order"];

/// Paths of forbidden members anywhere in `value`.
pub fn key_material(value: &Value) -> Vec<String> {
    fn walk(v: &Value, path: &str, out: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let here = format!("{path}.{k}");
                    if KEY_MEMBERS.contains(&k.as_str()) {
                        out.push(here.clone());
                    }
                    walk(child, &here, out);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(child, &format!("{path}[{i}]"), out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(value, "$", &mut out);
    out
}

/// Every member name a student-facing response may carry.
pub const STUDENT_MEMBERS: [&str; 42] = [
    "attempt_id", "quiz_id", "student_id", "seed", "state", "feedback_mode", "started_at", "deadline",
    "finalized_at", "items", "responses", "item_id", "label", "points", "type", "prompt", "reveal_mode",
    "steps", "fields", "weight", "options", "image_ref", "slots", "tokens", "tries", "at", "result", "score",
    "parts", "step", "verdict", "feedback", "field_scores", "accepted", "total", "max", "answered", "earned",
    "code", "message", "detail", "title",
];

/// Member names outside `STUDENT_MEMBERS`, plus any forbidden ones.
/// Children of `responses` are keyed by item id and exempt.
pub fn audit(value: &Value) -> Vec<String> {
    fn walk(v: &Value, path: &str, dynamic_keys: bool, out: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let here = format!("{path}.{k}");
                    if !dynamic_keys && !STUDENT_MEMBERS.contains(&k.as_str()) {
                        out.push(here.clone());
                    }
                    walk(child, &here, k == "responses" && !dynamic_keys, out);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(child, &format!("{path}[{i}]"), false, out);
                }
            }
            _ => {}
        }
    }
    let mut out = key_material(value);
    walk(value, "$", false, &mut out);
    out
}

/// Drives one attempt through every route a student uses, answering each
/// item wrongly first and then again, and returns each response body.
pub async fn student_traffic(app: &TestApp, quiz: &str, student: &str, seed: u64) -> Vec<(String, Value)> {
    let mut seen = Vec::new();
    let r = post_json(&app.router, &format!("/api/quizzes/{quiz}/attempts"), serde_json::json!({"student_id": student, "seed": seed})).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.text);
    let view = r.json();
    seen.push(("create".to_string(), view.clone()));
    let id = view["attempt_id"].as_str().unwrap().to_string();
    for item in view["items"].as_array().unwrap() {
        let item_id = item["item_id"].as_str().unwrap();
        let payloads: Vec<Value> = match item["type"].as_str().unwrap() {
            "stepwise" => {
                let labels: Vec<&str> = item["steps"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .flat_map(|s| s["fields"].as_array().unwrap().iter().map(|f| f["label"].as_str().unwrap()))
                    .collect();
                let wrong: serde_json::Map<String, Value> = labels.iter().map(|l| (l.to_string(), Value::from("31337"))).collect();
                let blank: serde_json::Map<String, Value> = labels.iter().take(1).map(|l| (l.to_string(), Value::from("x?"))).collect();
                vec![serde_json::json!({"fields": wrong}), serde_json::json!({"fields": blank})]
            }
            "multiple_choice" => (0..item["options"].as_array().unwrap().len()).map(|i| serde_json::json!({"choice": i})).collect(),
            "drag_drop" => {
                let slots = item["slots"].as_array().unwrap();
                let tokens = item["tokens"].as_array().unwrap();
                let placed: serde_json::Map<String, Value> = slots
                    .iter()
                    .zip(tokens.iter().rev())
                    .map(|(s, t)| (s.as_str().unwrap().to_string(), t.clone()))
                    .collect();
                vec![serde_json::json!({"placements": placed}), serde_json::json!({"placements": {}})]
            }
            other => panic!("unknown item type {other}"),
        };
        for payload in payloads {
            let r = post_json(&app.router, &format!("/api/attempts/{id}/answers"), serde_json::json!({"item_id": item_id, "payload": payload})).await;
            assert_eq!(r.status, StatusCode::OK, "{}", r.text);
            seen.push(("answer".to_string(), r.json()));
        }
    }
    seen.push(("get".to_string(), call(&app.router, "GET", &format!("/api/attempts/{id}"), None).await.json()));
    seen.push(("finalize".to_string(), call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await.json()));
    seen.push(("get-final".to_string(), call(&app.router, "GET", &format!("/api/attempts/{id}"), None).await.json()));
    let again = call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    seen.push(("finalize-again".to_string(), again.json()));
    seen
}
