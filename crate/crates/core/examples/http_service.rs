//! The HTTP API, exercised in-process. Pass `--listen PORT` to keep serving
//! the committed banks afterwards.
//!
//! ```text
//! cargo run --example http_service
//! cargo run --example http_service -- --listen 8080
//! ```

use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use stepwise::service::{load_documents, router, serve, AppState, ServiceConfig, SystemClock};
use stepwise::session::{MemoryStore, SessionEngine};
use tower::ServiceExt;

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (u16, String) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status().as_u16();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8_lossy(&bytes).into_owned())
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bank_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("banks");
    let engine = SessionEngine::open(Arc::new(MemoryStore::new()))?;
    let (banks, quizzes) = load_documents(&bank_dir)?;
    for doc in quizzes {
        engine.register_quiz(doc.into_quiz(&banks)?)?;
    }
    let app = router(Arc::new(AppState::new(engine, banks, Arc::new(SystemClock))), None);

    let (_, quizzes) = send(&app, "GET", "/api/quizzes", None).await;
    println!("GET /api/quizzes\n  {quizzes}");

    let (status, text) = send(&app, "POST", "/api/quizzes/integration-bounds/attempts", Some(json!({"student_id": "grace", "seed": 5}))).await;
    let view: Value = serde_json::from_str(&text)?;
    let id = view["attempt_id"].as_str().unwrap().to_string();
    println!("POST attempts -> {status}, items:");
    for item in view["items"].as_array().unwrap() {
        println!("  {} {} {}", item["label"], item["type"], item["prompt"]);
    }

    let answer = json!({"item_id": "bounds-dd", "payload": {"placements": {"a": "-2", "b": "2", "c": "4", "d": "x^2"}}});
    let (status, text) = send(&app, "POST", &format!("/api/attempts/{id}/answers"), Some(answer)).await;
    println!("POST answers -> {status}: {text}");
    let (status, text) = send(&app, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    println!("POST finalize -> {status}: {text}");
    let (status, text) = send(&app, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    println!("POST finalize again -> {status}: {text}");

    let (_, csv) = send(&app, "GET", "/api/admin/export?quiz=integration-bounds&granularity=with_field_subscores", None).await;
    println!("GET export\n{csv}");

    let mut args = std::env::args().skip(1);
    if args.next().as_deref() == Some("--listen") {
        let port = args.next().and_then(|p| p.parse().ok()).unwrap_or(8080);
        let data = std::env::temp_dir().join("stepwise-data");
        let config = ServiceConfig { port, bank_dir, data_dir: data, cors_origin: Some("*".into()) };
        serve(config).await?;
    }
    Ok(())
}
