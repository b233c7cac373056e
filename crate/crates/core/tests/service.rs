mod common;

use axum::http::StatusCode;
use common::*;
use serde_json::{json, Value};
use stepwise::service::codes;

async fn start(app: &TestApp, quiz: &str, student: &str, seed: u64) -> Value {
    let r = post_json(&app.router, &format!("/api/quizzes/{quiz}/attempts"), json!({"student_id": student, "seed": seed})).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.text);
    r.json()
}

fn walkthrough_answer(values: [&str; 5]) -> Value {
    let fields: serde_json::Map<String, Value> =
        ["E", "F", "G", "H", "I"].iter().zip(values).map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({"item_id": "det-walkthrough", "payload": {"fields": fields}})
}

#[tokio::test]
async fn lists_quizzes() {
    let app = test_app(1);
    let r = call(&app.router, "GET", "/api/quizzes", None).await;
    assert_eq!(r.status, StatusCode::OK);
    let ids: Vec<String> = r.json().as_array().unwrap().iter().map(|q| q["id"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids, ["determinants", "integration-bounds", "walkthrough"]);
}

#[tokio::test]
async fn walkthrough_happy_path() {
    let app = test_app(1);
    let attempt = start(&app, "walkthrough", "s1", 1).await;
    let id = attempt["attempt_id"].as_str().unwrap();
    let r = post_json(&app.router, &format!("/api/attempts/{id}/answers"), walkthrough_answer(["1", "-3", "2", "1", "2"])).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text);
    let feedback = r.json();
    assert_eq!(feedback["result"]["score"], "1");
    assert!(feedback["result"]["parts"].as_array().unwrap().iter().all(|p| p["verdict"] == "correct"));

    let r = call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    assert_eq!(r.status, StatusCode::OK);
    let summary = r.json();
    assert_eq!(summary["total"], "100");
    assert_eq!(summary["items"][0]["score"], "1");
}

#[tokio::test]
async fn finalized_attempts_conflict() {
    let app = test_app(1);
    let attempt = start(&app, "walkthrough", "s1", 1).await;
    let id = attempt["attempt_id"].as_str().unwrap();
    let first = call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    assert_eq!(first.status, StatusCode::OK);
    let before = call(&app.router, "GET", &format!("/api/attempts/{id}"), None).await.text;

    let again = call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    assert_eq!((again.status, again.code().as_str()), (StatusCode::CONFLICT, codes::ALREADY_FINALIZED));
    let late = post_json(&app.router, &format!("/api/attempts/{id}/answers"), walkthrough_answer(["1", "-3", "2", "1", "2"])).await;
    assert_eq!((late.status, late.code().as_str()), (StatusCode::CONFLICT, codes::ATTEMPT_NOT_ACTIVE));
    assert_eq!(call(&app.router, "GET", &format!("/api/attempts/{id}"), None).await.text, before);

    let limit = post_json(&app.router, "/api/quizzes/walkthrough/attempts", json!({"student_id": "s1"})).await;
    assert_eq!((limit.status, limit.code().as_str()), (StatusCode::CONFLICT, codes::ATTEMPT_LIMIT));
}

#[tokio::test]
async fn time_limit_expires_attempts() {
    let app = test_app(1);
    let attempt = start(&app, "walkthrough", "s1", 1).await;
    let id = attempt["attempt_id"].as_str().unwrap();
    app.clock.advance(601);
    let r = post_json(&app.router, &format!("/api/attempts/{id}/answers"), walkthrough_answer(["1", "-3", "2", "1", "2"])).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::CONFLICT, codes::TIME_EXPIRED));
    let view = call(&app.router, "GET", &format!("/api/attempts/{id}"), None).await.json();
    assert_eq!(view["state"], "expired");
    let summary = call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await.json();
    assert_eq!(summary["total"], "0");
}

#[tokio::test]
async fn unknown_ids_are_not_found() {
    let app = test_app(1);
    let r = post_json(&app.router, "/api/quizzes/nope/attempts", json!({"student_id": "s"})).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::NOT_FOUND, codes::UNKNOWN_QUIZ));
    let r = call(&app.router, "GET", "/api/attempts/att-999999", None).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::NOT_FOUND, codes::UNKNOWN_ATTEMPT));
    let attempt = start(&app, "walkthrough", "s1", 1).await;
    let id = attempt["attempt_id"].as_str().unwrap();
    let r = post_json(&app.router, &format!("/api/attempts/{id}/answers"), json!({"item_id": "zzz", "payload": {"choice": 0}})).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::NOT_FOUND, codes::UNKNOWN_ITEM));
    let r = post_json(&app.router, &format!("/api/attempts/{id}/answers"), json!({"item_id": "det-walkthrough", "payload": {"choice": 0}})).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::UNPROCESSABLE_ENTITY, codes::INVALID_SUBMISSION));
    let r = call(&app.router, "POST", &format!("/api/attempts/{id}/answers"), Some(("application/json", "{".into()))).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::BAD_REQUEST, codes::INVALID_REQUEST));
}

#[tokio::test]
async fn bank_upload_reports_issues() {
    let app = test_app(1);
    let item = json!({"type": "multiple_choice", "id": "dup", "prompt": "p", "options": ["a", "b"], "correct_index": 0});
    let bad = json!({"version": 1, "items": [item.clone(), item.clone()]});
    let r = post_json(&app.router, "/api/admin/banks", bad).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::UNPROCESSABLE_ENTITY, codes::INVALID_BANK));
    let issues = r.json()["detail"].as_array().unwrap().clone();
    assert!(issues.iter().any(|i| i["issue"] == "duplicate_id"), "{issues:?}");

    let r = call(&app.router, "POST", "/api/admin/banks", Some(("application/json", "not json".into()))).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::UNPROCESSABLE_ENTITY, codes::UNPARSEABLE_BANK));

    let good = json!({"version": 1, "items": [item]});
    let r = post_json(&app.router, "/api/admin/banks", good).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({"accepted": true, "items": 1}));
}

#[tokio::test]
async fn export_and_analysis() {
    let app = test_app(1);
    for s in 0..6u64 {
        let attempt = start(&app, "walkthrough", &format!("s{s}"), s).await;
        let id = attempt["attempt_id"].as_str().unwrap();
        let mut answer = ["1", "-3", "2", "1", "2"];
        for slot in answer.iter_mut().take(s as usize % 5) {
            *slot = "7";
        }
        post_json(&app.router, &format!("/api/attempts/{id}/answers"), walkthrough_answer(answer)).await;
        call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    }
    let r = call(&app.router, "GET", "/api/admin/export?quiz=walkthrough&granularity=with_field_subscores", None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.text.starts_with("student_id,A,C,C.E,C.F,C.G,C.H,C.I\n"), "{}", r.text);
    assert_eq!(r.text.lines().count(), 7);

    let report = call(&app.router, "POST", "/api/admin/analysis?granularity=fields", Some(("text/csv", r.text.clone()))).await;
    assert_eq!(report.status, StatusCode::OK, "{}", report.text);
    let by_csv = report.json();
    assert_eq!(by_csv["item"], "C");
    assert_eq!(by_csv["correlations"]["labels"].as_array().unwrap().len(), 5);

    let by_ref = post_json(&app.router, "/api/admin/analysis", json!({"quiz": "walkthrough", "granularity": "fields"})).await;
    assert_eq!(by_ref.json(), by_csv);

    let r = call(&app.router, "GET", "/api/admin/export?quiz=nope", None).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    let r = call(&app.router, "POST", "/api/admin/analysis", Some(("text/csv", "student_id,A\nx,1\n".into()))).await;
    assert_eq!((r.status, r.code().as_str()), (StatusCode::UNPROCESSABLE_ENTITY, codes::ANALYSIS_FAILED));
}

#[tokio::test]
async fn deferred_feedback_hides_results_until_finalize() {
    let app = test_app(1);
    let attempt = start(&app, "integration-bounds", "s1", 3).await;
    let id = attempt["attempt_id"].as_str().unwrap();
    let r = post_json(&app.router, &format!("/api/attempts/{id}/answers"), walkthrough_answer(["1", "-3", "2", "1", "2"])).await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.json().get("result").is_none());
    let view = call(&app.router, "GET", &format!("/api/attempts/{id}"), None).await.json();
    assert!(view["responses"]["det-walkthrough"].get("result").is_none());
    call(&app.router, "POST", &format!("/api/attempts/{id}/finalize"), None).await;
    let view = call(&app.router, "GET", &format!("/api/attempts/{id}"), None).await.json();
    assert_eq!(view["responses"]["det-walkthrough"]["result"]["score"], "1");
}

#[tokio::test]
async fn server_draws_a_seed_when_omitted() {
    let app = test_app(2);
    let r = post_json(&app.router, "/api/quizzes/walkthrough/attempts", json!({"student_id": "s1"})).await;
    assert_eq!(r.status, StatusCode::CREATED);
    let attempt = r.json();
    let stored = app.state.engine.attempt(attempt["attempt_id"].as_str().unwrap()).unwrap();
    assert_eq!(attempt["seed"].as_u64(), Some(stored.seed));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 8)]
async fn concurrent_creations_respect_the_limit() {
    for limit in [1u32, 3] {
        let app = test_app(limit);
        let tasks: Vec<_> = (0..50)
            .map(|i| {
                let router = app.router.clone();
                tokio::spawn(async move {
                    post_json(&router, "/api/quizzes/walkthrough/attempts", json!({"student_id": "same", "seed": i})).await
                })
            })
            .collect();
        let mut created = 0;
        for t in tasks {
            let r = t.await.unwrap();
            match r.status {
                StatusCode::CREATED => created += 1,
                StatusCode::CONFLICT => assert_eq!(r.code(), codes::ATTEMPT_LIMIT),
                other => panic!("unexpected {other}"),
            }
        }
        assert_eq!(created, limit);
        assert_eq!(app.state.engine.events().unwrap().len(), limit as usize);
    }
}

#[tokio::test]
async fn student_responses_carry_no_key_material() {
    let app = test_app(1);
    let mut kinds = std::collections::BTreeSet::new();
    for (k, quiz) in ["determinants", "integration-bounds", "walkthrough"].iter().enumerate() {
        for (route, body) in student_traffic(&app, quiz, &format!("s{k}"), 40 + k as u64).await {
            if let Some(items) = body["items"].as_array() {
                kinds.extend(items.iter().filter_map(|i| i["type"].as_str().map(String::from)));
            }
            let leaks = audit(&body);
            assert!(leaks.is_empty(), "{quiz} {route}: {leaks:?}");
        }
    }
    assert_eq!(kinds.len(), 3);
}

#[tokio::test]
async fn shuffled_views_are_permutations() {
    let app = test_app(1);
    let bank = &demo_banks()[0];
    let stepwise::assessment::Item::MultipleChoice(mc) = bank.find("bounds-mc").unwrap() else { panic!() };
    let stepwise::assessment::Item::DragDrop(dd) = bank.find("bounds-dd").unwrap() else { panic!() };
    let mut orders = std::collections::BTreeSet::new();
    for s in 0..8u64 {
        let view = start(&app, "integration-bounds", &format!("s{s}"), s).await;
        let items = view["items"].as_array().unwrap();
        let options: Vec<String> = items[0]["options"].as_array().unwrap().iter().map(|o| o.as_str().unwrap().into()).collect();
        let tokens: Vec<String> = items[1]["tokens"].as_array().unwrap().iter().map(|o| o.as_str().unwrap().into()).collect();
        let (mut a, mut b) = (options.clone(), mc.options.clone());
        a.sort();
        b.sort();
        assert_eq!(a, b);
        let (mut a, mut b) = (tokens, dd.tokens.clone());
        a.sort();
        b.sort();
        assert_eq!(a, b);
        orders.insert(options);
    }
    assert!(orders.len() > 1);
}
