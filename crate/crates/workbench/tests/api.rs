use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use kanbench::doc::{Document, MorphismBody, MorphismDoc};
use kanbench::fixtures::{self, fixture_dir, fixture_path, times_two_config};
use kanbench::load::read_document;
use kanbench::service::{router, AppState};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(AppState::new(fixture_dir()))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

fn doc_value(name: &str) -> Value {
    read_document(&fixture_path(name)).unwrap().to_value()
}

async fn create(app: &Router, config: Value) -> Value {
    let (status, state) =
        call(app, Method::POST, "/sessions", Some(json!({"model": doc_value(fixtures::CAT_MODEL), "config": config})))
            .await;
    assert_eq!(status, StatusCode::CREATED, "{state}");
    state
}

fn identity_on_two() -> Value {
    let Document::Presheaf(two) = read_document(&fixture_path(fixtures::TWO_PRESHEAF)).unwrap() else { panic!() };
    let components = two
        .sets
        .iter()
        .map(|(obj, elems)| (obj.clone(), elems.iter().map(|e| (e.clone(), e.clone())).collect()))
        .collect();
    let body = MorphismBody { source: two.body(), target: two.body(), components };
    Document::Morphism(MorphismDoc::new(two.base.clone(), body)).to_value()
}

#[tokio::test(flavor = "multi_thread")]
async fn an_isomorphism_is_already_won() {
    let app = app();
    let state = create(&app, identity_on_two()).await;
    assert_eq!(state["status"], "Won");
    assert_eq!(state["won"], true);
    assert_eq!(state["can_undo"], false);
    let id = state["session_id"].as_str().unwrap();
    let (status, page) = call(&app, Method::GET, &format!("/sessions/{id}/moves"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(page["total"], 0);
}

async fn dom_e_moves(app: &Router, id: &str) -> Vec<Value> {
    let (status, page) = call(app, Method::GET, &format!("/sessions/{id}/moves?kind=DomE&condition=g_lu"), None).await;
    assert_eq!(status, StatusCode::OK, "{page}");
    page["moves"].as_array().unwrap().clone()
}

#[tokio::test(flavor = "multi_thread")]
async fn three_dom_e_moves_win_the_lu_game() {
    let app = app();
    let state = create(&app, doc_value(&times_two_config("g_lu"))).await;
    assert_eq!(state["status"], "Open");
    let id = state["session_id"].as_str().unwrap().to_string();
    let m = state["sizes"].as_array().unwrap().iter().find(|r| r["object"] == "m").unwrap().clone();
    assert_eq!((m["source"].as_u64(), m["target"].as_u64()), (Some(12), Some(9)));

    let mut last = state;
    for round in 0..3 {
        assert_eq!(last["won"], false, "won early at round {round}");
        let moves = dom_e_moves(&app, &id).await;
        assert!(!moves.is_empty());
        assert!(moves.iter().all(|mv| mv["kind"] == "DomE" && mv["condition_name"] == "g_lu"));
        let mv = moves[0]["id"].as_str().unwrap();
        let (status, next) = call(&app, Method::POST, &format!("/sessions/{id}/moves/{mv}"), None).await;
        assert_eq!(status, StatusCode::OK, "{next}");
        last = next;
    }
    assert_eq!(last["status"], "Won");
    assert_eq!(last["moves_played"], 3);

    // The exported trace replays through the command line to the same digest.
    let (status, trace) = call(&app, Method::GET, &format!("/sessions/{id}/trace"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(trace["kind"], "trace");
    let path = std::env::temp_dir().join(format!("kanbench-api-{}.trace.json", std::process::id()));
    std::fs::write(&path, Document::from_value("trace", trace).unwrap().to_canonical()).unwrap();
    let mut out = Vec::new();
    let argv = ["kanbench", "--json", "replay", "--trace", path.to_str().unwrap()].map(Into::into);
    assert_eq!(kanbench::cli::run(argv, &mut out), 0);
    std::fs::remove_file(&path).unwrap();
    let report: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(report["final_digest"], last["digest"]);
    assert_eq!(report["won"], true);
}

#[tokio::test(flavor = "multi_thread")]
async fn undo_restores_the_digest() {
    let app = app();
    let state = create(&app, doc_value(&times_two_config("g_p"))).await;
    let id = state["session_id"].as_str().unwrap().to_string();
    let (_, page) = call(&app, Method::GET, &format!("/sessions/{id}/moves"), None).await;
    let mv = page["moves"][0]["id"].as_str().unwrap().to_string();

    let (status, after) = call(&app, Method::POST, &format!("/sessions/{id}/moves/{mv}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_ne!(after["digest"], state["digest"]);
    assert_eq!(after["can_undo"], true);

    let (status, undone) = call(&app, Method::POST, &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(undone["digest"], state["digest"]);
    assert_eq!(undone["moves_played"], 0);
    let (_, trace) = call(&app, Method::GET, &format!("/sessions/{id}/trace"), None).await;
    assert_eq!(trace["payload"]["steps"].as_array().unwrap().len(), 0);

    let (status, err) = call(&app, Method::POST, &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(err["error"], "NothingToUndo");
}

#[tokio::test(flavor = "multi_thread")]
async fn stale_moves_are_rejected() {
    let app = app();
    let state = create(&app, doc_value(&times_two_config("g_lu"))).await;
    let id = state["session_id"].as_str().unwrap().to_string();
    let moves = dom_e_moves(&app, &id).await;
    let mv = moves[0]["id"].as_str().unwrap().to_string();
    let (status, _) = call(&app, Method::POST, &format!("/sessions/{id}/moves/{mv}"), None).await;
    assert_eq!(status, StatusCode::OK);
    let (status, err) = call(&app, Method::POST, &format!("/sessions/{id}/moves/{mv}"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(err["error"], "StaleMove");
    let (status, err) = call(&app, Method::POST, &format!("/sessions/{id}/moves/not-a-move"), None).await;
    assert_eq!(status, StatusCode::CONFLICT, "{err}");
}

#[tokio::test(flavor = "multi_thread")]
async fn listing_filters_and_pages() {
    let app = app();
    let state = create(&app, doc_value(&times_two_config("g_ass"))).await;
    let id = state["session_id"].as_str().unwrap().to_string();
    let (_, productive) = call(&app, Method::GET, &format!("/sessions/{id}/moves"), None).await;
    let (_, all) = call(&app, Method::GET, &format!("/sessions/{id}/moves?all=true"), None).await;
    assert!(all["total"].as_u64() >= productive["total"].as_u64());
    assert!(all["moves"].as_array().unwrap().len() <= all["page_size"].as_u64().unwrap() as usize);

    let total = all["total"].as_u64().unwrap() as usize;
    let page_size = all["page_size"].as_u64().unwrap() as usize;
    let mut seen = std::collections::BTreeSet::new();
    for page in 0..total.div_ceil(page_size) {
        let (_, p) = call(&app, Method::GET, &format!("/sessions/{id}/moves?all=true&page={page}"), None).await;
        for mv in p["moves"].as_array().unwrap() {
            assert!(seen.insert(mv["id"].as_str().unwrap().to_string()));
        }
    }
    assert_eq!(seen.len(), total);

    for kind in ["DomE", "DomU", "CodE", "CodU"] {
        let (status, p) =
            call(&app, Method::GET, &format!("/sessions/{id}/moves?all=true&kind={kind}&condition=3"), None).await;
        assert_eq!(status, StatusCode::OK);
        assert!(p["moves"].as_array().unwrap().iter().all(|mv| mv["kind"] == kind && mv["condition"] == 3));
    }
    let (status, err) = call(&app, Method::GET, &format!("/sessions/{id}/moves?kind=Sideways"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["error"], "BadRequest");
    let (status, _) = call(&app, Method::GET, &format!("/sessions/{id}/moves?condition=g_nope"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test(flavor = "multi_thread")]
async fn unknown_sessions_and_invalid_documents() {
    let app = app();
    for (method, uri) in [
        (Method::GET, "/sessions/nope"),
        (Method::GET, "/sessions/nope/moves"),
        (Method::POST, "/sessions/nope/moves/x"),
        (Method::POST, "/sessions/nope/undo"),
        (Method::GET, "/sessions/nope/trace"),
    ] {
        let (status, err) = call(&app, method, uri, None).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert_eq!(err["error"], "UnknownSession");
    }

    // A configuration over Set×Set cannot be played in the Cat model.
    let mut config = identity_on_two();
    config["payload"]["base"] = json!({"ref": fixtures::SETSET_PRESENTATION});
    let (status, err) =
        call(&app, Method::POST, "/sessions", Some(json!({"model": doc_value(fixtures::CAT_MODEL), "config": config})))
            .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"], "ValidationError");

    let mut config = identity_on_two();
    config["payload"]["components"]["o"]["0"] = json!("1");
    let (status, err) =
        call(&app, Method::POST, "/sessions", Some(json!({"model": doc_value(fixtures::CAT_MODEL), "config": config})))
            .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"], "ValidationError");

    let (status, err) = call(
        &app,
        Method::POST,
        "/sessions",
        Some(json!({"model": doc_value(fixtures::CAT_MODEL), "config": doc_value(fixtures::CAT_MODEL)})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err["error"], "ParseError");
}
