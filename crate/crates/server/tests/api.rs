use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use zeck_core::engine::Move;
use zeck_core::solver::SolverConfig;
use zeck_core::{SeatingConfig, Session};
use zeck_server::{router, AppState, GameView};

fn app() -> Router {
    router(Arc::new(AppState::new(SolverConfig::default())))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header(header::CONTENT_TYPE, "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn new_game(app: &Router, body: Value) -> Value {
    let (status, view) = call(app, Method::POST, "/games", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{view}");
    view
}

async fn play(app: &Router, id: &str, token: &str) -> (StatusCode, Value) {
    call(app, Method::POST, &format!("/games/{id}/moves"), Some(json!({ "move": token }))).await
}

#[tokio::test]
async fn create_games() {
    let app = app();
    let view = new_game(&app, json!({"n": 5, "players": 3, "alliances": [[1], [2], [3]]})).await;
    assert_eq!(view["state"], json!({"n": 5, "counts": [5]}));
    assert_eq!(view["to_move"], 1);
    assert_eq!(view["turn"], 0);

    let view = new_game(&app, json!({"n": 30, "players": 6, "alliances": [[1, 2, 3, 4], [5, 6]]})).await;
    assert_eq!(view["teams"], json!([[1, 2, 3, 4], [5, 6]]));

    for bad in [
        json!({"n": 0, "players": 3}),
        json!({"n": 5, "players": 0}),
        json!({"n": 5, "players": 3, "alliances": [[1, 2]]}),
        json!({"n": 5, "players": 3, "human_players": [4]}),
        json!({"n": "five", "players": 3}),
        json!({"players": 3}),
    ] {
        let (status, body) = call(&app, Method::POST, "/games", Some(bad.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{bad} -> {body}");
        assert!(body["error"].is_string());
    }
    let (_, body) = call(&app, Method::POST, "/games", Some(json!({"n": 0, "players": 3}))).await;
    assert!(body["error"].as_str().unwrap().starts_with("n:"), "{body}");
}

#[tokio::test]
async fn legal_moves_and_split() {
    let app = app();
    let view = new_game(&app, json!({"n": 5, "players": 3})).await;
    let id = view["id"].as_str().unwrap();
    let (status, legal) = call(&app, Method::GET, &format!("/games/{id}/legal"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(legal, json!(["c1"]));

    let view = new_game(&app, json!({"n": 4, "players": 2})).await;
    let id = view["id"].as_str().unwrap();
    play(&app, id, "c1").await;
    let (_, view) = play(&app, id, "c1").await;
    assert_eq!(view["state"]["counts"], json!([0, 2]));
    let (status, view) = play(&app, id, "s2").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(view["state"]["counts"], json!([1, 0, 1]));
    assert_eq!(view["finished"], true);
    assert_eq!(view["winner"], json!({"player": 1, "team": 1}));
    assert_eq!(view["to_move"], Value::Null);
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let (status, _) = call(&app, Method::GET, "/games/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = play(&app, "nope", "c1").await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let view = new_game(&app, json!({"n": 3, "players": 2})).await;
    let id = view["id"].as_str().unwrap();
    let (status, body) = play(&app, id, "bogus").await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    let (status, body) = play(&app, id, "s2").await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(body["error"].as_str().unwrap().contains("requires 2 copies of F_2"), "{body}");

    play(&app, id, "c1").await;
    let (_, view) = play(&app, id, "adj:1").await;
    assert_eq!(view["winner"]["player"], 2);
    let (status, body) = play(&app, id, "c1").await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "game is over");
    let (status, _) = call(&app, Method::GET, &format!("/games/{id}/analysis"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn analysis_is_exact_and_stable() {
    let app = app();
    let view = new_game(&app, json!({"n": 5, "players": 2})).await;
    let id = view["id"].as_str().unwrap();
    let uri = format!("/games/{id}/analysis?coalition=team2");
    let (status, first) = call(&app, Method::GET, &uri, None).await;
    assert_eq!(status, StatusCode::OK, "{first}");
    assert_eq!(first["win"], true);
    assert_eq!(first["coalition"], json!([2]));
    assert_eq!(first["best_move"], "c1");
    let (_, second) = call(&app, Method::GET, &uri, None).await;
    assert_eq!(first, second);

    // default coalition: team of the player to move
    let (_, mover) = call(&app, Method::GET, &format!("/games/{id}/analysis"), None).await;
    assert_eq!(mover["coalition"], json!([1]));
    assert_eq!(mover["win"], false);

    let (status, _) = call(&app, Method::GET, &format!("/games/{id}/analysis?coalition=team9"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn capacity_maps_to_503() {
    let app = router(Arc::new(AppState::new(SolverConfig { state_cap: 5 })));
    let view = new_game(&app, json!({"n": 20, "players": 3})).await;
    let id = view["id"].as_str().unwrap();
    let (status, body) = call(&app, Method::GET, &format!("/games/{id}/analysis"), None).await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
    assert!(body["error"].as_str().unwrap().contains("state limit of 5"));
}

#[tokio::test]
async fn scripted_game_mirrors_engine() {
    let app = app();
    let view = new_game(&app, json!({"n": 5, "players": 3, "alliances": [[1], [2], [3]]})).await;
    let id = view["id"].as_str().unwrap().to_string();
    let mut snapshots = vec![view];
    loop {
        let (_, view) = call(&app, Method::GET, &format!("/games/{id}"), None).await;
        let (_, legal) = call(&app, Method::GET, &format!("/games/{id}/legal"), None).await;
        assert_eq!(view["legal"], legal);
        if view["finished"] == true {
            break;
        }
        // take the last legal move to vary the line
        let token = legal.as_array().unwrap().last().unwrap().as_str().unwrap().to_string();
        let (status, after) = play(&app, &id, &token).await;
        assert_eq!(status, StatusCode::OK);
        snapshots.push(after);
    }

    let last: GameView = serde_json::from_value(snapshots.last().unwrap().clone()).unwrap();
    let seating = SeatingConfig::singletons(3).unwrap();
    for (k, snap) in snapshots.iter().enumerate() {
        let replayed = Session::replay(5, seating.clone(), &last.moves[..k]).unwrap();
        let snap: GameView = serde_json::from_value(snap.clone()).unwrap();
        assert_eq!(&snap.state, replayed.state());
        assert_eq!(snap.turn, replayed.turn());
        assert_eq!(snap.winner, replayed.winner());
    }
    let winner = last.winner.unwrap();
    assert_eq!(winner.player, (last.moves.len() - 1) % 3 + 1);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_posts_are_serialized() {
    let app = app();
    let view = new_game(&app, json!({"n": 10, "players": 2})).await;
    let id = view["id"].as_str().unwrap();
    let uri = format!("/games/{id}/moves");
    let body = json!({"move": "c1", "turn": 0});
    let post = |app: Router, uri: String, body: Value| {
        tokio::spawn(async move { call(&app, Method::POST, &uri, Some(body)).await })
    };
    let a = post(app.clone(), uri.clone(), body.clone());
    let b = post(app.clone(), uri.clone(), body.clone());
    let (a, b) = (a.await.unwrap(), b.await.unwrap());
    let mut statuses = [a.0, b.0];
    statuses.sort();
    assert_eq!(statuses, [StatusCode::OK, StatusCode::CONFLICT]);
    let (_, view) = call(&app, Method::GET, &format!("/games/{id}"), None).await;
    assert_eq!(view["turn"], 1);
}

#[tokio::test]
async fn machine_seats_play_for_their_team() {
    let app = app();
    let view = new_game(&app, json!({"n": 10, "players": 2, "human_players": [1]})).await;
    let id = view["id"].as_str().unwrap().to_string();
    let mut view = view;
    while view["finished"] == false {
        assert_eq!(view["to_move"], 1);
        let token = view["legal"][0].as_str().unwrap().to_string();
        let (status, next) = play(&app, &id, &token).await;
        assert_eq!(status, StatusCode::OK);
        view = next;
    }
    // player 2 has a winning strategy and the machine finds it
    assert_eq!(view["winner"]["player"], 2);
}

#[tokio::test]
async fn machine_moves_first_when_seat_one_is_machine() {
    let app = app();
    let view = new_game(&app, json!({"n": 6, "players": 2, "human_players": [2]})).await;
    assert_eq!(view["turn"], 1);
    assert_eq!(view["moves"], json!(["c1"]));
    let moves: Vec<Move> = serde_json::from_value(view["moves"].clone()).unwrap();
    assert_eq!(moves, vec![Move::CombineOnes]);
}

#[tokio::test]
async fn snapshot_file_restores_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("games.jsonl");
    let id;
    let before;
    {
        let state = AppState::with_persistence(SolverConfig::default(), path.clone()).unwrap();
        let app = router(Arc::new(state));
        let view = new_game(&app, json!({"n": 7, "players": 3, "alliances": [[1, 2], [3]]})).await;
        id = view["id"].as_str().unwrap().to_string();
        play(&app, &id, "c1").await;
        let (_, v) = play(&app, &id, "c1").await;
        before = v;
    }
    let lines = std::fs::read_to_string(&path).unwrap().lines().count();
    assert_eq!(lines, 3);

    let state = AppState::with_persistence(SolverConfig::default(), path.clone()).unwrap();
    assert_eq!(state.sessions.len(), 1);
    let app = router(Arc::new(state));
    let (status, after) = call(&app, Method::GET, &format!("/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after, before);
}

#[tokio::test]
async fn cors_headers_present() {
    let app = app();
    let req = Request::builder()
        .method(Method::GET)
        .uri("/games/none")
        .header(header::ORIGIN, "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}
