//! HTTP JSON API for playing Zeckendorf games and querying the solver.
//!
//! Sessions live in memory and can be mirrored to a JSON-lines snapshot file.
//! Analysis requests share one memoized solver per `(n, seating, coalition)`.

mod error;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use zeck_core::engine::{GameState, Move, SessionStatus, Winner};
use zeck_core::solver::{Hint, SolverConfig};
use zeck_core::{Coalition, Error, SeatingConfig, Session};

pub use error::ApiError;
pub use store::{AnalysisCache, SessionRecord, SessionStore};

pub const DEFAULT_PORT: u16 = 8787;

pub struct AppState {
    pub sessions: SessionStore,
    pub analysis: AnalysisCache,
}

impl AppState {
    pub fn new(config: SolverConfig) -> Self {
        AppState {
            sessions: SessionStore::in_memory(),
            analysis: AnalysisCache::new(config),
        }
    }

    /// Loads existing sessions from `path` and appends every update to it.
    pub fn with_persistence(config: SolverConfig, path: PathBuf) -> std::io::Result<Self> {
        Ok(AppState {
            sessions: SessionStore::persistent(path)?,
            analysis: AnalysisCache::new(config),
        })
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/legal", get(get_legal))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/analysis", get(get_analysis))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Binds and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state))).await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewGame {
    pub n: u64,
    pub players: usize,
    /// Teams as lists of players; every player on their own team if absent.
    #[serde(default)]
    pub alliances: Option<Vec<Vec<usize>>>,
    /// Seats played by humans. Absent means every seat is human; other seats
    /// are played by the solver on behalf of their team.
    #[serde(default)]
    pub human_players: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    #[serde(rename = "move")]
    pub token: String,
    /// Turn the client believes it is; rejected with 409 if stale.
    #[serde(default)]
    pub turn: Option<usize>,
}

#[derive(Debug, Deserialize)]
pub struct AnalysisQuery {
    /// `teamK` or a comma-separated player list; the mover's team if absent.
    pub coalition: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameView {
    pub id: String,
    pub n: u64,
    pub players: usize,
    pub teams: Vec<Vec<usize>>,
    pub human_players: Vec<usize>,
    pub state: GameState,
    pub turn: usize,
    pub to_move: Option<usize>,
    pub to_move_team: Option<usize>,
    pub legal: Vec<Move>,
    pub moves: Vec<Move>,
    pub finished: bool,
    pub winner: Option<Winner>,
    pub created_at: u64,
    pub updated_at: u64,
}

impl GameView {
    pub fn of(rec: &SessionRecord) -> Self {
        let s = &rec.session;
        let finished = s.is_finished();
        GameView {
            id: rec.id.clone(),
            n: s.state().n(),
            players: s.seating().players(),
            teams: s.seating().teams(),
            human_players: rec.human_players.clone(),
            state: s.state().clone(),
            turn: s.turn(),
            to_move: (!finished).then(|| s.to_move()),
            to_move_team: (!finished).then(|| s.seating().team_of(s.to_move())),
            legal: s.state().legal_moves(),
            moves: s.moves().to_vec(),
            finished,
            winner: match s.status() {
                SessionStatus::Finished { winner } => winner,
                SessionStatus::InProgress => None,
            },
            created_at: rec.created_at,
            updated_at: rec.updated_at,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisView {
    pub coalition: Coalition,
    pub turn: usize,
    pub to_move: usize,
    pub win: bool,
    pub best_move: Move,
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload
        .map(|Json(v)| v)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))
}

fn field(name: &str, e: Error) -> ApiError {
    ApiError::new(StatusCode::BAD_REQUEST, format!("{name}: {e}"))
}

async fn create_game(
    State(app): State<Arc<AppState>>,
    payload: Result<Json<NewGame>, JsonRejection>,
) -> Result<(StatusCode, Json<GameView>), ApiError> {
    let req = body(payload)?;
    zeck_core::fibzeck::validate_n(req.n).map_err(|e| field("n", e))?;
    let seating = match &req.alliances {
        Some(teams) => SeatingConfig::from_teams(req.players, teams).map_err(|e| field("alliances", e))?,
        None => SeatingConfig::singletons(req.players).map_err(|e| field("players", e))?,
    };
    let humans = match req.human_players {
        Some(h) => {
            if let Some(bad) = h.iter().find(|&&i| i == 0 || i > req.players) {
                return Err(ApiError::new(
                    StatusCode::BAD_REQUEST,
                    format!("human_players: player {bad} is out of range 1..={}", req.players),
                ));
            }
            let mut h = h;
            h.sort_unstable();
            h.dedup();
            h
        }
        None => (1..=req.players).collect(),
    };
    let session = Session::new(req.n, seating).map_err(|e| field("n", e))?;
    let mut rec = SessionRecord::new(session, humans);
    app.analysis.auto_play(&mut rec)?;
    let view = GameView::of(&rec);
    app.sessions.insert(rec)?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<GameView>, ApiError> {
    let rec = app.sessions.get(&id)?;
    let rec = rec.lock().expect("session lock poisoned");
    Ok(Json(GameView::of(&rec)))
}

async fn get_legal(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Vec<Move>>, ApiError> {
    let rec = app.sessions.get(&id)?;
    let rec = rec.lock().expect("session lock poisoned");
    Ok(Json(rec.session.state().legal_moves()))
}

async fn post_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    payload: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<GameView>, ApiError> {
    let req = body(payload)?;
    let m: Move = req
        .token
        .parse()
        .map_err(|e: Error| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
    let handle = app.sessions.get(&id)?;
    let mut rec = handle.lock().expect("session lock poisoned");
    if let Some(turn) = req.turn {
        if turn != rec.session.turn() {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                format!("stale turn {turn}: the game is at turn {}", rec.session.turn()),
            ));
        }
    }
    rec.session.apply(m)?;
    app.analysis.auto_play(&mut rec)?;
    rec.touch();
    app.sessions.persist(&rec)?;
    Ok(Json(GameView::of(&rec)))
}

async fn get_analysis(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<AnalysisQuery>, QueryRejection>,
) -> Result<Json<AnalysisView>, ApiError> {
    let Query(query) = query.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    let handle = app.sessions.get(&id)?;
    let session = handle.lock().expect("session lock poisoned").session.clone();
    if session.is_finished() {
        return Err(Error::NoMove.into());
    }
    let seating = session.seating();
    let coalition = match query.coalition.as_deref() {
        Some(text) => Coalition::parse(text, seating).map_err(|e| field("coalition", e))?,
        None => Coalition::team(seating, seating.team_of(session.to_move()))?,
    };
    let Hint { mv, win } = app.analysis.hint(&session, &coalition)?;
    Ok(Json(AnalysisView {
        coalition,
        turn: session.turn(),
        to_move: session.to_move(),
        win,
        best_move: mv,
    }))
}
