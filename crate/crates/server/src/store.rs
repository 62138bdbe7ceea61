use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::http::StatusCode;
use serde::{Deserialize, Serialize};

use zeck_core::solver::{Hint, Solver, SolverConfig};
use zeck_core::{Coalition, SeatingConfig, Session};

use crate::error::ApiError;

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub session: Session,
    pub human_players: Vec<usize>,
    pub created_at: u64,
    pub updated_at: u64,
}

impl SessionRecord {
    pub fn new(session: Session, human_players: Vec<usize>) -> Self {
        let now = now_millis();
        SessionRecord {
            id: uuid::Uuid::new_v4().simple().to_string(),
            session,
            human_players,
            created_at: now,
            updated_at: now,
        }
    }

    pub fn touch(&mut self) {
        self.updated_at = now_millis().max(self.updated_at);
    }

    pub fn is_human(&self, player: usize) -> bool {
        self.human_players.contains(&player)
    }
}

type Handle = Arc<Mutex<SessionRecord>>;

/// Sessions keyed by id. Each session has its own lock so moves on one game
/// are serialized without blocking the others.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Handle>>,
    snapshot: Option<Mutex<File>>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            snapshot: None,
        }
    }

    /// Replays the JSON-lines snapshot at `path` (the last line per id wins)
    /// and keeps appending to it.
    pub fn persistent(path: PathBuf) -> std::io::Result<Self> {
        let mut sessions = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: SessionRecord = serde_json::from_str(&line).map_err(|e| {
                    std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("{}:{}: {e}", path.display(), lineno + 1),
                    )
                })?;
                sessions.insert(rec.id.clone(), Arc::new(Mutex::new(rec)));
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(SessionStore {
            sessions: RwLock::new(sessions),
            snapshot: Some(Mutex::new(file)),
        })
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert(&self, rec: SessionRecord) -> Result<(), ApiError> {
        self.persist(&rec)?;
        let id = rec.id.clone();
        self.sessions
            .write()
            .expect("store lock poisoned")
            .insert(id, Arc::new(Mutex::new(rec)));
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<Handle, ApiError> {
        self.sessions
            .read()
            .expect("store lock poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no game with id {id}")))
    }

    /// Appends a snapshot line when persistence is enabled.
    pub fn persist(&self, rec: &SessionRecord) -> Result<(), ApiError> {
        if let Some(file) = &self.snapshot {
            let mut line = serde_json::to_string(rec)
                .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
            line.push('\n');
            let mut file = file.lock().expect("snapshot lock poisoned");
            file.write_all(line.as_bytes())?;
            file.flush()?;
        }
        Ok(())
    }
}

type SolverKey = (u64, SeatingConfig, Coalition);

/// Solvers shared across requests, one per `(n, seating, coalition)`.
pub struct AnalysisCache {
    config: SolverConfig,
    solvers: Mutex<HashMap<SolverKey, Arc<Mutex<Solver>>>>,
}

impl AnalysisCache {
    pub fn new(config: SolverConfig) -> Self {
        AnalysisCache {
            config,
            solvers: Mutex::new(HashMap::new()),
        }
    }

    fn solver(&self, n: u64, seating: &SeatingConfig, coalition: &Coalition) -> Result<Arc<Mutex<Solver>>, ApiError> {
        let key = (n, seating.clone(), coalition.clone());
        let mut solvers = self.solvers.lock().expect("analysis lock poisoned");
        if let Some(s) = solvers.get(&key) {
            return Ok(s.clone());
        }
        let solver = Arc::new(Mutex::new(Solver::new(seating.clone(), coalition.clone(), self.config)?));
        solvers.insert(key, solver.clone());
        Ok(solver)
    }

    /// Exact value and recommended move at the session's position.
    pub fn hint(&self, session: &Session, coalition: &Coalition) -> Result<Hint, ApiError> {
        let solver = self.solver(session.state().n(), session.seating(), coalition)?;
        let mut solver = solver.lock().expect("solver lock poisoned");
        Ok(solver.best_move(session.state(), session.turn())?)
    }

    /// Plays for machine seats, each on behalf of its own team, until a human
    /// is to move or the game ends.
    pub fn auto_play(&self, rec: &mut SessionRecord) -> Result<(), ApiError> {
        while !rec.session.is_finished() && !rec.is_human(rec.session.to_move()) {
            let seating = rec.session.seating();
            let team = Coalition::team(seating, seating.team_of(rec.session.to_move()))?;
            let hint = self.hint(&rec.session, &team)?;
            rec.session.apply(hint.mv)?;
        }
        Ok(())
    }
}
