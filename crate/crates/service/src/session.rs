use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock, TryLockError};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use wb_core::game::{ConfigEcho, TraceEntry};
use wb_core::graph::{Edge, GraphSpec, Vertex};
use wb_core::strategy::{build_strategy, strategy_role};
use wb_core::{GameConfig, GameState, Move, MoveError, Role, Strategy, TerminalReason, Variant};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{message}")]
    BadRequest { code: &'static str, message: String },
    #[error("no session {0}")]
    NotFound(String),
    #[error("{message}")]
    Conflict { code: &'static str, message: String },
    #[error(transparent)]
    Illegal(MoveError),
    #[error("{0}")]
    Internal(String),
}

impl SessionError {
    fn bad(code: &'static str, message: impl Into<String>) -> SessionError {
        SessionError::BadRequest {
            code,
            message: message.into(),
        }
    }

    fn conflict(code: &'static str, message: impl Into<String>) -> SessionError {
        SessionError::Conflict {
            code,
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            SessionError::BadRequest { code, .. } | SessionError::Conflict { code, .. } => code,
            SessionError::NotFound(_) => "unknown-session",
            SessionError::Illegal(e) => e.code(),
            SessionError::Internal(_) => "internal",
        }
    }
}

/// Body of `POST /sessions`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NewSession {
    pub graph: String,
    pub variant: String,
    pub bias: u32,
    pub human_role: String,
    pub bot_strategy: String,
    #[serde(default)]
    pub first_mover: Option<String>,
    #[serde(default)]
    pub start: Option<Vertex>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub move_cap: Option<usize>,
}

/// A live game between one human and one bot.
pub struct Session {
    id: String,
    human: Role,
    bot_name: String,
    bot: Box<dyn Strategy>,
    state: GameState,
    trace: Vec<TraceEntry>,
    created_ms: u64,
    updated_ms: u64,
}

/// What the service reports about a session: the game-core result fields
/// plus the live position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub session_id: String,
    pub human_role: Role,
    pub bot_strategy: String,
    /// Number of moves applied so far.
    pub version: usize,
    pub created_ms: u64,
    pub updated_ms: u64,
    pub config: ConfigEcho,
    pub start: Vertex,
    pub trace: Vec<TraceEntry>,
    pub visited_count: usize,
    pub unvisited: Vec<Vertex>,
    pub terminal_reason: Option<TerminalReason>,
    pub to_move: Role,
    pub walker_position: Vertex,
    pub walk: Vec<Vertex>,
    pub visit_order: Vec<Vertex>,
    pub walker_edges: Vec<Edge>,
    pub breaker_edges: Vec<Edge>,
}

/// Moves open to the human right now.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LegalMoves {
    pub role: Role,
    /// Vertices for a human Walker, edges for a human Breaker.
    pub legal: serde_json::Value,
    /// How many edges one Breaker move may hold.
    pub max_selection: usize,
    /// How many it must hold.
    pub required: usize,
}

/// Largest graph a session may be created on.
pub const MAX_EDGES: u64 = 250_000;

fn edge_bound(spec: &GraphSpec) -> u64 {
    match *spec {
        GraphSpec::Complete { n } | GraphSpec::Gnp { n, .. } => {
            let n = n as u64;
            n.saturating_mul(n.saturating_sub(1)) / 2
        }
        GraphSpec::Hypercube { dim } => {
            if dim >= 40 {
                u64::MAX
            } else {
                dim as u64 * (1u64 << dim) / 2
            }
        }
        _ => 0,
    }
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

impl Session {
    pub fn create(id: String, req: &NewSession) -> Result<Session, SessionError> {
        let spec: GraphSpec = req
            .graph
            .parse()
            .map_err(|e| SessionError::bad("invalid-graph", format!("{e}")))?;
        let variant: Variant = req.variant.parse().map_err(|e: String| SessionError::bad("invalid-variant", e))?;
        let human: Role = req.human_role.parse().map_err(|e: String| SessionError::bad("invalid-role", e))?;
        let first = match &req.first_mover {
            Some(s) => s.parse().map_err(|e: String| SessionError::bad("invalid-role", e))?,
            None => Role::Walker,
        };
        match strategy_role(&req.bot_strategy) {
            None => {
                return Err(SessionError::bad(
                    "unknown-strategy",
                    format!("unknown strategy {:?}", req.bot_strategy),
                ))
            }
            Some(r) if r == human => {
                return Err(SessionError::bad(
                    "role-mismatch",
                    format!("{} plays {r}, the same side as the human", req.bot_strategy),
                ))
            }
            Some(_) => {}
        }
        if matches!(spec, GraphSpec::File { .. }) {
            return Err(SessionError::bad("invalid-graph", "file graphs are not served"));
        }
        if edge_bound(&spec) > MAX_EDGES {
            return Err(SessionError::bad(
                "invalid-graph",
                format!("{} may have more than {MAX_EDGES} edges", req.graph),
            ));
        }
        let graph = Arc::new(spec.build().map_err(|e| SessionError::bad("invalid-graph", e.to_string()))?);
        let mut config = GameConfig::new(Arc::clone(&graph), variant, req.bias)
            .with_first_mover(first)
            .with_seed(req.seed.unwrap_or(0));
        if let Some(cap) = req.move_cap {
            config = config.with_move_cap(cap);
        }
        config
            .validate()
            .map_err(|e| SessionError::bad("invalid-config", e.to_string()))?;
        let bot = build_strategy(&req.bot_strategy, &config)
            .map_err(|e| SessionError::bad("incompatible-strategy", e.to_string()))?;
        let state = GameState::initial(config, req.start.unwrap_or(0))
            .map_err(|e| SessionError::bad("invalid-start", e.to_string()))?;
        let now = now_ms();
        let mut session = Session {
            id,
            human,
            bot_name: req.bot_strategy.clone(),
            bot,
            state,
            trace: Vec::new(),
            created_ms: now,
            updated_ms: now,
        };
        session.bot_reply()?;
        Ok(session)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    fn push(&mut self, mv: Move) -> Result<(), MoveError> {
        self.state.apply(&mv)?;
        self.trace.push(TraceEntry {
            mover: mv.role(),
            mv,
            hash: self.state.snapshot_hash(),
        });
        self.updated_ms = now_ms();
        Ok(())
    }

    /// Lets the bot move while it is its turn. Returns its last move.
    fn bot_reply(&mut self) -> Result<Option<Move>, SessionError> {
        let mut last = None;
        while !self.state.is_terminal() && self.state.to_move() != self.human {
            let mv = self.bot.choose(&self.state);
            self.push(mv.clone()).map_err(|e| {
                SessionError::Internal(format!("bot {} produced an illegal move {mv}: {e}", self.bot_name))
            })?;
            last = Some(mv);
        }
        Ok(last)
    }

    /// Applies the human's move and the bot's answer.
    pub fn play(&mut self, mv: Move, version: Option<usize>) -> Result<Option<Move>, SessionError> {
        if let Some(v) = version {
            if v != self.trace.len() {
                return Err(SessionError::conflict(
                    "stale-version",
                    format!("move sent for version {v}, session is at {}", self.trace.len()),
                ));
            }
        }
        match self.state.validate(&mv) {
            Err(e @ (MoveError::OutOfTurn { .. } | MoveError::GameOver(_))) => {
                return Err(SessionError::conflict(e.code(), e.to_string()))
            }
            Err(e) => return Err(SessionError::Illegal(e)),
            Ok(()) => {}
        }
        self.push(mv).map_err(SessionError::Illegal)?;
        self.bot_reply()
    }

    pub fn legal(&self) -> LegalMoves {
        let state = &self.state;
        let beta = state.bias();
        if state.is_terminal() {
            return LegalMoves {
                role: self.human,
                legal: serde_json::json!([]),
                max_selection: 0,
                required: 0,
            };
        }
        match self.human {
            Role::Walker => {
                let legal = state.legal_walker_moves().unwrap_or_default();
                LegalMoves {
                    role: Role::Walker,
                    legal: serde_json::json!(legal),
                    max_selection: 1,
                    required: 1,
                }
            }
            Role::Breaker => {
                let edges: Vec<Edge> = state.free_edges_iter().collect();
                LegalMoves {
                    role: Role::Breaker,
                    legal: serde_json::json!(edges),
                    max_selection: beta,
                    required: state.required_breaker_claims(),
                }
            }
        }
    }

    pub fn view(&self) -> SessionView {
        let s = &self.state;
        SessionView {
            session_id: self.id.clone(),
            human_role: self.human,
            bot_strategy: self.bot_name.clone(),
            version: self.trace.len(),
            created_ms: self.created_ms,
            updated_ms: self.updated_ms,
            config: s.config().echo(),
            start: s.start(),
            trace: self.trace.clone(),
            visited_count: s.visited_count(),
            unvisited: s.unvisited(),
            terminal_reason: s.terminal(),
            to_move: s.to_move(),
            walker_position: s.walker_pos(),
            walk: s.walk().to_vec(),
            visit_order: s.visit_order().to_vec(),
            walker_edges: s.walker_edges(),
            breaker_edges: s.breaker_edges().to_vec(),
        }
    }

    /// Rebuilds a session from a snapshot by replaying its moves, driving
    /// the bot on its turns so that its memory is restored too.
    pub fn restore(view: &SessionView) -> Result<Session, SessionError> {
        let config = view
            .config
            .to_config()
            .map_err(|e| SessionError::Internal(e.to_string()))?;
        let bot = build_strategy(&view.bot_strategy, &config).map_err(|e| SessionError::Internal(e.to_string()))?;
        let state = GameState::initial(config, view.start).map_err(|e| SessionError::Internal(e.to_string()))?;
        let mut session = Session {
            id: view.session_id.clone(),
            human: view.human_role,
            bot_name: view.bot_strategy.clone(),
            bot,
            state,
            trace: Vec::new(),
            created_ms: view.created_ms,
            updated_ms: view.updated_ms,
        };
        for (step, entry) in view.trace.iter().enumerate() {
            if entry.mover != session.human {
                let mv = session.bot.choose(&session.state);
                if mv != entry.mv {
                    return Err(SessionError::Internal(format!(
                        "step {step}: bot now plays {mv}, snapshot has {}",
                        entry.mv
                    )));
                }
            }
            session
                .push(entry.mv.clone())
                .map_err(|e| SessionError::Internal(format!("step {step}: {e}")))?;
            if session.trace[step].hash != entry.hash {
                return Err(SessionError::Internal(format!("step {step}: snapshot hash differs")));
            }
        }
        session.updated_ms = view.updated_ms;
        Ok(session)
    }
}

type Slot = Arc<Mutex<Session>>;

/// All sessions, each behind its own lock.
#[derive(Clone, Default)]
pub struct SessionStore {
    sessions: Arc<RwLock<HashMap<String, Slot>>>,
    persist: Option<PathBuf>,
}

impl SessionStore {
    pub fn new() -> SessionStore {
        SessionStore::default()
    }

    /// A store that snapshots every session to `dir` after each change and
    /// restores the snapshots found there.
    pub fn persistent(dir: &Path) -> std::io::Result<SessionStore> {
        fs::create_dir_all(dir)?;
        let store = SessionStore {
            sessions: Arc::default(),
            persist: Some(dir.to_path_buf()),
        };
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            let restored = fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|text| serde_json::from_str::<SessionView>(&text).map_err(|e| e.to_string()))
                .and_then(|view| Session::restore(&view).map_err(|e| e.to_string()));
            match restored {
                Ok(session) => {
                    store
                        .sessions
                        .write()
                        .expect("session map lock")
                        .insert(session.id.clone(), Arc::new(Mutex::new(session)));
                }
                Err(e) => tracing::warn!("skipping snapshot {}: {e}", path.display()),
            }
        }
        Ok(store)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn slot(&self, id: &str) -> Result<Slot, SessionError> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::NotFound(id.to_string()))
    }

    fn save(&self, session: &Session) -> Result<(), SessionError> {
        let Some(dir) = &self.persist else {
            return Ok(());
        };
        let text = serde_json::to_string_pretty(&session.view()).map_err(|e| SessionError::Internal(e.to_string()))?;
        let tmp = dir.join(format!("{}.json.tmp", session.id));
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, dir.join(format!("{}.json", session.id))))
            .map_err(|e| SessionError::Internal(format!("snapshot failed: {e}")))
    }

    pub fn create(&self, req: &NewSession) -> Result<SessionView, SessionError> {
        let session = Session::create(uuid::Uuid::new_v4().simple().to_string(), req)?;
        self.save(&session)?;
        let view = session.view();
        self.sessions
            .write()
            .expect("session map lock")
            .insert(session.id.clone(), Arc::new(Mutex::new(session)));
        Ok(view)
    }

    /// Runs `f` under the session's lock, failing fast if another request
    /// holds it.
    fn with_session<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> T) -> Result<T, SessionError> {
        let slot = self.slot(id)?;
        let mut guard = match slot.try_lock() {
            Ok(g) => g,
            Err(TryLockError::WouldBlock) => {
                return Err(SessionError::conflict("session-busy", "another request is updating this session"))
            }
            Err(TryLockError::Poisoned(p)) => p.into_inner(),
        };
        Ok(f(&mut guard))
    }

    /// Reads wait for a writer instead of failing.
    fn read<T>(&self, id: &str, f: impl FnOnce(&Session) -> T) -> Result<T, SessionError> {
        let slot = self.slot(id)?;
        let guard = slot.lock().unwrap_or_else(|p| p.into_inner());
        Ok(f(&guard))
    }

    pub fn view(&self, id: &str) -> Result<SessionView, SessionError> {
        self.read(id, Session::view)
    }

    pub fn legal(&self, id: &str) -> Result<LegalMoves, SessionError> {
        self.read(id, Session::legal)
    }

    pub fn play(&self, id: &str, mv: Move, version: Option<usize>) -> Result<(SessionView, Option<Move>), SessionError> {
        self.with_session(id, |s| {
            let bot = s.play(mv, version)?;
            self.save(s)?;
            Ok((s.view(), bot))
        })?
    }
}
