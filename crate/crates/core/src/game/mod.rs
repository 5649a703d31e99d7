//! Rules engine: configuration, positions, move legality, termination and
//! replayable results.

mod play;
mod result;
mod state;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, Vertex};

pub use play::{play_game, Game};
pub use result::{ConfigEcho, GameResult, TraceEntry};
pub use state::GameState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Walker,
    Breaker,
}

impl Role {
    pub fn opponent(self) -> Role {
        match self {
            Role::Walker => Role::Breaker,
            Role::Breaker => Role::Walker,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Walker => "walker",
            Role::Breaker => "breaker",
        })
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "walker" => Ok(Role::Walker),
            "breaker" => Ok(Role::Breaker),
            other => Err(format!("unknown role {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Walker may never revisit a vertex.
    Path,
    /// Walker may reuse her own edges and revisit vertices.
    Walk,
    /// Walk rules, with Walker's moves drawn by a random walk.
    RandomWalk,
}

impl Variant {
    pub fn allows_revisits(self) -> bool {
        !matches!(self, Variant::Path)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Path => "path",
            Variant::Walk => "walk",
            Variant::RandomWalk => "random-walk",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "path" => Ok(Variant::Path),
            "walk" => Ok(Variant::Walk),
            "random-walk" | "randomwalk" => Ok(Variant::RandomWalk),
            other => Err(format!("unknown variant {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalReason {
    /// No unvisited vertex can be reached along non-Breaker edges.
    NoReachableUnvisited,
    /// Every edge at Walker's position belongs to Breaker.
    WalkerBlocked,
    MoveCap,
    AllVisited,
}

impl fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminalReason::NoReachableUnvisited => "no-reachable-unvisited",
            TerminalReason::WalkerBlocked => "walker-blocked",
            TerminalReason::MoveCap => "move-cap",
            TerminalReason::AllVisited => "all-visited",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    /// Walker steps to the given neighbour.
    Walker(Vertex),
    /// Breaker claims these edges.
    Breaker(Vec<Edge>),
}

impl Move {
    pub fn role(&self) -> Role {
        match self {
            Move::Walker(_) => Role::Walker,
            Move::Breaker(_) => Role::Breaker,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Walker(v) => write!(f, "walker -> {v}"),
            Move::Breaker(edges) => {
                f.write_str("breaker claims [")?;
                for (i, e) in edges.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// A rejected move. `code()` gives the stable machine-readable reason.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("the game is over ({0})")]
    GameOver(TerminalReason),
    #[error("{attempted} tried to move but it is {to_move}'s turn")]
    OutOfTurn { attempted: Role, to_move: Role },
    #[error("vertex {0} is not in the graph")]
    InvalidVertex(Vertex),
    #[error("{0} is not an edge of the graph")]
    NotAnEdge(Edge),
    #[error("vertex {to} is not adjacent to the walker at {from}")]
    NotIncident { from: Vertex, to: Vertex },
    #[error("edge {0} is already owned")]
    EdgeOwned(Edge),
    #[error("path walker cannot revisit vertex {0}")]
    RevisitInPath(Vertex),
    #[error("edge {0} listed twice")]
    DuplicateEdge(Edge),
    #[error("{claimed} edges claimed but the bias is {bias}")]
    BiasExceeded { claimed: usize, bias: usize },
    #[error("{claimed} edges claimed but {required} are required while unowned edges remain")]
    BiasUnused { claimed: usize, required: usize },
}

impl MoveError {
    pub fn code(&self) -> &'static str {
        match self {
            MoveError::GameOver(_) => "game-over",
            MoveError::OutOfTurn { .. } => "protocol-violation",
            MoveError::InvalidVertex(_) => "invalid-vertex",
            MoveError::NotAnEdge(_) => "not-an-edge",
            MoveError::NotIncident { .. } => "not-incident",
            MoveError::EdgeOwned(_) => "edge-owned",
            MoveError::RevisitInPath(_) => "revisit-in-path",
            MoveError::DuplicateEdge(_) => "duplicate-edge",
            MoveError::BiasExceeded { .. } => "bias-exceeded",
            MoveError::BiasUnused { .. } => "bias-unused",
        }
    }
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("start vertex {0} is not in the graph")]
    InvalidStart(Vertex),
    #[error("strategy {strategy} plays {expected} but was seated as {seated}")]
    WrongRole {
        strategy: String,
        expected: Role,
        seated: Role,
    },
    #[error("strategy {strategy} produced an illegal move ({mv}): {source}")]
    IllegalStrategyMove {
        strategy: String,
        mv: Move,
        #[source]
        source: MoveError,
    },
    #[error("replay diverged at step {step}: {reason}")]
    Replay { step: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Everything that fixes the rules of one game.
#[derive(Clone, Debug)]
pub struct GameConfig {
    pub graph: Arc<Graph>,
    pub variant: Variant,
    /// Breaker edges per Breaker turn.
    pub bias: u32,
    pub first_mover: Role,
    /// Walker moves after which the game is stopped.
    pub move_cap: usize,
    /// Consumed only by randomized strategies.
    pub seed: u64,
}

impl GameConfig {
    /// Breaker moves first and the move cap is 10·n.
    pub fn new(graph: Arc<Graph>, variant: Variant, bias: u32) -> GameConfig {
        let move_cap = 10 * graph.vertex_count();
        GameConfig {
            graph,
            variant,
            bias,
            first_mover: Role::Breaker,
            move_cap,
            seed: 0,
        }
    }

    pub fn with_first_mover(mut self, first: Role) -> Self {
        self.first_mover = first;
        self
    }

    pub fn with_move_cap(mut self, cap: usize) -> Self {
        self.move_cap = cap;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.bias < 1 {
            return Err(GameError::InvalidConfig("bias must be at least 1".into()));
        }
        if self.move_cap < 1 {
            return Err(GameError::InvalidConfig("move cap must be at least 1".into()));
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            graph: self.graph.spec().clone(),
            variant: self.variant,
            bias: self.bias,
            first_mover: self.first_mover,
            move_cap: self.move_cap,
            seed: self.seed,
        }
    }
}
