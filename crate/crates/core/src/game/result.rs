use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GameConfig, GameError, GameState, Move, Role, TerminalReason, Variant};
use crate::graph::{Graph, GraphSpec, Vertex};
use crate::strategy::StrategyReport;

/// Serializable copy of a [`GameConfig`], with the graph given by its spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub graph: GraphSpec,
    pub variant: Variant,
    pub bias: u32,
    pub first_mover: Role,
    pub move_cap: usize,
    pub seed: u64,
}

impl ConfigEcho {
    /// Rebuilds the config, constructing the graph from its spec.
    pub fn to_config(&self) -> Result<GameConfig, GameError> {
        let graph = Arc::new(self.graph.build()?);
        Ok(self.with_graph(graph))
    }

    /// Rebuilds the config around an already constructed graph.
    pub fn with_graph(&self, graph: Arc<Graph>) -> GameConfig {
        GameConfig {
            graph,
            variant: self.variant,
            bias: self.bias,
            first_mover: self.first_mover,
            move_cap: self.move_cap,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub mover: Role,
    #[serde(rename = "move")]
    pub mv: Move,
    /// Snapshot hash of the position after this move.
    pub hash: String,
}

/// Summary of a finished game, replayable from its trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub config: ConfigEcho,
    pub start: Vertex,
    pub trace: Vec<TraceEntry>,
    pub visited_count: usize,
    pub unvisited: Vec<Vertex>,
    pub terminal_reason: TerminalReason,
    pub walker_moves: usize,
    pub breaker_moves: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walker: Option<StrategyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breaker: Option<StrategyReport>,
}

impl GameResult {
    pub fn from_state(state: &GameState, trace: Vec<TraceEntry>) -> GameResult {
        GameResult {
            config: state.config().echo(),
            start: state.start(),
            trace,
            visited_count: state.visited_count(),
            unvisited: state.unvisited(),
            terminal_reason: state
                .terminal()
                .expect("results are only built from finished games"),
            walker_moves: state.walker_moves_made(),
            breaker_moves: state.breaker_moves_made(),
            walker: None,
            breaker: None,
        }
    }

    pub fn unvisited_count(&self) -> usize {
        self.unvisited.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game results always serialize")
    }

    pub fn from_json(text: &str) -> Result<GameResult, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Replays the trace on a graph built from the recorded spec.
    pub fn replay(&self) -> Result<GameState, GameError> {
        self.replay_on(Arc::new(self.config.graph.build()?))
    }

    /// Replays the trace on `graph`, checking every snapshot hash and the
    /// recorded outcome.
    pub fn replay_on(&self, graph: Arc<Graph>) -> Result<GameState, GameError> {
        let mut state = GameState::initial(self.config.with_graph(graph), self.start)?;
        for (step, entry) in self.trace.iter().enumerate() {
            let diverged = |reason: String| GameError::Replay { step, reason };
            if entry.mover != entry.mv.role() {
                return Err(diverged(format!(
                    "entry says {} moved but the move is a {} move",
                    entry.mover,
                    entry.mv.role()
                )));
            }
            state
                .apply(&entry.mv)
                .map_err(|e| diverged(format!("{} rejected: {e}", entry.mv)))?;
            if state.snapshot_hash() != entry.hash {
                return Err(diverged(format!(
                    "hash {} does not match recorded {}",
                    state.snapshot_hash(),
                    entry.hash
                )));
            }
        }
        let step = self.trace.len();
        if state.terminal() != Some(self.terminal_reason) {
            return Err(GameError::Replay {
                step,
                reason: format!(
                    "replay ends with {:?}, recorded {}",
                    state.terminal(),
                    self.terminal_reason
                ),
            });
        }
        if state.visited_count() != self.visited_count || state.unvisited() != self.unvisited {
            return Err(GameError::Replay {
                step,
                reason: format!(
                    "replay visits {} vertices, recorded {}",
                    state.visited_count(),
                    self.visited_count
                ),
            });
        }
        Ok(state)
    }
}
