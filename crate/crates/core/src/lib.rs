//! Walker-Breaker games: a rules engine, the strategy library, the box game
//! sandbox, an exact solver for desk-scale instances and an experiment
//! harness.
//!
//! Walker moves along graph edges trying to visit as many vertices as
//! possible; Breaker claims edges (β per turn) that Walker may never use.

pub mod boxgame;
pub mod game;
pub mod graph;
pub mod harness;
pub mod solver;
pub mod strategy;

pub use game::{
    play_game, Game, GameConfig, GameError, GameResult, GameState, Move, MoveError, Role, TerminalReason,
    Variant,
};
pub use graph::{Edge, Graph, GraphError, GraphSpec, Vertex};
pub use strategy::{Strategy, StrategyError};
