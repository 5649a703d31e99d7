use super::{GameConfig, GameError, GameResult, GameState, Move, Role, TraceEntry};
use crate::graph::Vertex;
use crate::strategy::Strategy;

/// A game in progress between two strategies.
pub struct Game {
    state: GameState,
    walker: Box<dyn Strategy>,
    breaker: Box<dyn Strategy>,
    trace: Vec<TraceEntry>,
}

impl Game {
    pub fn new(
        config: GameConfig,
        walker: Box<dyn Strategy>,
        breaker: Box<dyn Strategy>,
        start: Vertex,
    ) -> Result<Game, GameError> {
        for (strategy, seat) in [(&walker, Role::Walker), (&breaker, Role::Breaker)] {
            if strategy.role() != seat {
                return Err(GameError::WrongRole {
                    strategy: strategy.name().to_string(),
                    expected: strategy.role(),
                    seated: seat,
                });
            }
        }
        Ok(Game {
            state: GameState::initial(config, start)?,
            walker,
            breaker,
            trace: Vec::new(),
        })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    /// Plays one move. Returns `None` once the game is over.
    pub fn step(&mut self) -> Result<Option<&Move>, GameError> {
        if self.state.is_terminal() {
            return Ok(None);
        }
        let strategy = match self.state.to_move() {
            Role::Walker => &mut self.walker,
            Role::Breaker => &mut self.breaker,
        };
        let mv = strategy.choose(&self.state);
        if let Err(source) = self.state.apply(&mv) {
            return Err(GameError::IllegalStrategyMove {
                strategy: strategy.name().to_string(),
                mv,
                source,
            });
        }
        self.trace.push(TraceEntry {
            mover: mv.role(),
            mv,
            hash: self.state.snapshot_hash(),
        });
        Ok(self.trace.last().map(|e| &e.mv))
    }

    /// Plays to the end, calling `observe` after every move.
    pub fn run_with(
        mut self,
        mut observe: impl FnMut(&GameState, &Move),
    ) -> Result<GameResult, GameError> {
        while let Some(mv) = self.step()? {
            let mv = mv.clone();
            observe(&self.state, &mv);
        }
        Ok(self.finish())
    }

    pub fn run(self) -> Result<GameResult, GameError> {
        self.run_with(|_, _| {})
    }

    fn finish(self) -> GameResult {
        let mut result = GameResult::from_state(&self.state, self.trace);
        result.walker = Some(self.walker.report());
        result.breaker = Some(self.breaker.report());
        result
    }
}

/// Plays `walker` against `breaker` from `start` until the game ends.
pub fn play_game(
    config: GameConfig,
    walker: Box<dyn Strategy>,
    breaker: Box<dyn Strategy>,
    start: Vertex,
) -> Result<GameResult, GameError> {
    Game::new(config, walker, breaker, start)?.run()
}
