//! 1:1 PathWalker-Breaker on K_n: the all-but-two Walker and its matching
//! Breaker.

use super::{digest_of, lowest_fresh_option, Claims, Fallback, Strategy, StrategyReport};
use crate::game::{GameState, Move, Role};
use crate::graph::{Edge, Vertex};

/// Chases Breaker's last edge whenever it avoids every visited vertex, so
/// that each Breaker edge keeps an endpoint in the visited set.
#[derive(Clone, Debug, Default)]
pub struct Theorem1Walker {
    fallback: Option<Fallback>,
}

impl Theorem1Walker {
    pub fn new() -> Theorem1Walker {
        Theorem1Walker::default()
    }

    /// Endpoint of Breaker's last edge to chase, if the rule applies.
    fn chase(&mut self, state: &GameState) -> Option<Vertex> {
        if state.unvisited_count() <= 3 {
            return None;
        }
        let &[f] = state.last_breaker_move() else {
            return None;
        };
        if state.is_visited(f.lo()) || state.is_visited(f.hi()) {
            return None;
        }
        let pos = state.walker_pos();
        let target = [f.lo(), f.hi()]
            .into_iter()
            .find(|&v| state.graph().edge_id(pos, v).is_some_and(|id| !state.is_breaker_edge(id)));
        if target.is_none() && self.fallback.is_none() {
            self.fallback = Some(Fallback {
                walker_moves: state.walker_moves_made(),
                reason: format!("neither end of {f} is reachable"),
            });
        }
        target
    }
}

impl Strategy for Theorem1Walker {
    fn name(&self) -> &'static str {
        "theorem1-walker"
    }

    fn role(&self) -> Role {
        Role::Walker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let target = self
            .chase(state)
            .or_else(|| lowest_fresh_option(state))
            .expect("a live path game always leaves Walker a fresh neighbour");
        Move::Walker(target)
    }

    fn memory_digest(&self) -> u64 {
        u64::from(self.fallback.is_some())
    }

    fn report(&self) -> StrategyReport {
        StrategyReport {
            fallback: self.fallback.clone(),
            ..StrategyReport::new(self.name())
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Plays away from Walker until four vertices are left unvisited, then takes
/// a perfect matching on them and finally cuts Walker off.
#[derive(Clone, Debug, Default)]
pub struct Theorem1Breaker {
    matching: Option<[Edge; 2]>,
}

impl Theorem1Breaker {
    pub fn new() -> Theorem1Breaker {
        Theorem1Breaker::default()
    }
}

impl Strategy for Theorem1Breaker {
    fn name(&self) -> &'static str {
        "theorem1-breaker"
    }

    fn role(&self) -> Role {
        Role::Breaker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let mut claims = Claims::new(state);
        let unvisited = state.unvisited();
        if self.matching.is_none() && unvisited.len() == 4 {
            let u = &unvisited;
            self.matching = Some([Edge::new(u[0], u[1]), Edge::new(u[2], u[3])]);
        }
        let graph = state.graph();
        if let Some(matching) = self.matching {
            for e in matching {
                if let Some(id) = graph.edge_id_of(e) {
                    claims.claim_id(id);
                }
            }
        }
        if self.matching.is_some() || unvisited.len() < 4 {
            let pos = state.walker_pos();
            for &u in &unvisited {
                claims.claim_pair(pos, u);
            }
        }
        for (i, &a) in unvisited.iter().enumerate() {
            for &b in &unvisited[i + 1..] {
                claims.claim_pair(a, b);
            }
        }
        claims.into_move()
    }

    fn memory_digest(&self) -> u64 {
        digest_of(&self.matching)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::game::{play_game, GameConfig, Variant};
    use crate::graph::Graph;
    use crate::strategy::NullBreaker;

    fn k(n: usize, first: Role) -> GameConfig {
        GameConfig::new(Arc::new(Graph::complete(n).unwrap()), Variant::Path, 1).with_first_mover(first)
    }

    #[test]
    fn walker_chases_a_fresh_breaker_edge() {
        let mut s = GameState::initial(k(6, Role::Breaker), 0).unwrap();
        s.apply(&Move::Breaker(vec![Edge::new(3, 4)])).unwrap();
        assert_eq!(Theorem1Walker::new().choose(&s), Move::Walker(3));
    }

    #[test]
    fn walker_goes_low_when_breaker_touches_the_path() {
        let mut s = GameState::initial(k(6, Role::Breaker), 0).unwrap();
        s.apply(&Move::Breaker(vec![Edge::new(0, 1)])).unwrap();
        assert_eq!(Theorem1Walker::new().choose(&s), Move::Walker(2));
    }

    #[test]
    fn breaker_takes_the_lexicographic_matching() {
        // Walker path 0-1-3-4-6 leaves {2,5,7,8} unvisited on K_9.
        let mut s = GameState::initial(k(9, Role::Walker), 0).unwrap();
        let mut breaker = Theorem1Breaker::new();
        for v in [1, 3, 4, 6] {
            s.apply(&Move::Walker(v)).unwrap();
            if s.unvisited_count() == 4 {
                break;
            }
            let mv = NullBreaker.choose(&s);
            s.apply(&mv).unwrap();
        }
        assert_eq!(s.unvisited(), vec![2, 5, 7, 8]);
        let first = breaker.choose(&s);
        assert_eq!(first, Move::Breaker(vec![Edge::new(2, 5)]));
        s.apply(&first).unwrap();
        s.apply(&Move::Walker(7)).unwrap();
        assert_eq!(breaker.choose(&s), Move::Breaker(vec![Edge::new(7, 8)]));
    }

    #[test]
    fn both_strategies_meet_at_n_minus_two() {
        for n in 6..=12 {
            for first in [Role::Walker, Role::Breaker] {
                let result = play_game(
                    k(n, first),
                    Box::new(Theorem1Walker::new()),
                    Box::new(Theorem1Breaker::new()),
                    0,
                )
                .unwrap();
                assert_eq!(result.visited_count, n - 2, "n = {n}, {first} first");
            }
        }
    }
}
