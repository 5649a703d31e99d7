use super::{baseline::greedy_step, digest_of, Fallback, Strategy, StrategyReport};
use crate::game::{GameState, Move, Role};
use crate::graph::Vertex;

/// Grows a depth-first tree: step to the lowest unvisited neighbour still
/// open, otherwise back to the parent.
#[derive(Clone, Debug)]
pub struct DfsWalker {
    parent: Vec<Option<Vertex>>,
    fallback: Option<Fallback>,
}

impl DfsWalker {
    pub fn new(n: usize) -> DfsWalker {
        DfsWalker {
            parent: vec![None; n],
            fallback: None,
        }
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v as usize]
    }
}

impl Strategy for DfsWalker {
    fn name(&self) -> &'static str {
        "dfs-walker"
    }

    fn role(&self) -> Role {
        Role::Walker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let pos = state.walker_pos();
        if self.fallback.is_none() {
            if let Some(y) = super::lowest_fresh_option(state) {
                self.parent[y as usize] = Some(pos);
                return Move::Walker(y);
            }
            if let Some(p) = self.parent[pos as usize] {
                return Move::Walker(p);
            }
            self.fallback = Some(Fallback {
                walker_moves: state.walker_moves_made(),
                reason: "back at the root with unvisited vertices still reachable".into(),
            });
        }
        Move::Walker(greedy_step(state).expect("a live game leaves Walker a move"))
    }

    fn memory_digest(&self) -> u64 {
        digest_of(&(&self.parent, self.fallback.is_some()))
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

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::game::{play_game, GameConfig, Variant};
    use crate::graph::Graph;
    use crate::strategy::{NullBreaker, RandomBreaker};

    #[test]
    fn first_move_is_the_lowest_neighbour() {
        let c = GameConfig::new(Arc::new(Graph::hypercube(3).unwrap()), Variant::Walk, 1)
            .with_first_mover(Role::Walker);
        let s = GameState::initial(c, 5).unwrap();
        assert_eq!(DfsWalker::new(8).choose(&s), Move::Walker(1));
    }

    #[test]
    fn tree_edges_are_walked_at_most_twice() {
        for beta in 1..=3u32 {
            for seed in 0..20 {
                let n = 12;
                let c = GameConfig::new(Arc::new(Graph::complete(n).unwrap()), Variant::Walk, beta)
                    .with_seed(seed);
                let r = play_game(
                    c,
                    Box::new(DfsWalker::new(n)),
                    Box::new(RandomBreaker::new(seed)),
                    0,
                )
                .unwrap();
                let k = r.unvisited_count();
                assert!(k < 2 * beta as usize, "k = {k}, beta = {beta}");
                assert!(r.walker_moves <= 2 * (n - k - 1));
                assert!(r.walker.unwrap().fallback.is_none());
            }
        }
    }

    #[test]
    fn sweeps_a_graph_without_breaker_interference() {
        let c = GameConfig::new(Arc::new(Graph::hypercube(4).unwrap()), Variant::Walk, 1)
            .with_first_mover(Role::Walker)
            .with_move_cap(1000);
        let r = play_game(c, Box::new(DfsWalker::new(16)), Box::new(NullBreaker), 0).unwrap();
        assert!(r.visited_count >= 4);
    }
}
