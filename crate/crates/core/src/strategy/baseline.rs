//! Simple opponents for probing the named strategies.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{lowest_fresh_option, seeded_rng, Claims, Strategy};
use crate::game::{GameState, Move, Role};
use crate::graph::Vertex;

/// Lowest unvisited open neighbour; otherwise the first step of a shortest
/// open path to the nearest unvisited vertex.
pub(crate) fn greedy_step(state: &GameState) -> Option<Vertex> {
    if let Some(v) = lowest_fresh_option(state) {
        return Some(v);
    }
    if !state.variant().allows_revisits() {
        return None;
    }
    let graph = state.graph();
    let pos = state.walker_pos();
    let mut first: Vec<Option<Vertex>> = vec![None; graph.vertex_count()];
    let mut seen = vec![false; graph.vertex_count()];
    seen[pos as usize] = true;
    let mut queue = VecDeque::from([pos]);
    while let Some(v) = queue.pop_front() {
        for (&w, &id) in graph.neighbors(v).iter().zip(graph.incident_edge_ids(v)) {
            if seen[w as usize] || state.is_breaker_edge(id) {
                continue;
            }
            seen[w as usize] = true;
            let step = first[v as usize].unwrap_or(w);
            if !state.is_visited(w) {
                return Some(step);
            }
            first[w as usize] = Some(step);
            queue.push_back(w);
        }
    }
    None
}

#[derive(Clone, Debug, Default)]
pub struct GreedyWalker;

impl GreedyWalker {
    pub fn new() -> GreedyWalker {
        GreedyWalker
    }
}

impl Strategy for GreedyWalker {
    fn name(&self) -> &'static str {
        "greedy-walker"
    }

    fn role(&self) -> Role {
        Role::Walker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let step = greedy_step(state)
            .or_else(|| state.walker_options().first().copied())
            .expect("a live game leaves Walker a move");
        Move::Walker(step)
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Steps to a uniformly random open neighbour.
#[derive(Clone, Debug)]
pub struct RandomWalker {
    rng: ChaCha8Rng,
}

impl RandomWalker {
    pub fn new(seed: u64) -> RandomWalker {
        RandomWalker {
            rng: seeded_rng(seed, Role::Walker),
        }
    }
}

impl Strategy for RandomWalker {
    fn name(&self) -> &'static str {
        "random-walker"
    }

    fn role(&self) -> Role {
        Role::Walker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let options = state.walker_options();
        let &step = options
            .choose(&mut self.rng)
            .expect("a live game leaves Walker a move");
        Move::Walker(step)
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Claims β distinct uniformly random free edges.
#[derive(Clone, Debug)]
pub struct RandomBreaker {
    rng: ChaCha8Rng,
}

impl RandomBreaker {
    pub fn new(seed: u64) -> RandomBreaker {
        RandomBreaker {
            rng: seeded_rng(seed, Role::Breaker),
        }
    }
}

impl Strategy for RandomBreaker {
    fn name(&self) -> &'static str {
        "random-breaker"
    }

    fn role(&self) -> Role {
        Role::Breaker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let mut claims = Claims::new(state);
        let m = state.graph().edge_count() as u32;
        // Rejection sampling while free edges are plentiful.
        let mut tries = 0;
        while claims.remaining() > 0 && tries < 32 {
            claims.claim_id(self.rng.gen_range(0..m));
            tries += 1;
        }
        if claims.remaining() > 0 {
            let free: Vec<u32> = (0..m).filter(|&id| claims.available(id)).collect();
            let want = claims.remaining();
            for &id in free.choose_multiple(&mut self.rng, want) {
                claims.claim_id(id);
            }
        }
        claims.into_move()
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Claims the lowest-index free edges.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullBreaker;

impl Strategy for NullBreaker {
    fn name(&self) -> &'static str {
        "null-breaker"
    }

    fn role(&self) -> Role {
        Role::Breaker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        Claims::new(state).into_move()
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(*self)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;
    use std::sync::Arc;

    use super::*;
    use crate::game::{play_game, GameConfig, Variant};
    use crate::graph::{Edge, Graph};

    fn k(n: usize, variant: Variant, bias: u32) -> GameConfig {
        GameConfig::new(Arc::new(Graph::complete(n).unwrap()), variant, bias)
            .with_first_mover(Role::Walker)
    }

    #[test]
    fn greedy_visits_in_index_order() {
        let r = play_game(k(6, Variant::Path, 1), Box::new(GreedyWalker), Box::new(NullBreaker), 0)
            .unwrap();
        let visits: Vec<Vertex> = r
            .trace
            .iter()
            .filter_map(|e| match e.mv {
                Move::Walker(v) => Some(v),
                _ => None,
            })
            .collect();
        let mut sorted = visits.clone();
        sorted.sort_unstable();
        assert_eq!(visits, sorted);
    }

    #[test]
    fn greedy_walks_back_through_visited_vertices() {
        // 1 - 0 - 2 - 3: from 0 with (0,1) gone, the way to 3 runs back through 2.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (2, 3)]).unwrap();
        let c = GameConfig::new(Arc::new(g), Variant::Walk, 1).with_first_mover(Role::Walker);
        let mut s = GameState::initial(c, 2).unwrap();
        s.apply(&Move::Walker(0)).unwrap();
        s.apply(&Move::Breaker(vec![Edge::new(0, 1)])).unwrap();
        assert_eq!(GreedyWalker.choose(&s), Move::Walker(2));
    }

    #[test]
    fn random_breaker_claims_distinct_edges() {
        let c = k(8, Variant::Walk, 3);
        let mut s = GameState::initial(c, 0).unwrap();
        s.apply(&Move::Walker(1)).unwrap();
        let Move::Breaker(edges) = RandomBreaker::new(3).choose(&s) else {
            panic!("breaker move expected");
        };
        assert_eq!(edges.len(), 3);
        let mut dedup = edges.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 3);
    }

    #[test]
    fn random_walker_is_uniform() {
        let c = k(4, Variant::RandomWalk, 1);
        let s = GameState::initial(c, 0).unwrap();
        let mut walker = RandomWalker::new(11);
        let mut counts: HashMap<Vertex, usize> = HashMap::new();
        let draws = 30_000;
        for _ in 0..draws {
            let Move::Walker(v) = walker.choose(&s) else {
                unreachable!()
            };
            *counts.entry(v).or_default() += 1;
        }
        for v in 1..4 {
            let freq = counts[&v] as f64 / draws as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.02, "vertex {v}: {freq}");
        }
    }

    #[test]
    fn seeded_games_repeat() {
        let c = k(30, Variant::RandomWalk, 1);
        let run = || {
            play_game(
                c.clone(),
                Box::new(RandomWalker::new(9)),
                Box::new(RandomBreaker::new(9)),
                0,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
