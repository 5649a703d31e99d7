//! The L/R partition PathWalker for bias 1:β with β ≥ 2.
//!
//! Play is grouped in rounds of Breaker, Walker, Breaker, Walker. Unvisited
//! vertices are split into L (too many Breaker edges into R) and R. In each
//! round Walker first steps to some z in R with no Breaker edge to the β+1
//! vertices w_1..w_{β+1} of R with largest Breaker degree into R, then on to
//! one of those w_j.

use fixedbitset::FixedBitSet;

use super::{
    digest_of, lowest_fresh_option, Fallback, Relegation, Strategy, StrategyParams, StrategyReport,
};
use crate::game::{GameConfig, GameState, Move, Role};
use crate::graph::{Edge, Vertex};

#[derive(Clone, Debug)]
pub struct LrWalker {
    params: StrategyParams,
    in_l: FixedBitSet,
    /// w_1..w_{β+1} for the current round.
    ws: Vec<Vertex>,
    relegations: Vec<Relegation>,
    fallback: Option<Fallback>,
}

impl LrWalker {
    pub fn new(config: &GameConfig) -> LrWalker {
        LrWalker {
            params: StrategyParams::new(config.bias),
            in_l: FixedBitSet::with_capacity(config.graph.vertex_count()),
            ws: Vec::new(),
            relegations: Vec::new(),
            fallback: None,
        }
    }

    /// Current L, restricted to unvisited vertices.
    pub fn l_set(&self, state: &GameState) -> Vec<Vertex> {
        self.in_l
            .ones()
            .map(|v| v as Vertex)
            .filter(|&v| !state.is_visited(v))
            .collect()
    }

    fn in_r(&self, state: &GameState, v: Vertex) -> bool {
        !state.is_visited(v) && !self.in_l.contains(v as usize)
    }

    /// β_R(v) for every vertex of R, counting only `edges`.
    fn r_degrees<'a>(&self, state: &GameState, edges: impl Iterator<Item = &'a Edge>) -> Vec<u32> {
        let mut deg = vec![0u32; state.vertex_count()];
        for e in edges {
            if self.in_r(state, e.lo()) && self.in_r(state, e.hi()) {
                deg[e.lo() as usize] += 1;
                deg[e.hi() as usize] += 1;
            }
        }
        deg
    }

    /// Moves vertices with β_R(v) ≥ α|R| into L one at a time, lowest index
    /// first, using Breaker's edges from before his latest move.
    fn relegate(&mut self, state: &GameState) {
        let log = state.breaker_edges();
        let before = &log[..log.len() - state.last_breaker_move().len()];
        let mut deg = self.r_degrees(state, before.iter());
        let mut r: Vec<Vertex> = (0..state.vertex_count() as Vertex)
            .filter(|&v| self.in_r(state, v))
            .collect();
        let r_before = r.len();
        let mut moved = 0;
        while let Some(i) = r
            .iter()
            .position(|&v| self.params.at_least_alpha_of(u64::from(deg[v as usize]), r.len() as u64))
        {
            let v = r.remove(i);
            self.in_l.insert(v as usize);
            moved += 1;
            for e in before {
                if let Some(w) = e.other(v) {
                    if self.in_r(state, w) {
                        deg[w as usize] -= 1;
                    }
                }
            }
        }
        self.relegations.push(Relegation {
            round: state.walker_moves_made() / 2,
            r_before,
            moved,
            l_after: self.l_set(state).len(),
        });
    }

    fn give_up(&mut self, state: &GameState, reason: &str) {
        self.fallback = Some(Fallback {
            walker_moves: state.walker_moves_made(),
            reason: reason.to_string(),
        });
    }

    fn opening_move(&mut self, state: &GameState) -> Option<Vertex> {
        self.relegate(state);
        let deg = self.r_degrees(state, state.breaker_edges().iter());
        let mut r: Vec<Vertex> = (0..state.vertex_count() as Vertex)
            .filter(|&v| self.in_r(state, v))
            .collect();
        let beta = self.params.beta as usize;
        if r.len() < beta + 2 {
            self.give_up(state, "R is too small for a round");
            return None;
        }
        r.sort_by_key(|&v| (std::cmp::Reverse(deg[v as usize]), v));
        self.ws = r[..=beta].to_vec();
        r.sort_unstable();
        let options = state.walker_options();
        let z = r.iter().copied().find(|&z| {
            !self.ws.contains(&z)
                && options.binary_search(&z).is_ok()
                && self.ws.iter().all(|&w| !state.is_breaker_pair(z, w))
        });
        if z.is_none() {
            self.give_up(state, "no intermediate vertex z");
        }
        z
    }

    fn closing_move(&mut self, state: &GameState) -> Option<Vertex> {
        let options = state.walker_options();
        let mut ws = self.ws.clone();
        ws.sort_unstable();
        let w = ws.into_iter().find(|w| options.binary_search(w).is_ok());
        if w.is_none() {
            self.give_up(state, "every w_j is cut off");
        }
        w
    }
}

impl Strategy for LrWalker {
    fn name(&self) -> &'static str {
        "lr-walker"
    }

    fn role(&self) -> Role {
        Role::Walker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let planned = if self.fallback.is_some() {
            None
        } else if state.walker_moves_made().is_multiple_of(2) {
            self.opening_move(state)
        } else {
            self.closing_move(state)
        };
        let target = planned
            .or_else(|| lowest_fresh_option(state))
            .expect("a live path game always leaves Walker a fresh neighbour");
        Move::Walker(target)
    }

    fn memory_digest(&self) -> u64 {
        digest_of(&(self.in_l.as_slice(), &self.ws, self.fallback.is_some()))
    }

    fn report(&self) -> StrategyReport {
        StrategyReport {
            fallback: self.fallback.clone(),
            relegations: self.relegations.clone(),
            ..StrategyReport::new(self.name())
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
