//! Breakers that wall off chosen vertices one at a time.

use fixedbitset::FixedBitSet;

use super::{digest_of, open_incident, Claims, Strategy, StrategyReport, TargetOutcome, TargetRecord};
use crate::game::{GameState, Move, Role};
use crate::graph::Vertex;

/// Whether Walker could ever use the edge from a target to `other`. A
/// PathWalker can only arrive from where she stands now or from an
/// unvisited vertex.
fn usable(state: &GameState, other: Vertex) -> bool {
    state.variant().allows_revisits() || !state.is_visited(other) || other == state.walker_pos()
}

/// Protects unvisited vertices in increasing index order: each turn it takes
/// the edge from the target to Walker, if there is one, and spends the rest
/// of its budget on other usable edges at the target.
#[derive(Clone, Debug, Default)]
pub struct ProtectBreaker {
    limit: Option<usize>,
    current: Option<Vertex>,
    settled: FixedBitSet,
    protected: Vec<Vertex>,
    targets: Vec<TargetRecord>,
}

impl ProtectBreaker {
    /// `limit` caps how many targets are attempted.
    pub fn new(limit: Option<usize>) -> ProtectBreaker {
        ProtectBreaker {
            limit,
            ..ProtectBreaker::default()
        }
    }

    pub fn protected(&self) -> &[Vertex] {
        &self.protected
    }

    /// Whether every attempt the limit allows has been settled.
    pub fn finished(&self) -> bool {
        self.current.is_none() && self.limit.is_some_and(|l| self.targets.len() >= l)
    }

    fn is_sealed(claims: &Claims<'_>, target: Vertex) -> bool {
        open_incident(claims, target).all(|(w, _)| !usable(claims.state, w))
    }

    fn settle(&mut self, state: &GameState, outcome: TargetOutcome) {
        let target = self.current.take().expect("settling without a target");
        self.settled.grow(state.vertex_count());
        self.settled.insert(target as usize);
        if outcome == TargetOutcome::Protected {
            self.protected.push(target);
        }
        let record = self.targets.last_mut().expect("target has a record");
        record.finished = Some(state.breaker_moves_made());
        record.outcome = outcome;
    }

    /// The vertex to work on now, advancing past protected or visited ones.
    fn target(&mut self, claims: &Claims<'_>) -> Option<Vertex> {
        let state = claims.state;
        loop {
            if let Some(t) = self.current {
                if state.is_visited(t) {
                    self.settle(state, TargetOutcome::Visited);
                } else if Self::is_sealed(claims, t) {
                    self.settle(state, TargetOutcome::Protected);
                } else {
                    return Some(t);
                }
            }
            if self.limit.is_some_and(|l| self.targets.len() >= l) {
                return None;
            }
            let next = (0..state.vertex_count() as Vertex)
                .find(|&v| !state.is_visited(v) && !self.settled.contains(v as usize))?;
            self.current = Some(next);
            self.targets.push(TargetRecord {
                target: next,
                started: state.breaker_moves_made(),
                finished: None,
                outcome: TargetOutcome::Unfinished,
                open_vertices: state.unvisited_count() - self.protected.len(),
            });
        }
    }

    /// Spends as much of the budget as the protection plan can use.
    fn spend(&mut self, claims: &mut Claims<'_>) {
        let pos = claims.state.walker_pos();
        while claims.remaining() > 0 {
            let Some(t) = self.target(claims) else {
                return;
            };
            if !claims.claim_pair(t, pos) {
                let next = open_incident(claims, t)
                    .find(|&(w, _)| usable(claims.state, w))
                    .map(|(_, id)| id)
                    .expect("an unsealed target has a usable edge");
                claims.claim_id(next);
            }
        }
        if self.current.is_some_and(|t| Self::is_sealed(claims, t)) {
            self.settle(claims.state, TargetOutcome::Protected);
        }
    }
}

impl Strategy for ProtectBreaker {
    fn name(&self) -> &'static str {
        "protect-breaker"
    }

    fn role(&self) -> Role {
        Role::Breaker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let mut claims = Claims::new(state);
        self.spend(&mut claims);
        claims.into_move()
    }

    fn memory_digest(&self) -> u64 {
        digest_of(&(self.current, self.settled.as_slice(), self.targets.len()))
    }

    fn report(&self) -> StrategyReport {
        StrategyReport {
            protected: self.protected.clone(),
            targets: self.targets.clone(),
            ..StrategyReport::new(self.name())
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Protects β−1 vertices, then picks the β lowest unvisited unprotected
/// vertices y_1..y_β and every turn takes the edges from Walker to them.
#[derive(Clone, Debug)]
pub struct BlockProtectBreaker {
    phase1: ProtectBreaker,
    beta: usize,
    ys: Option<Vec<Vertex>>,
}

impl BlockProtectBreaker {
    pub fn new(beta: u32) -> BlockProtectBreaker {
        BlockProtectBreaker {
            phase1: ProtectBreaker::new(Some(beta as usize - 1)),
            beta: beta as usize,
            ys: None,
        }
    }

    pub fn blocked(&self) -> Option<&[Vertex]> {
        self.ys.as_deref()
    }
}

impl Strategy for BlockProtectBreaker {
    fn name(&self) -> &'static str {
        "block-protect-breaker"
    }

    fn role(&self) -> Role {
        Role::Breaker
    }

    fn choose(&mut self, state: &GameState) -> Move {
        let mut claims = Claims::new(state);
        if !self.phase1.finished() {
            self.phase1.spend(&mut claims);
        }
        if self.phase1.finished() && claims.remaining() > 0 {
            let protected = &self.phase1.protected;
            let ys = self.ys.get_or_insert_with(Vec::new);
            // A y can only be lost on the turn phase 1 ends with part of the
            // budget spent; it is then replaced by the lowest candidate.
            ys.retain(|&y| !state.is_visited(y));
            let mut candidates = (0..state.vertex_count() as Vertex)
                .filter(|&v| !state.is_visited(v) && !protected.contains(&v));
            while ys.len() < self.beta {
                match candidates.find(|v| !ys.contains(v)) {
                    Some(v) => ys.push(v),
                    None => break,
                }
            }
            let pos = state.walker_pos();
            for &y in ys.iter() {
                claims.claim_pair(pos, y);
            }
            for &y in ys.iter() {
                loop {
                    let next = open_incident(&claims, y).next();
                    match next {
                        Some((_, id)) if claims.claim_id(id) => {}
                        _ => break,
                    }
                }
            }
        }
        claims.into_move()
    }

    fn memory_digest(&self) -> u64 {
        digest_of(&(self.phase1.memory_digest(), &self.ys))
    }

    fn report(&self) -> StrategyReport {
        StrategyReport {
            name: self.name().to_string(),
            ..self.phase1.report()
        }
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
