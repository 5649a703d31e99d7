//! Walker and Breaker policies.
//!
//! Every strategy sees the full [`GameState`] on its turn and returns a legal
//! move. Ties are always broken towards the lowest vertex or edge index.

mod baseline;
mod dfs;
mod lr;
mod mirror;
mod protect;
mod theorem1;

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameConfig, GameState, Move, Role, Variant};
use crate::graph::Vertex;

pub use baseline::{GreedyWalker, NullBreaker, RandomBreaker, RandomWalker};
pub use dfs::DfsWalker;
pub use lr::LrWalker;
pub use mirror::MirrorBreaker;
pub use protect::{BlockProtectBreaker, ProtectBreaker};
pub use theorem1::{Theorem1Breaker, Theorem1Walker};

/// A policy for one side of the game.
///
/// Instances keep per-game memory and must not be shared between games;
/// `clone_box` forks one, memory included.
pub trait Strategy: Send {
    fn name(&self) -> &'static str;

    fn role(&self) -> Role;

    /// Picks a move. Only called on this strategy's turn in a live game.
    fn choose(&mut self, state: &GameState) -> Move;

    /// False for strategies that draw random numbers.
    fn is_deterministic(&self) -> bool {
        true
    }

    /// Hash of whatever memory influences future moves beyond the position.
    fn memory_digest(&self) -> u64 {
        0
    }

    fn report(&self) -> StrategyReport {
        StrategyReport::new(self.name())
    }

    fn clone_box(&self) -> Box<dyn Strategy>;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

impl fmt::Debug for dyn Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Strategy({})", self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("unknown strategy {0:?}")]
    Unknown(String),
    #[error("{strategy}: {reason}")]
    BadParameter { strategy: String, reason: String },
    #[error("{strategy} cannot play this game: {reason}")]
    Incompatible { strategy: String, reason: String },
}

/// When and why a strategy abandoned its plan for greedy play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fallback {
    pub walker_moves: usize,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetOutcome {
    Protected,
    Visited,
    Unfinished,
}

/// One vertex a protecting Breaker worked on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetRecord {
    pub target: Vertex,
    /// Breaker moves made when work on the target began.
    pub started: usize,
    /// Breaker moves made when the target was settled.
    pub finished: Option<usize>,
    pub outcome: TargetOutcome,
    /// Unvisited, unprotected vertices when work on the target began.
    pub open_vertices: usize,
}

/// Relegations from R to L at the start of one round of the L/R walker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relegation {
    pub round: usize,
    /// |R| before the sweep.
    pub r_before: usize,
    pub moved: usize,
    /// |L| after the sweep.
    pub l_after: usize,
}

/// What a strategy has to say about a finished game.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<Fallback>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub protected: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub targets: Vec<TargetRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relegations: Vec<Relegation>,
}

impl StrategyReport {
    pub fn new(name: &str) -> StrategyReport {
        StrategyReport {
            name: name.to_string(),
            ..StrategyReport::default()
        }
    }
}

/// Constants derived from the bias β. Logarithms are natural.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyParams {
    pub beta: u32,
    /// 1/(3(β+1)).
    pub alpha: Ratio<u64>,
    /// 1/ln(4β/(4β−1)).
    pub a_beta: f64,
    /// A_β/α.
    pub c_beta: f64,
    /// β/ln(10β/(10β−α)).
    pub big_c_beta: f64,
    /// 1/ln(β/(β−1)); only for β ≥ 2.
    pub c1: Option<f64>,
}

impl StrategyParams {
    pub fn new(beta: u32) -> StrategyParams {
        assert!(beta >= 1, "bias must be positive");
        let b = f64::from(beta);
        let alpha = Ratio::new(1, 3 * (u64::from(beta) + 1));
        let alpha_f = 1.0 / (3.0 * (b + 1.0));
        let a_beta = 1.0 / (4.0 * b / (4.0 * b - 1.0)).ln();
        StrategyParams {
            beta,
            alpha,
            a_beta,
            c_beta: a_beta / alpha_f,
            big_c_beta: b / (10.0 * b / (10.0 * b - alpha_f)).ln(),
            c1: (beta >= 2).then(|| 1.0 / (b / (b - 1.0)).ln()),
        }
    }

    pub fn alpha_f64(&self) -> f64 {
        *self.alpha.numer() as f64 / *self.alpha.denom() as f64
    }

    /// Whether `value ≥ α·count`, exactly.
    pub fn at_least_alpha_of(&self, value: u64, count: u64) -> bool {
        Ratio::from_integer(value) >= self.alpha * Ratio::from_integer(count)
    }
}

/// Strategy identifiers accepted by [`build_strategy`].
pub const STRATEGY_NAMES: &[&str] = &[
    "theorem1-walker",
    "theorem1-breaker",
    "lr-walker",
    "protect-breaker",
    "block-protect-breaker",
    "dfs-walker",
    "mirror-breaker",
    "random-walker",
    "greedy-walker",
    "random-breaker",
    "null-breaker",
];

/// The side a named strategy plays.
pub fn strategy_role(name: &str) -> Option<Role> {
    let name = name.split(':').next().unwrap_or(name);
    if !STRATEGY_NAMES.contains(&name) && name != "randomwalk-protect-breaker" {
        return None;
    }
    Some(if name.ends_with("walker") {
        Role::Walker
    } else {
        Role::Breaker
    })
}

/// Builds a strategy from `name[:key=value]...` for the given game.
///
/// Randomized strategies take `seed=` and otherwise use the config seed.
pub fn build_strategy(spec: &str, config: &GameConfig) -> Result<Box<dyn Strategy>, StrategyError> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default().trim();
    let mut params = BTreeMap::new();
    for part in parts {
        let (k, v) = part.split_once('=').ok_or_else(|| StrategyError::BadParameter {
            strategy: name.to_string(),
            reason: format!("expected key=value, got {part:?}"),
        })?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut params = Params {
        strategy: name,
        map: params,
    };
    let check = Check { name, config };
    let beta = config.bias;
    let strategy: Box<dyn Strategy> = match name {
        "theorem1-walker" => {
            check.variant(&[Variant::Path])?;
            check.bias(beta == 1, "needs bias 1")?;
            Box::new(Theorem1Walker::new())
        }
        "theorem1-breaker" => {
            check.variant(&[Variant::Path])?;
            check.bias(beta == 1, "needs bias 1")?;
            Box::new(Theorem1Breaker::new())
        }
        "lr-walker" => {
            check.variant(&[Variant::Path])?;
            check.bias(beta >= 2, "needs bias at least 2")?;
            Box::new(LrWalker::new(config))
        }
        "protect-breaker" | "randomwalk-protect-breaker" => {
            if name == "randomwalk-protect-breaker" {
                check.bias(beta == 1, "needs bias 1")?;
            }
            let limit = params.usize("targets")?;
            Box::new(ProtectBreaker::new(limit))
        }
        "block-protect-breaker" => {
            check.variant(&[Variant::Walk, Variant::RandomWalk])?;
            let n = config.graph.vertex_count() as u64;
            check.bias(
                n > u64::from(beta) * u64::from(beta),
                "needs n - 1 >= bias squared",
            )?;
            Box::new(BlockProtectBreaker::new(beta))
        }
        "dfs-walker" => {
            check.variant(&[Variant::Walk])?;
            Box::new(DfsWalker::new(config.graph.vertex_count()))
        }
        "mirror-breaker" => {
            check.bias(beta == 1, "needs bias 1")?;
            let dim = config.graph.hypercube_dim().ok_or_else(|| check.incompatible("needs a hypercube"))?;
            if dim < 2 {
                return Err(check.incompatible("needs a hypercube of dimension at least 2"));
            }
            Box::new(MirrorBreaker::new(dim))
        }
        "random-walker" => {
            let seed = params.u64("seed")?.unwrap_or(config.seed);
            Box::new(RandomWalker::new(seed))
        }
        "greedy-walker" => Box::new(GreedyWalker::new()),
        "random-breaker" => {
            let seed = params.u64("seed")?.unwrap_or(config.seed);
            Box::new(RandomBreaker::new(seed))
        }
        "null-breaker" => Box::new(NullBreaker),
        other => return Err(StrategyError::Unknown(other.to_string())),
    };
    params.finish()?;
    Ok(strategy)
}

struct Params<'a> {
    strategy: &'a str,
    map: BTreeMap<String, String>,
}

impl Params<'_> {
    fn take<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, StrategyError> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| StrategyError::BadParameter {
                strategy: self.strategy.to_string(),
                reason: format!("bad value {v:?} for {key}"),
            }),
        }
    }

    fn u64(&mut self, key: &str) -> Result<Option<u64>, StrategyError> {
        self.take(key)
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>, StrategyError> {
        self.take(key)
    }

    fn finish(self) -> Result<(), StrategyError> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(StrategyError::BadParameter {
                strategy: self.strategy.to_string(),
                reason: format!("unknown parameter {k:?}"),
            }),
        }
    }
}

struct Check<'a> {
    name: &'a str,
    config: &'a GameConfig,
}

impl Check<'_> {
    fn incompatible(&self, reason: &str) -> StrategyError {
        StrategyError::Incompatible {
            strategy: self.name.to_string(),
            reason: reason.to_string(),
        }
    }

    fn variant(&self, allowed: &[Variant]) -> Result<(), StrategyError> {
        if allowed.contains(&self.config.variant) {
            Ok(())
        } else {
            Err(self.incompatible(&format!("does not play the {} variant", self.config.variant)))
        }
    }

    fn bias(&self, ok: bool, reason: &str) -> Result<(), StrategyError> {
        if ok {
            Ok(())
        } else {
            Err(self.incompatible(reason))
        }
    }
}

/// Per-role ChaCha stream so a walker and a breaker sharing a seed do not
/// draw the same numbers.
fn seeded_rng(seed: u64, role: Role) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match role {
        Role::Walker => 1,
        Role::Breaker => 2,
    });
    rng
}

fn digest_of(value: &impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Lowest-index unvisited vertex Walker can step to, if any.
fn lowest_fresh_option(state: &GameState) -> Option<Vertex> {
    let graph = state.graph();
    let pos = state.walker_pos();
    graph
        .neighbors(pos)
        .iter()
        .zip(graph.incident_edge_ids(pos))
        .find(|&(&w, &id)| !state.is_visited(w) && !state.is_breaker_edge(id))
        .map(|(&w, _)| w)
}

/// A Breaker move under construction.
struct Claims<'a> {
    state: &'a GameState,
    ids: Vec<u32>,
    budget: usize,
}

impl<'a> Claims<'a> {
    fn new(state: &'a GameState) -> Claims<'a> {
        Claims {
            state,
            ids: Vec::with_capacity(state.bias()),
            budget: state.required_breaker_claims(),
        }
    }

    fn remaining(&self) -> usize {
        self.budget - self.ids.len()
    }

    /// Free and not yet chosen this turn.
    fn available(&self, id: u32) -> bool {
        self.state.is_free(id) && !self.ids.contains(&id)
    }

    fn claim_id(&mut self, id: u32) -> bool {
        if self.remaining() == 0 || !self.available(id) {
            return false;
        }
        self.ids.push(id);
        true
    }

    fn claim_pair(&mut self, u: Vertex, v: Vertex) -> bool {
        match self.state.graph().edge_id(u, v) {
            Some(id) => self.claim_id(id),
            None => false,
        }
    }

    /// Fills the rest of the budget with the lowest-index free edges.
    fn fill_lowest(&mut self) {
        let m = self.state.graph().edge_count() as u32;
        let mut id = 0;
        while self.remaining() > 0 && id < m {
            self.claim_id(id);
            id += 1;
        }
    }

    fn into_move(mut self) -> Move {
        self.fill_lowest();
        let graph = self.state.graph();
        Move::Breaker(self.ids.iter().map(|&id| graph.edge(id)).collect())
    }
}

/// Free edges incident to `v`, lowest index first, skipping those already
/// chosen in `claims`.
fn open_incident<'s>(claims: &'s Claims<'_>, v: Vertex) -> impl Iterator<Item = (Vertex, u32)> + 's {
    let graph = claims.state.graph();
    graph
        .neighbors(v)
        .iter()
        .zip(graph.incident_edge_ids(v))
        .filter(move |&(_, &id)| claims.available(id))
        .map(|(&w, &id)| (w, id))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::Graph;

    fn config(graph: Graph, variant: Variant, bias: u32) -> GameConfig {
        GameConfig::new(Arc::new(graph), variant, bias)
    }

    #[test]
    fn params_for_small_biases() {
        let p = StrategyParams::new(2);
        assert_eq!(p.alpha, Ratio::new(1, 9));
        assert!((StrategyParams::new(1).a_beta - 3.476_059_5).abs() < 1e-6);
        assert!((p.c1.unwrap() - std::f64::consts::LOG2_E).abs() < 1e-12);
        assert!((p.c_beta - 9.0 * p.a_beta).abs() < 1e-9);
        assert!(StrategyParams::new(1).c1.is_none());
        // 3 Breaker edges into an R of size 28 stays below α|R| = 28/9.
        assert!(!p.at_least_alpha_of(3, 28));
        assert!(p.at_least_alpha_of(3, 27));
        for beta in 1..6 {
            let p = StrategyParams::new(beta);
            assert!(p.alpha <= Ratio::new(1, 6));
            assert!(p.a_beta > 0.0 && p.c_beta > 0.0 && p.big_c_beta > 0.0);
        }
    }

    #[test]
    fn registry_builds_every_strategy_somewhere() {
        let path1 = config(Graph::complete(7).unwrap(), Variant::Path, 1);
        let path2 = config(Graph::complete(7).unwrap(), Variant::Path, 2);
        let walk2 = config(Graph::complete(7).unwrap(), Variant::Walk, 2);
        let cube = config(Graph::hypercube(3).unwrap(), Variant::Walk, 1);
        for name in STRATEGY_NAMES {
            let built = [&path1, &path2, &walk2, &cube]
                .iter()
                .find_map(|c| build_strategy(name, c).ok())
                .unwrap_or_else(|| panic!("{name} never builds"));
            assert_eq!(built.name(), *name);
            assert_eq!(Some(built.role()), strategy_role(name));
        }
    }

    #[test]
    fn registry_rejects_mismatches() {
        let path2 = config(Graph::complete(7).unwrap(), Variant::Path, 2);
        let err = build_strategy("theorem1-walker", &path2).unwrap_err();
        assert!(matches!(err, StrategyError::Incompatible { .. }));
        let path1 = config(Graph::complete(7).unwrap(), Variant::Path, 1);
        assert!(build_strategy("lr-walker", &path1).is_err());
        assert!(build_strategy("mirror-breaker", &path1).is_err());
        assert!(build_strategy("dfs-walker", &path1).is_err());
        let walk3 = config(Graph::complete(9).unwrap(), Variant::Walk, 3);
        assert!(build_strategy("block-protect-breaker", &walk3).is_err());
        assert_eq!(
            build_strategy("nope", &path1).unwrap_err(),
            StrategyError::Unknown("nope".into())
        );
        assert!(build_strategy("random-breaker:seed=x", &path1).is_err());
        assert!(build_strategy("random-breaker:colour=red", &path1).is_err());
        assert!(build_strategy("random-breaker:seed=4", &path1).is_ok());
        assert!(build_strategy("protect-breaker:targets=2", &path1).is_ok());
    }

    #[test]
    fn seeded_streams_differ_by_role() {
        use rand::RngCore;
        let a = seeded_rng(5, Role::Walker).next_u64();
        let b = seeded_rng(5, Role::Breaker).next_u64();
        assert_ne!(a, b);
        assert_eq!(a, seeded_rng(5, Role::Walker).next_u64());
    }
}
