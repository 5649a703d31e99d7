//! Exhaustive search for desk-sized instances: the minimax value of a game,
//! and the best any opponent can do against a fixed deterministic strategy.
//!
//! Walker maximizes the final visited count and Breaker minimizes it. A
//! Breaker turn is one move over an unordered set of edges.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use dashmap::DashMap;
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{ConfigEcho, GameConfig, GameError, GameState, Move, MoveError, Role, TerminalReason};
use crate::graph::{Edge, Vertex};
use crate::strategy::Strategy;

/// Largest complete graph solved without `force`.
pub const MAX_COMPLETE_VERTICES: usize = 7;
/// Largest other graph solved without `force`.
pub const MAX_GENERAL_EDGES: usize = 12;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("instance too large for exhaustive search ({0}); pass force to try anyway")]
    TooLarge(String),
    #[error("{0} draws random numbers and cannot be searched against")]
    Nondeterministic(String),
    #[error("{strategy} plays {plays}, but the searched side is {free}")]
    RoleMismatch {
        strategy: String,
        plays: Role,
        free: Role,
    },
    #[error("{strategy} produced an illegal move ({mv}): {source}")]
    IllegalStrategyMove {
        strategy: String,
        mv: Move,
        #[source]
        source: MoveError,
    },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Relabel vertices of K_n, keeping Walker's vertex and the visited
    /// set in place as classes.
    Complete,
    Identity,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Use K_n symmetry when the graph is complete.
    pub canonical: bool,
    /// Ignore the size guard.
    pub force: bool,
    /// Search root moves on the rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            canonical: true,
            force: false,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub config: ConfigEcho,
    pub start: Vertex,
    /// Visited count under the searched play.
    pub value: usize,
    pub nodes: u64,
    pub table_size: usize,
    #[serde(with = "secs")]
    pub elapsed: Duration,
    pub principal_variation: Vec<Move>,
    /// Leaves that ended at the move cap, anywhere in the search.
    pub cap_hits: u64,
    /// Whether the principal variation ends at the move cap.
    pub pv_hit_cap: bool,
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<String>,
}

mod secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        f64::deserialize(d).map(Duration::from_secs_f64)
    }
}

/// Memo key: a canonical encoding of everything the remaining game
/// depends on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalState(Vec<u64>);

impl CanonicalState {
    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

fn is_complete(state: &GameState) -> bool {
    let n = state.vertex_count();
    state.graph().edge_count() == n * (n.saturating_sub(1)) / 2
}

/// Whether the remaining game can still use edge `e`. A PathWalker never
/// returns to a vertex she has left, so only edges among unvisited
/// vertices and her own vertex matter.
fn relevant(state: &GameState, e: Edge) -> bool {
    if state.variant().allows_revisits() {
        return true;
    }
    let pos = state.walker_pos();
    let live = |v: Vertex| v == pos || !state.is_visited(v);
    live(e.lo()) && live(e.hi())
}

fn role_code(role: Role) -> u64 {
    match role {
        Role::Walker => 0,
        Role::Breaker => 1,
    }
}

/// The memo key of `state`. With [`Family::Complete`] on K_n, states that
/// differ by a relabeling fixing Walker's vertex and mapping visited to
/// visited vertices share a key; in the path variant edges the game can
/// no longer use are ignored apart from Breaker's total edge count.
pub fn canonicalize(state: &GameState, family: Family) -> CanonicalState {
    match family {
        Family::Complete if is_complete(state) && state.vertex_count() <= 11 => complete_key(state),
        _ => identity_key(state),
    }
}

fn complete_key(state: &GameState) -> CanonicalState {
    let n = state.vertex_count();
    let pos = state.walker_pos();
    let walk = state.variant().allows_revisits();
    let graph = state.graph();
    // 0 free, 1 Breaker, 2 Walker.
    let mut code = vec![0u8; n * n];
    for (id, e) in graph.edges().iter().enumerate() {
        let c = if state.is_breaker_edge(id as u32) {
            1
        } else if walk && state.is_walker_edge(id as u32) {
            2
        } else {
            0
        };
        code[e.lo() as usize * n + e.hi() as usize] = c;
        code[e.hi() as usize * n + e.lo() as usize] = c;
    }
    let others: Vec<Vertex> = if walk {
        state.visit_order().iter().copied().filter(|&v| v != pos).collect()
    } else {
        Vec::new()
    };
    let fresh = state.unvisited();

    let mut best: Option<(u64, u64)> = None;
    let encode = |order: &[Vertex]| {
        let (mut b, mut w, mut bit) = (0u64, 0u64, 0);
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                match code[order[i] as usize * n + order[j] as usize] {
                    1 => b |= 1 << bit,
                    2 => w |= 1 << bit,
                    _ => {}
                }
                bit += 1;
            }
        }
        (b, w)
    };
    let mut order = Vec::with_capacity(1 + others.len() + fresh.len());
    for a in others.iter().copied().permutations(others.len()) {
        for u in fresh.iter().copied().permutations(fresh.len()) {
            order.clear();
            order.push(pos);
            order.extend_from_slice(&a);
            order.extend_from_slice(&u);
            let enc = encode(&order);
            if best.is_none_or(|b| enc < b) {
                best = Some(enc);
            }
        }
    }
    let (b, w) = best.expect("at least one labeling");
    let mut words = vec![
        1,
        n as u64,
        others.len() as u64,
        fresh.len() as u64,
        role_code(state.to_move()),
        state.breaker_edge_ids().count_ones(..) as u64,
        b,
        w,
    ];
    if walk {
        words.push(state.walker_moves_made() as u64);
    }
    CanonicalState(words)
}

fn push_bits(words: &mut Vec<u64>, bits: &fixedbitset::FixedBitSet) {
    words.push(bits.len() as u64);
    words.extend(bits.as_slice().iter().map(|&b| b as u64));
}

fn identity_key(state: &GameState) -> CanonicalState {
    let mut words = vec![
        2,
        u64::from(state.walker_pos()),
        role_code(state.to_move()),
        state.walker_moves_made() as u64,
    ];
    push_bits(&mut words, state.visited_set());
    push_bits(&mut words, state.breaker_edge_ids());
    push_bits(&mut words, state.walker_edge_ids());
    CanonicalState(words)
}

/// Exact ceiling on the final visited count: the visited vertices plus the
/// unvisited ones Walker could still reach if Breaker stopped now.
fn reach_bound(state: &GameState) -> usize {
    let graph = state.graph();
    let walk = state.variant().allows_revisits();
    let mut seen = vec![false; state.vertex_count()];
    let pos = state.walker_pos();
    seen[pos as usize] = true;
    let mut stack = vec![pos];
    let mut found = 0;
    while let Some(v) = stack.pop() {
        for (&w, &id) in graph.neighbors(v).iter().zip(graph.incident_edge_ids(v)) {
            if seen[w as usize] || state.is_breaker_edge(id) {
                continue;
            }
            let fresh = !state.is_visited(w);
            if !walk && !fresh {
                continue;
            }
            seen[w as usize] = true;
            if fresh {
                found += 1;
            }
            stack.push(w);
        }
    }
    state.visited_count() + found
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bound {
    Exact,
    Lower,
    Upper,
}

struct Searcher<'a> {
    family: Family,
    /// The fixed side, if any; its instance travels with the position.
    fixed_role: Option<Role>,
    table: DashMap<(CanonicalState, u64), (i32, Bound)>,
    nodes: AtomicU64,
    cap_hits: AtomicU64,
    strategy_name: Option<&'a str>,
}

/// A position together with the fixed strategy's memory.
struct Node {
    state: GameState,
    fixed: Option<Box<dyn Strategy>>,
}

impl Node {
    fn digest(&self) -> u64 {
        self.fixed.as_ref().map_or(0, |s| s.memory_digest())
    }
}

impl Searcher<'_> {
    fn key(&self, node: &Node) -> (CanonicalState, u64) {
        let mut key = canonicalize(&node.state, self.family);
        if self.fixed_role.is_some() {
            key.0.push(node.state.walker_moves_made() as u64);
            key.0.extend(
                node.state
                    .last_breaker_move()
                    .iter()
                    .map(|e| (u64::from(e.lo()) << 32) | u64::from(e.hi())),
            );
        }
        (key, node.digest())
    }

    fn breaker_moves(&self, state: &GameState) -> Vec<Move> {
        let need = state.required_breaker_claims();
        let pos = state.walker_pos();
        let free: Vec<Edge> = state.free_edges_iter().collect();
        // A free Breaker facing the engine alone never gains from an edge
        // the game cannot use, so those only pad out short moves. Against
        // a fixed Walker every edge is a real choice.
        let (mut candidates, filler): (Vec<Edge>, Vec<Edge>) = if self.fixed_role.is_some() {
            (free, Vec::new())
        } else {
            free.into_iter().partition(|&e| relevant(state, e))
        };
        candidates.sort_by_key(|e| !e.contains(pos));
        let k = need.min(candidates.len());
        candidates
            .into_iter()
            .combinations(k)
            .map(|mut set| {
                set.extend(filler.iter().copied().take(need - k));
                set.sort_unstable();
                Move::Breaker(set)
            })
            .collect()
    }

    fn walker_moves(state: &GameState) -> Vec<Move> {
        let mut options = state.walker_options();
        options.sort_by_key(|&v| state.is_visited(v));
        options.into_iter().map(Move::Walker).collect()
    }

    /// The positions reachable in one move, most promising first.
    fn children(&self, node: &Node) -> Result<Vec<(Move, Node)>, SolverError> {
        let state = &node.state;
        let mover = state.to_move();
        if Some(mover) == self.fixed_role {
            let mut fixed = node.fixed.as_ref().expect("fixed strategy present").clone_box();
            let mv = fixed.choose(state);
            let next = state
                .apply_move(&mv)
                .map_err(|source| SolverError::IllegalStrategyMove {
                    strategy: self.strategy_name.unwrap_or("fixed").to_string(),
                    mv: mv.clone(),
                    source,
                })?;
            return Ok(vec![(
                mv,
                Node {
                    state: next,
                    fixed: Some(fixed),
                },
            )]);
        }
        let moves = match mover {
            Role::Walker => Self::walker_moves(state),
            Role::Breaker => self.breaker_moves(state),
        };
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(moves.len());
        for mv in moves {
            let next = state.apply_move(&mv).expect("generated moves are legal");
            let child = Node {
                state: next,
                fixed: node.fixed.clone(),
            };
            if mover == Role::Breaker && !seen.insert(self.key(&child)) {
                continue;
            }
            out.push((mv, child));
        }
        Ok(out)
    }

    fn search(&self, node: &Node, mut alpha: i32, mut beta: i32) -> Result<i32, SolverError> {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let state = &node.state;
        if let Some(reason) = state.terminal() {
            if reason == TerminalReason::MoveCap {
                self.cap_hits.fetch_add(1, Ordering::Relaxed);
            }
            return Ok(state.visited_count() as i32);
        }
        let lower = state.visited_count() as i32;
        let upper = reach_bound(state) as i32;
        if lower == upper || upper <= alpha {
            return Ok(upper);
        }
        if lower >= beta {
            return Ok(lower);
        }
        alpha = alpha.max(lower);
        beta = beta.min(upper);

        let key = self.key(node);
        if let Some(entry) = self.table.get(&key) {
            let (v, bound) = *entry;
            match bound {
                Bound::Exact => return Ok(v),
                Bound::Lower => alpha = alpha.max(v),
                Bound::Upper => beta = beta.min(v),
            }
            if alpha >= beta {
                return Ok(v);
            }
        }
        let (alpha0, beta0) = (alpha, beta);

        let maximizing = state.to_move() == Role::Walker;
        let mut best = if maximizing { i32::MIN } else { i32::MAX };
        for (_, child) in self.children(node)? {
            let v = self.search(&child, alpha, beta)?;
            if maximizing {
                best = best.max(v);
                alpha = alpha.max(v);
            } else {
                best = best.min(v);
                beta = beta.min(v);
            }
            if alpha >= beta {
                break;
            }
        }
        let bound = if best <= alpha0 {
            Bound::Upper
        } else if best >= beta0 {
            Bound::Lower
        } else {
            Bound::Exact
        };
        self.table.insert(key, (best, bound));
        Ok(best)
    }

    fn exact(&self, node: &Node) -> Result<i32, SolverError> {
        self.search(node, i32::MIN, i32::MAX)
    }

    fn root_value(&self, root: &Node, parallel: bool) -> Result<i32, SolverError> {
        if !parallel || root.state.is_terminal() {
            return self.exact(root);
        }
        let children = self.children(root)?;
        let values = children
            .into_par_iter()
            .map(|(_, child)| self.exact(&child))
            .collect::<Result<Vec<_>, _>>()?;
        let maximizing = root.state.to_move() == Role::Walker;
        let best = if maximizing {
            values.into_iter().max()
        } else {
            values.into_iter().min()
        };
        Ok(best.expect("a live position has a move"))
    }

    /// Follows moves that keep the value, from the root to a leaf.
    fn principal_variation(&self, root: Node, value: i32) -> Result<(Vec<Move>, bool), SolverError> {
        let mut pv = Vec::new();
        let mut node = root;
        while !node.state.is_terminal() {
            let mut next = None;
            for (mv, child) in self.children(&node)? {
                if self.exact(&child)? == value {
                    next = Some((mv, child));
                    break;
                }
            }
            let (mv, child) = next.expect("some move keeps the minimax value");
            pv.push(mv);
            node = child;
        }
        Ok((pv, node.state.terminal() == Some(TerminalReason::MoveCap)))
    }
}

fn guard(config: &GameConfig, force: bool) -> Result<(), SolverError> {
    if force {
        return Ok(());
    }
    let n = config.graph.vertex_count();
    let m = config.graph.edge_count();
    let complete = m == n * n.saturating_sub(1) / 2;
    if complete && n > MAX_COMPLETE_VERTICES {
        return Err(SolverError::TooLarge(format!(
            "K_{n} has 3^{m} edge colourings; the limit is K_{MAX_COMPLETE_VERTICES}"
        )));
    }
    if !complete && m > MAX_GENERAL_EDGES {
        return Err(SolverError::TooLarge(format!(
            "{m} edges allow up to 3^{m} edge colourings; the limit is {MAX_GENERAL_EDGES} edges"
        )));
    }
    Ok(())
}

fn run(
    config: &GameConfig,
    start: Vertex,
    fixed: Option<Box<dyn Strategy>>,
    options: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    guard(config, options.force)?;
    let began = Instant::now();
    let state = GameState::initial(config.clone(), start)?;
    let fixed_name = fixed.as_ref().map(|s| s.name().to_string());
    let family = if options.canonical && fixed.is_none() && is_complete(&state) {
        Family::Complete
    } else {
        Family::Identity
    };
    let searcher = Searcher {
        family,
        fixed_role: fixed.as_ref().map(|s| s.role()),
        table: DashMap::new(),
        nodes: AtomicU64::new(0),
        cap_hits: AtomicU64::new(0),
        strategy_name: fixed_name.as_deref(),
    };
    let root = Node { state, fixed };
    let value = searcher.root_value(&root, options.parallel)?;
    let (principal_variation, pv_hit_cap) = searcher.principal_variation(root, value)?;
    Ok(SolveReport {
        config: config.echo(),
        start,
        value: value as usize,
        nodes: searcher.nodes.load(Ordering::Relaxed),
        table_size: searcher.table.len(),
        elapsed: began.elapsed(),
        principal_variation,
        cap_hits: searcher.cap_hits.load(Ordering::Relaxed),
        pv_hit_cap,
        family,
        fixed: fixed_name,
    })
}

/// The minimax value with both sides playing optimally.
pub fn solve_optimal(config: &GameConfig, start: Vertex) -> Result<SolveReport, SolverError> {
    solve_optimal_with(config, start, &SolveOptions::default())
}

pub fn solve_optimal_with(
    config: &GameConfig,
    start: Vertex,
    options: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    run(config, start, None, options)
}

/// The value when `fixed` plays its side and the other side (`free_role`)
/// searches every option: the least a fixed Walker guarantees, or the most
/// a fixed Breaker concedes.
pub fn best_response_value(
    config: &GameConfig,
    fixed: &dyn Strategy,
    free_role: Role,
    start: Vertex,
) -> Result<SolveReport, SolverError> {
    best_response_value_with(config, fixed, free_role, start, &SolveOptions::default())
}

pub fn best_response_value_with(
    config: &GameConfig,
    fixed: &dyn Strategy,
    free_role: Role,
    start: Vertex,
    options: &SolveOptions,
) -> Result<SolveReport, SolverError> {
    if !fixed.is_deterministic() {
        return Err(SolverError::Nondeterministic(fixed.name().to_string()));
    }
    if fixed.role() == free_role {
        return Err(SolverError::RoleMismatch {
            strategy: fixed.name().to_string(),
            plays: fixed.role(),
            free: free_role,
        });
    }
    run(config, start, Some(fixed.clone_box()), options)
}

/// Replays a principal variation and returns the final visited count.
pub fn replay_pv(config: &GameConfig, start: Vertex, pv: &[Move]) -> Result<usize, GameError> {
    let mut state = GameState::initial(config.clone(), start)?;
    for (step, mv) in pv.iter().enumerate() {
        state.apply(mv).map_err(|e| GameError::Replay {
            step,
            reason: e.to_string(),
        })?;
    }
    if !state.is_terminal() {
        return Err(GameError::Replay {
            step: pv.len(),
            reason: "variation stops before the game ends".into(),
        });
    }
    Ok(state.visited_count())
}
