#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wb_core::graph::{Edge, Graph, GraphSpec, Vertex};
use wb_core::strategy::build_strategy;
use wb_core::{play_game, GameConfig, GameResult, GameState, Move, Role, TerminalReason, Variant};

/// Termination recomputed by brute force: BFS over non-Breaker edges.
pub fn naive_terminal(state: &GameState) -> Option<TerminalReason> {
    let graph = state.graph();
    let n = graph.vertex_count();
    if (0..n as Vertex).all(|v| state.is_visited(v)) {
        return Some(TerminalReason::AllVisited);
    }
    let pos = state.walker_pos();
    let open = |u: Vertex, v: Vertex| graph.has_edge(u, v) && !state.is_breaker_pair(u, v);
    let reachable = if state.variant() == Variant::Path {
        (0..n as Vertex).any(|v| !state.is_visited(v) && open(pos, v))
    } else {
        let mut seen = vec![false; n];
        seen[pos as usize] = true;
        let mut queue = VecDeque::from([pos]);
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for v in 0..n as Vertex {
                if !seen[v as usize] && open(u, v) {
                    if !state.is_visited(v) {
                        found = true;
                    }
                    seen[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }
        found
    };
    if !reachable {
        let blocked = (0..n as Vertex).all(|v| !open(pos, v));
        return Some(if blocked {
            TerminalReason::WalkerBlocked
        } else {
            TerminalReason::NoReachableUnvisited
        });
    }
    if state.walker_moves_made() >= state.config().move_cap {
        return Some(TerminalReason::MoveCap);
    }
    None
}

/// Replays a finished game move by move and audits every position.
pub fn audit_game(result: &GameResult) -> Result<(), String> {
    let config = result.config.to_config().map_err(|e| e.to_string())?;
    let mut state = GameState::initial(config.clone(), result.start).map_err(|e| e.to_string())?;
    let mut walker_edges: HashSet<Edge> = HashSet::new();
    let mut breaker_edges: HashSet<Edge> = HashSet::new();
    let mut path: Vec<Vertex> = vec![result.start];
    for (step, entry) in result.trace.iter().enumerate() {
        let at = |msg: String| format!("step {step}: {msg}");
        if naive_terminal(&state).is_some() {
            return Err(at("game continued past a terminal position".into()));
        }
        if entry.mover != state.to_move() {
            return Err(at(format!("{} moved out of turn", entry.mover)));
        }
        let free_before = state.free_edges_iter().count();
        let pos = state.walker_pos();
        state.apply(&entry.mv).map_err(|e| at(e.to_string()))?;
        match &entry.mv {
            Move::Walker(v) => {
                walker_edges.insert(Edge::new(pos, *v));
                path.push(*v);
            }
            Move::Breaker(edges) => {
                if edges.len() != free_before.min(config.bias as usize) {
                    return Err(at(format!("breaker claimed {} of {free_before} free", edges.len())));
                }
                for e in edges {
                    if !breaker_edges.insert(*e) {
                        return Err(at(format!("{e} claimed twice")));
                    }
                }
            }
        }
        if let Some(e) = walker_edges.intersection(&breaker_edges).next() {
            return Err(at(format!("{e} owned by both players")));
        }
        if config.variant == Variant::Path {
            let distinct: HashSet<&Vertex> = path.iter().collect();
            if distinct.len() != path.len() {
                return Err(at("path revisits a vertex".into()));
            }
        }
        if state.terminal() != naive_terminal(&state) {
            return Err(at(format!(
                "engine says {:?}, oracle says {:?}",
                state.terminal(),
                naive_terminal(&state)
            )));
        }
        if entry.hash != state.snapshot_hash() {
            return Err(at("snapshot hash differs on replay".into()));
        }
        state.check_invariants().map_err(at)?;
    }
    if state.terminal() != Some(result.terminal_reason) {
        return Err(format!("recorded {:?}, replay ends {:?}", result.terminal_reason, state.terminal()));
    }
    if state.visited_count() != result.visited_count || state.unvisited() != result.unvisited {
        return Err("recorded counts differ from replay".into());
    }
    let parsed = GameResult::from_json(&result.to_json()).map_err(|e| e.to_string())?;
    if &parsed != result {
        return Err("JSON round trip changed the result".into());
    }
    parsed.replay().map_err(|e| e.to_string())?;
    Ok(())
}

/// A random small game: graph, variant, bias, strategies and seed all drawn
/// from `seed`.
pub fn random_game(seed: u64) -> GameResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let variant = *[Variant::Path, Variant::Walk, Variant::RandomWalk].choose(&mut rng).unwrap();
    let spec = match rng.gen_range(0..3) {
        0 => GraphSpec::Complete { n: rng.gen_range(2..14) },
        1 => GraphSpec::Hypercube { dim: rng.gen_range(1..5) },
        _ => GraphSpec::Gnp {
            n: rng.gen_range(2..20),
            p: rng.gen_range(0.2..1.0),
            seed: rng.gen(),
        },
    };
    let graph = Arc::new(spec.build().unwrap());
    let n = graph.vertex_count();
    let config = GameConfig::new(Arc::clone(&graph), variant, rng.gen_range(1..4))
        .with_first_mover(if rng.gen() { Role::Walker } else { Role::Breaker })
        .with_move_cap(rng.gen_range(1..3 * n + 2))
        .with_seed(rng.gen());
    let mut walkers = vec!["random-walker", "greedy-walker"];
    if variant == Variant::Walk {
        walkers.push("dfs-walker");
    }
    let breakers = ["random-breaker", "null-breaker", "protect-breaker"];
    let walker = build_strategy(walkers.choose(&mut rng).unwrap(), &config).unwrap();
    let breaker = build_strategy(breakers.choose(&mut rng).unwrap(), &config).unwrap();
    let start = rng.gen_range(0..n) as Vertex;
    play_game(config, walker, breaker, start).unwrap()
}

pub fn complete(n: usize, variant: Variant, bias: u32, first: Role) -> GameConfig {
    GameConfig::new(Arc::new(Graph::complete(n).unwrap()), variant, bias).with_first_mover(first)
}
