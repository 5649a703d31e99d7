//! Verification recipes: each bundles a set of checks with measured numbers.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{play_trial, ExperimentSpec, HarnessError};
use crate::boxgame::{run_box, BoxPolicy};
use crate::game::{GameConfig, GameResult, GameState, Move, Role, Variant};
use crate::graph::{Graph, GraphSpec};
use crate::solver::{best_response_value, solve_optimal};
use crate::strategy::{Strategy, Theorem1Breaker, Theorem1Walker};

/// Largest unvisited/ln n seen for lr-walker against protect-breaker at
/// β = 2, rounded up.
pub const T2_RATIO_FIXTURE: f64 = 1.35;
/// Allowed relative spread of the per-size mean ratio around the overall mean.
pub const T2_STABILITY: f64 = 0.25;
/// Allowed max/min spread of median/ln n in the random-walk sweep.
pub const RW_BAND: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recipe {
    T1,
    T2,
    T3,
    T4,
    Box,
    Rw,
}

impl Recipe {
    pub const ALL: [Recipe; 6] = [Recipe::T1, Recipe::T2, Recipe::T3, Recipe::T4, Recipe::Box, Recipe::Rw];
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Recipe::T1 => "t1",
            Recipe::T2 => "t2",
            Recipe::T3 => "t3",
            Recipe::T4 => "t4",
            Recipe::Box => "box",
            Recipe::Rw => "rw",
        };
        f.write_str(s)
    }
}

impl FromStr for Recipe {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Recipe::ALL
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| HarnessError::InvalidSpec(format!("unknown recipe {s:?}")))
    }
}

/// One named sub-condition of a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Every part passed within the time limit.
    pub passed: bool,
    pub parts: Vec<Part>,
    pub elapsed_secs: f64,
    pub limit_secs: f64,
}

impl Check {
    fn new(id: &str, limit_secs: f64, started: Instant, parts: Vec<Part>) -> Check {
        let elapsed_secs = started.elapsed().as_secs_f64();
        Check {
            id: id.to_string(),
            passed: elapsed_secs <= limit_secs && parts.iter().all(|p| p.passed),
            parts,
            elapsed_secs,
            limit_secs,
        }
    }

    pub fn failed_parts(&self) -> Vec<&str> {
        self.parts.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect()
    }

    pub fn within_limit(&self) -> bool {
        self.elapsed_secs <= self.limit_secs
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({:.1}s of {:.0}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.elapsed_secs,
            self.limit_secs
        )?;
        for p in &self.parts {
            write!(f, "\n  {} {}: {}", if p.passed { "ok  " } else { "FAIL" }, p.name, p.detail)?;
        }
        Ok(())
    }
}

fn part(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Part {
    Part {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub recipe: Recipe,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs every check of a recipe.
pub fn verify(recipe: Recipe, seed: u64) -> Result<VerifyReport, HarnessError> {
    let checks = match recipe {
        Recipe::T1 => {
            let (smoke, invariant) = t1_games(seed)?;
            vec![t1_exact()?, t1_soundness()?, smoke, invariant]
        }
        Recipe::T2 => vec![t2_scaling(seed)?],
        Recipe::T3 => vec![t3_exact(seed)?],
        Recipe::T4 => vec![t4_bounds(seed)?],
        Recipe::Box => vec![box_lemma(seed)?],
        Recipe::Rw => vec![rw_trend(seed)?],
    };
    Ok(VerifyReport { recipe, seed, checks })
}

fn complete_config(n: usize, variant: Variant, bias: u32, first: Role) -> Result<GameConfig, HarnessError> {
    Ok(GameConfig::new(Arc::new(Graph::complete(n)?), variant, bias).with_first_mover(first))
}

/// Optimal value on K_6 with both first movers.
pub fn t1_exact() -> Result<Check, HarnessError> {
    let started = Instant::now();
    let mut parts = Vec::new();
    for first in [Role::Walker, Role::Breaker] {
        let report = solve_optimal(&complete_config(6, Variant::Path, 1, first)?, 0)?;
        parts.push(part(
            format!("K_6 {first} first"),
            report.value == 4,
            format!("value {} (nodes {}, {:.2}s)", report.value, report.nodes, report.elapsed.as_secs_f64()),
        ));
    }
    Ok(Check::new("T1-exact", 600.0, started, parts))
}

/// Best responses to both all-but-two strategies on K_6.
pub fn t1_soundness() -> Result<Check, HarnessError> {
    let started = Instant::now();
    let mut parts = Vec::new();
    for first in [Role::Walker, Role::Breaker] {
        let config = complete_config(6, Variant::Path, 1, first)?;
        let w = best_response_value(&config, &Theorem1Walker::new(), Role::Breaker, 0)?;
        parts.push(part(
            format!("theorem1-walker, {first} first"),
            w.value >= 4,
            format!("free Breaker holds her to {}", w.value),
        ));
        let b = best_response_value(&config, &Theorem1Breaker::new(), Role::Walker, 0)?;
        parts.push(part(
            format!("theorem1-breaker, {first} first"),
            b.value <= 4,
            format!("free Walker reaches {}", b.value),
        ));
    }
    Ok(Check::new("T1-soundness", 600.0, started, parts))
}

/// Checks that every Breaker edge meets the visited set after each Walker
/// move, while more than two vertices are unvisited and before
/// `fallback_at` Walker moves.
fn invariant_one(state: &GameState, fallback_at: Option<usize>) -> Result<(), String> {
    if state.unvisited_count() <= 2 || fallback_at.is_some_and(|k| state.walker_moves_made() > k) {
        return Ok(());
    }
    match state
        .breaker_edges()
        .iter()
        .find(|e| !state.is_visited(e.lo()) && !state.is_visited(e.hi()))
    {
        Some(e) => Err(format!(
            "after Walker move {}: {e} avoids the visited set",
            state.walker_moves_made()
        )),
        None => Ok(()),
    }
}

/// Replays a game played by theorem1-walker and checks the chase invariant
/// after each of her moves.
pub fn theorem1_invariant(result: &GameResult) -> Result<(), String> {
    let fallback_at = result
        .walker
        .as_ref()
        .and_then(|w| w.fallback.as_ref())
        .map(|f| f.walker_moves);
    let config = result.config.to_config().map_err(|e| e.to_string())?;
    let mut state = GameState::initial(config, result.start).map_err(|e| e.to_string())?;
    for entry in &result.trace {
        state.apply(&entry.mv).map_err(|e| e.to_string())?;
        if entry.mover == Role::Walker {
            invariant_one(&state, fallback_at)?;
        }
    }
    Ok(())
}

/// Plays theorem1-walker against every Breaker move sequence; returns the
/// number of leaves and the first violation.
pub fn theorem1_invariant_exhaustive(config: &GameConfig) -> Result<(usize, Option<String>), HarnessError> {
    fn go(state: &GameState, walker: &Theorem1Walker, leaves: &mut usize) -> Option<String> {
        if state.is_terminal() {
            *leaves += 1;
            return None;
        }
        match state.to_move() {
            Role::Walker => {
                let mut w = walker.clone();
                let mv = w.choose(state);
                let next = match state.apply_move(&mv) {
                    Ok(next) => next,
                    Err(e) => return Some(format!("illegal walker move {mv}: {e}")),
                };
                let fallback_at = w.report().fallback.map(|f| f.walker_moves);
                if let Err(e) = invariant_one(&next, fallback_at) {
                    return Some(e);
                }
                go(&next, &w, leaves)
            }
            Role::Breaker => {
                for e in state.free_edges_iter().collect::<Vec<_>>() {
                    let next = state.apply_move(&Move::Breaker(vec![e])).expect("free edge");
                    if let Some(v) = go(&next, walker, leaves) {
                        return Some(v);
                    }
                }
                None
            }
        }
    }
    let state = GameState::initial(config.clone(), 0)?;
    let mut leaves = 0;
    let violation = go(&state, &Theorem1Walker::new(), &mut leaves);
    Ok((leaves, violation))
}

/// Runs `trials` games of one pairing, half with each first mover.
fn games(
    graph: GraphSpec,
    variant: Variant,
    bias: u32,
    walker: &str,
    breaker: &str,
    trials: usize,
    seed: u64,
) -> Result<Vec<GameResult>, HarnessError> {
    let mut out = Vec::with_capacity(trials);
    for (first, count) in [(Role::Walker, trials.div_ceil(2)), (Role::Breaker, trials / 2)] {
        if count == 0 {
            continue;
        }
        let mut spec = ExperimentSpec::new(graph.clone(), variant, bias, walker, breaker);
        spec.first_mover = first;
        spec.trials = count;
        spec.seed = seed;
        spec.random_start = true;
        spec.validate()?;
        let results = (0..count)
            .into_par_iter()
            .map(|t| play_trial(&spec, None, t))
            .collect::<Result<Vec<_>, _>>()?;
        out.extend(results);
    }
    Ok(out)
}

/// Tallies games against a bound; `at_least` picks the direction.
fn bound_part(name: String, results: &[GameResult], bound: usize, at_least: bool) -> Part {
    let bad: Vec<usize> = results
        .iter()
        .map(|r| r.visited_count)
        .filter(|&v| if at_least { v < bound } else { v > bound })
        .collect();
    let lo = results.iter().map(|r| r.visited_count).min().unwrap_or(0);
    let hi = results.iter().map(|r| r.visited_count).max().unwrap_or(0);
    let rel = if at_least { ">=" } else { "<=" };
    part(
        name,
        bad.is_empty(),
        format!("{} games, visited {lo}..={hi}, need {rel} {bound}, {} violations", results.len(), bad.len()),
    )
}

/// Seeded games for the all-but-two strategies, and the chase invariant over
/// every game theorem1-walker played plus all Breaker lines on K_6.
pub fn t1_games(seed: u64) -> Result<(Check, Check), HarnessError> {
    let started = Instant::now();
    let mut smoke = Vec::new();
    let mut walker_games = Vec::new();
    for n in [10, 20, 50] {
        let g = GraphSpec::Complete { n };
        let bound = n - 2;
        let rb = games(g.clone(), Variant::Path, 1, "theorem1-walker", "random-breaker", 1000, seed)?;
        smoke.push(bound_part(format!("n={n} theorem1-walker vs random-breaker"), &rb, bound, true));
        for walker in ["random-walker", "greedy-walker"] {
            let r = games(g.clone(), Variant::Path, 1, walker, "theorem1-breaker", 1000, seed)?;
            smoke.push(bound_part(format!("n={n} {walker} vs theorem1-breaker"), &r, bound, false));
        }
        walker_games.extend(rb);
        for breaker in ["theorem1-breaker", "null-breaker"] {
            walker_games.extend(games(g.clone(), Variant::Path, 1, "theorem1-walker", breaker, 2, seed)?);
        }
    }
    let smoke = Check::new("T1-smoke", 60.0, started, smoke);

    let started = Instant::now();
    let mut parts = Vec::new();
    let violations: Vec<String> = walker_games
        .iter()
        .filter_map(|r| theorem1_invariant(r).err())
        .collect();
    let fallbacks = walker_games
        .iter()
        .filter(|r| r.walker.as_ref().is_some_and(|w| w.fallback.is_some()))
        .count();
    parts.push(part(
        "seeded games",
        violations.is_empty(),
        format!(
            "{} games, {} fallbacks, {} violations{}",
            walker_games.len(),
            fallbacks,
            violations.len(),
            violations.first().map(|v| format!(" (first: {v})")).unwrap_or_default()
        ),
    ));
    for first in [Role::Walker, Role::Breaker] {
        let (leaves, violation) = theorem1_invariant_exhaustive(&complete_config(6, Variant::Path, 1, first)?)?;
        parts.push(part(
            format!("every Breaker line on K_6, {first} first"),
            violation.is_none(),
            format!("{leaves} games{}", violation.map(|v| format!(", {v}")).unwrap_or_default()),
        ));
    }
    let invariant = Check::new("Strategy-invariant(1)", 60.0, started, parts);
    Ok((smoke, invariant))
}

/// Block-protect against DFS and their opponents, on complete graphs.
pub fn t3_exact(seed: u64) -> Result<Check, HarnessError> {
    let started = Instant::now();
    let mut parts = Vec::new();
    for (n, beta) in [(10usize, 2u32), (25, 2), (26, 5)] {
        let g = GraphSpec::Complete { n };
        let bound = n - 2 * beta as usize + 1;
        let mut sub = Vec::new();
        for first in [Role::Walker, Role::Breaker] {
            let mut spec = ExperimentSpec::new(g.clone(), Variant::Walk, beta, "dfs-walker", "block-protect-breaker");
            spec.first_mover = first;
            let r = play_trial(&spec, None, 0)?;
            sub.push((format!("named pair, {first} first"), r.visited_count == bound, r.visited_count));
        }
        let mut ok = sub.iter().all(|s| s.1);
        let mut detail: Vec<String> = sub.iter().map(|s| format!("{} visited {}", s.0, s.2)).collect();
        for breaker in ["block-protect-breaker", "random-breaker", "protect-breaker"] {
            let r = games(g.clone(), Variant::Walk, beta, "dfs-walker", breaker, 100, seed)?;
            let p = bound_part(format!("dfs-walker vs {breaker}"), &r, bound, true);
            ok &= p.passed;
            detail.push(format!("{}: {}", p.name, p.detail));
        }
        for walker in ["dfs-walker", "greedy-walker", "random-walker"] {
            let r = games(g.clone(), Variant::Walk, beta, walker, "block-protect-breaker", 100, seed)?;
            let p = bound_part(format!("{walker} vs block-protect-breaker"), &r, bound, false);
            ok &= p.passed;
            detail.push(format!("{}: {}", p.name, p.detail));
        }
        parts.push(part(
            format!("({n},{beta}) value {bound}"),
            ok,
            detail.join("; "),
        ));
    }
    Ok(Check::new("T3-exact", 60.0, started, parts))
}

/// Half-cube bounds on Q_d, Walker first.
pub fn t4_bounds(seed: u64) -> Result<Check, HarnessError> {
    let started = Instant::now();
    let mut parts = Vec::new();
    let walker_first = |walker: &str, breaker: &str, dim: usize, trials: usize| -> Result<Vec<GameResult>, HarnessError> {
        let mut spec = ExperimentSpec::new(GraphSpec::Hypercube { dim }, Variant::Walk, 1, walker, breaker);
        spec.first_mover = Role::Walker;
        spec.trials = trials;
        spec.seed = seed;
        spec.random_start = true;
        spec.validate()?;
        (0..trials).into_par_iter().map(|t| play_trial(&spec, None, t)).collect()
    };
    for dim in 4..=8 {
        let (lower, upper) = (1usize << (dim - 2), 1usize << (dim - 1));
        let mut ok = true;
        let mut detail = Vec::new();
        let mut record = |p: Part| {
            ok &= p.passed;
            detail.push(format!("{}: {}", p.name, p.detail));
        };
        for breaker in ["mirror-breaker", "random-breaker"] {
            let r = walker_first("dfs-walker", breaker, dim, 100)?;
            record(bound_part(format!("dfs-walker vs {breaker}"), &r, lower, true));
        }
        for walker in ["dfs-walker", "greedy-walker", "random-walker"] {
            let r = walker_first(walker, "mirror-breaker", dim, 100)?;
            record(bound_part(format!("{walker} vs mirror-breaker"), &r, upper, false));
        }
        parts.push(part(format!("Q_{dim} in [{lower}, {upper}]"), ok, detail.join("; ")));
    }
    Ok(Check::new("T4-bounds", 120.0, started, parts))
}

/// lr-walker against protect-breaker at β = 2 on K_256, K_512, K_1024.
pub fn t2_scaling(seed: u64) -> Result<Check, HarnessError> {
    let started = Instant::now();
    let mut spec = ExperimentSpec::new(GraphSpec::Complete { n: 256 }, Variant::Path, 2, "lr-walker", "protect-breaker");
    spec.trials = 20;
    spec.seed = seed;
    spec.random_start = true;
    spec.sweep = vec![256, 512, 1024];
    let summary = super::run_experiment(&spec)?;

    let mut a_ok = true;
    let mut a_detail = Vec::new();
    let mut ratios = Vec::new();
    for n in [256usize, 512, 1024] {
        let rows: Vec<_> = summary.rows.iter().filter(|r| r.n == n).collect();
        let need = ((n as f64).ln() / 2f64.ln() + 1e-9).floor() as usize;
        let fewest = rows.iter().map(|r| r.protected).min().unwrap_or(0);
        let sealed = rows.iter().all(|r| r.protected_unvisited);
        a_ok &= fewest >= need && sealed;
        a_detail.push(format!(
            "n={n}: protected >= {fewest} (need {need}), all protected unvisited: {sealed}"
        ));
        let r: Vec<f64> = rows.iter().map(|r| r.unvisited as f64 / (n as f64).ln()).collect();
        ratios.push((n, r));
    }
    let all: Vec<f64> = ratios.iter().flat_map(|(_, r)| r.iter().copied()).collect();
    let max = all.iter().copied().fold(0.0, f64::max);
    let overall = all.iter().sum::<f64>() / all.len() as f64;
    let means: Vec<(usize, f64)> = ratios
        .iter()
        .map(|(n, r)| (*n, r.iter().sum::<f64>() / r.len() as f64))
        .collect();
    let stable = means.iter().all(|&(_, m)| (m - overall).abs() <= T2_STABILITY * overall);
    let b_detail = format!(
        "max unvisited/ln n {max:.3} (fixture {T2_RATIO_FIXTURE}); per-n means {}; overall {overall:.3} ± {:.0}%",
        means
            .iter()
            .map(|(n, m)| format!("{n}:{m:.3}"))
            .collect::<Vec<_>>()
            .join(" "),
        T2_STABILITY * 100.0
    );
    let parts = vec![
        part("a", a_ok, a_detail.join("; ")),
        part("b", max <= T2_RATIO_FIXTURE && stable, b_detail),
    ];
    Ok(Check::new("T2-scaling", 300.0, started, parts))
}

/// Greedy and 100 random adversaries at β = 1, 2, 3.
pub fn box_lemma(seed: u64) -> Result<Check, HarnessError> {
    const N: usize = 100_000;
    const STEPS: u64 = 100_000;
    let started = Instant::now();
    let mut parts = Vec::new();
    for beta in 1..=3u32 {
        let policies: Vec<BoxPolicy> = std::iter::once(BoxPolicy::Greedy)
            .chain((0..100).map(|i| BoxPolicy::Random { seed: seed + i }))
            .collect();
        let runs = policies
            .par_iter()
            .map(|p| {
                run_box(N, beta, p, STEPS).map(|trace| (trace.violations(10).len(), trace.max_ratio(10), trace.turns()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let violations: usize = runs.iter().map(|r| r.0).sum();
        let worst = runs.iter().map(|r| r.1).fold(0.0, f64::max);
        let shortest = runs.iter().map(|r| r.2).min().unwrap_or(0);
        let a_beta = crate::strategy::StrategyParams::new(beta).a_beta;
        parts.push(part(
            format!("beta={beta}"),
            violations == 0,
            format!(
                "{} runs, {violations} violations, max tail/ln t {worst:.3} vs A_beta {a_beta:.3}, shortest run {shortest} turns",
                runs.len()
            ),
        ));
    }
    Ok(Check::new("Box-lemma", 120.0, started, parts))
}

/// Random walk against the dense-graph protection strategy on G(n, 0.9).
pub fn rw_trend(seed: u64) -> Result<Check, HarnessError> {
    let started = Instant::now();
    let sizes = [100usize, 200, 400];
    let mut parts = Vec::new();

    let mut dense_ok = true;
    let mut weakest = Vec::new();
    for n in sizes {
        let worst = (0..50u64)
            .into_par_iter()
            .map(|t| Graph::random_dense(n, 0.9, seed.wrapping_add(t)).map(|g| g.min_codegree()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .min()
            .unwrap_or(0);
        dense_ok &= 2 * worst >= n;
        weakest.push(format!("n={n}: {worst}"));
    }
    parts.push(part("min codegree >= n/2", dense_ok, weakest.join(", ")));

    let mut spec = ExperimentSpec::new(
        GraphSpec::Gnp {
            n: 100,
            p: 0.9,
            seed,
        },
        Variant::RandomWalk,
        1,
        "random-walker",
        "randomwalk-protect-breaker",
    );
    spec.trials = 50;
    spec.seed = seed;
    spec.sweep = sizes.to_vec();
    spec.resample_graph = true;
    spec.move_cap = Some(400 * 400);
    let summary = super::run_experiment(&spec)?;
    let medians: Vec<(usize, f64)> = summary.aggregates.iter().map(|a| (a.n, a.median_unvisited)).collect();
    let shown = medians
        .iter()
        .map(|(n, m)| format!("{n}:{m}"))
        .collect::<Vec<_>>()
        .join(" ");
    let cap_hits: usize = summary.aggregates.iter().map(|a| a.cap_hits).sum();
    parts.push(part(
        "median >= 1",
        medians.iter().all(|&(_, m)| m >= 1.0),
        format!("medians {shown}, {cap_hits} cap hits"),
    ));
    parts.push(part(
        "non-decreasing",
        medians.windows(2).all(|w| w[0].1 <= w[1].1),
        format!("medians {shown}"),
    ));
    let scaled: Vec<f64> = medians.iter().map(|&(n, m)| m / (n as f64).ln()).collect();
    let hi = scaled.iter().copied().fold(f64::MIN, f64::max);
    let lo = scaled.iter().copied().fold(f64::MAX, f64::min);
    parts.push(part(
        "median/ln n band",
        lo > 0.0 && hi / lo <= RW_BAND,
        format!(
            "{} (spread {:.2}, allowed {RW_BAND})",
            scaled.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>().join(" "),
            hi / lo.max(f64::MIN_POSITIVE)
        ),
    ));
    Ok(Check::new("RW-trend", 600.0, started, parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipe_names_round_trip() {
        for r in Recipe::ALL {
            assert_eq!(r.to_string().parse::<Recipe>().unwrap(), r);
        }
        assert!("t5".parse::<Recipe>().is_err());
    }

    #[test]
    fn invariant_flags_a_stray_edge() {
        let config = complete_config(6, Variant::Path, 1, Role::Walker).unwrap();
        let mut s = GameState::initial(config, 0).unwrap();
        s.apply(&Move::Walker(1)).unwrap();
        s.apply(&Move::Breaker(vec![crate::graph::Edge::new(3, 4)])).unwrap();
        s.apply(&Move::Walker(2)).unwrap();
        assert!(invariant_one(&s, None).is_err());
        assert!(invariant_one(&s, Some(1)).is_ok());
    }
}
