//! Batch experiments and the verification recipes.
//!
//! Trial `i` of an experiment uses seed `seed + i` for its game (and for its
//! graph when graphs are resampled), so any subset of trials can be re-run
//! on its own.

pub mod verify;

use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Game, GameConfig, GameError, GameResult, Role, TerminalReason, Variant};
use crate::graph::{Graph, GraphError, GraphSpec, Vertex};
use crate::strategy::{build_strategy, strategy_role, StrategyError, TargetOutcome};

pub use verify::{verify, Check, Recipe, VerifyReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolverError),
    #[error(transparent)]
    BoxRun(#[from] crate::boxgame::RunError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything needed to reproduce an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub graph: GraphSpec,
    pub variant: Variant,
    pub bias: u32,
    pub walker: String,
    pub breaker: String,
    pub first_mover: Role,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub start: Vertex,
    /// Defaults to 10·n.
    #[serde(default)]
    pub move_cap: Option<usize>,
    /// Sizes to sweep over; each replaces the graph's size parameter
    /// (the dimension for hypercubes).
    #[serde(default)]
    pub sweep: Vec<usize>,
    /// For random graphs: draw a fresh graph per trial with seed
    /// `graph seed + trial`.
    #[serde(default)]
    pub resample_graph: bool,
    /// Draw the start vertex uniformly from the trial seed instead of
    /// using `start`.
    #[serde(default)]
    pub random_start: bool,
}

impl ExperimentSpec {
    pub fn new(graph: GraphSpec, variant: Variant, bias: u32, walker: &str, breaker: &str) -> ExperimentSpec {
        ExperimentSpec {
            graph,
            variant,
            bias,
            walker: walker.to_string(),
            breaker: breaker.to_string(),
            first_mover: Role::Breaker,
            trials: 1,
            seed: 0,
            start: 0,
            move_cap: None,
            sweep: Vec::new(),
            resample_graph: false,
            random_start: false,
        }
    }

    /// The graph spec for one sweep point.
    pub fn graph_at(&self, size: Option<usize>) -> Result<GraphSpec, HarnessError> {
        let Some(size) = size else {
            return Ok(self.graph.clone());
        };
        match &self.graph {
            GraphSpec::Complete { .. } => Ok(GraphSpec::Complete { n: size }),
            GraphSpec::Hypercube { .. } => Ok(GraphSpec::Hypercube { dim: size }),
            GraphSpec::Gnp { p, seed, .. } => Ok(GraphSpec::Gnp {
                n: size,
                p: *p,
                seed: *seed,
            }),
            other => Err(HarnessError::InvalidSpec(format!("cannot sweep the size of {other}"))),
        }
    }

    fn points(&self) -> Vec<Option<usize>> {
        if self.sweep.is_empty() {
            vec![None]
        } else {
            self.sweep.iter().copied().map(Some).collect()
        }
    }

    fn config_for(&self, graph: Arc<Graph>, trial: usize) -> GameConfig {
        let cap = self.move_cap.unwrap_or(10 * graph.vertex_count());
        GameConfig::new(graph, self.variant, self.bias)
            .with_first_mover(self.first_mover)
            .with_move_cap(cap)
            .with_seed(self.seed.wrapping_add(trial as u64))
    }

    fn trial_graph(&self, base: &GraphSpec, built: &Arc<Graph>, trial: usize) -> Result<Arc<Graph>, HarnessError> {
        match base {
            GraphSpec::Gnp { n, p, seed } if self.resample_graph => Ok(Arc::new(Graph::random_dense(
                *n,
                *p,
                seed.wrapping_add(trial as u64),
            )?)),
            _ => Ok(Arc::clone(built)),
        }
    }

    /// Rejects specs that cannot run, before any game is played.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::InvalidSpec("at least one trial is required".into()));
        }
        for (name, role) in [(&self.walker, Role::Walker), (&self.breaker, Role::Breaker)] {
            match strategy_role(name) {
                None => return Err(StrategyError::Unknown(name.clone()).into()),
                Some(r) if r != role => {
                    return Err(HarnessError::InvalidSpec(format!("{name} does not play {role}")))
                }
                Some(_) => {}
            }
        }
        for point in self.points() {
            let graph = Arc::new(self.graph_at(point)?.build()?);
            if !graph.contains_vertex(self.start) {
                return Err(GameError::InvalidStart(self.start).into());
            }
            let config = self.config_for(graph, 0);
            config.validate()?;
            build_strategy(&self.walker, &config)?;
            build_strategy(&self.breaker, &config)?;
        }
        Ok(())
    }
}

/// One game of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    /// Vertex count of the graph played on.
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub visited: usize,
    pub unvisited: usize,
    pub terminal_reason: TerminalReason,
    pub walker_moves: usize,
    pub breaker_moves: usize,
    /// Vertices the Breaker strategy reports as sealed off.
    pub protected: usize,
    /// Whether every reported protected vertex ended unvisited.
    pub protected_unvisited: bool,
    pub walker_fallback: bool,
}

/// One protection attempt, recorded when the target was chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtectionRow {
    pub n: usize,
    pub trial: usize,
    pub target: Vertex,
    pub started: usize,
    pub finished: Option<usize>,
    pub outcome: TargetOutcome,
    /// Unvisited, unprotected vertices when the target was chosen.
    pub open_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub n: usize,
    pub trials: usize,
    pub min_unvisited: usize,
    pub max_unvisited: usize,
    pub median_unvisited: f64,
    pub mean_unvisited: f64,
    pub min_visited: usize,
    pub max_visited: usize,
    pub cap_hits: usize,
}

impl Aggregate {
    pub fn from_rows(n: usize, rows: &[&TrialRow]) -> Aggregate {
        let mut unvisited: Vec<usize> = rows.iter().map(|r| r.unvisited).collect();
        unvisited.sort_unstable();
        Aggregate {
            n,
            trials: rows.len(),
            min_unvisited: unvisited.first().copied().unwrap_or(0),
            max_unvisited: unvisited.last().copied().unwrap_or(0),
            median_unvisited: median(&unvisited),
            mean_unvisited: unvisited.iter().sum::<usize>() as f64 / rows.len().max(1) as f64,
            min_visited: rows.iter().map(|r| r.visited).min().unwrap_or(0),
            max_visited: rows.iter().map(|r| r.visited).max().unwrap_or(0),
            cap_hits: rows
                .iter()
                .filter(|r| r.terminal_reason == TerminalReason::MoveCap)
                .count(),
        }
    }
}

/// Median of sorted values; the mean of the middle two for even lengths.
pub fn median(sorted: &[usize]) -> f64 {
    match sorted.len() {
        0 => 0.0,
        k if k % 2 == 1 => sorted[k / 2] as f64,
        k => (sorted[k / 2 - 1] + sorted[k / 2]) as f64 / 2.0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub spec: ExperimentSpec,
    pub rows: Vec<TrialRow>,
    pub aggregates: Vec<Aggregate>,
    pub protection: Vec<ProtectionRow>,
}

impl ExperimentSummary {
    /// Per-trial rows as CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_aggregates_csv<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        for a in &self.aggregates {
            w.serialize(a)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `x,y` pairs of size against median unvisited count.
    pub fn write_plot_data<W: Write>(&self, out: W) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y"])?;
        for a in &self.aggregates {
            w.write_record([a.n.to_string(), a.median_unvisited.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Plays one trial and returns its full result.
pub fn play_trial(spec: &ExperimentSpec, size: Option<usize>, trial: usize) -> Result<GameResult, HarnessError> {
    let base = spec.graph_at(size)?;
    let built = Arc::new(base.build()?);
    play_trial_on(spec, &base, &built, trial)
}

fn play_trial_on(
    spec: &ExperimentSpec,
    base: &GraphSpec,
    built: &Arc<Graph>,
    trial: usize,
) -> Result<GameResult, HarnessError> {
    let graph = spec.trial_graph(base, built, trial)?;
    let config = spec.config_for(graph, trial);
    let walker = build_strategy(&spec.walker, &config)?;
    let breaker = build_strategy(&spec.breaker, &config)?;
    let start = if spec.random_start {
        let n = config.graph.vertex_count();
        ChaCha8Rng::seed_from_u64(config.seed).gen_range(0..n) as Vertex
    } else {
        spec.start
    };
    Ok(Game::new(config, walker, breaker, start)?.run()?)
}

fn summarize(n: usize, trial: usize, result: &GameResult) -> (TrialRow, Vec<ProtectionRow>) {
    let breaker = result.breaker.clone().unwrap_or_default();
    let protected_unvisited = breaker
        .protected
        .iter()
        .all(|v| result.unvisited.contains(v));
    let row = TrialRow {
        n,
        trial,
        seed: result.config.seed,
        visited: result.visited_count,
        unvisited: result.unvisited_count(),
        terminal_reason: result.terminal_reason,
        walker_moves: result.walker_moves,
        breaker_moves: result.breaker_moves,
        protected: breaker.protected.len(),
        protected_unvisited,
        walker_fallback: result.walker.as_ref().is_some_and(|w| w.fallback.is_some()),
    };
    let protection = breaker
        .targets
        .iter()
        .map(|t| ProtectionRow {
            n,
            trial,
            target: t.target,
            started: t.started,
            finished: t.finished,
            outcome: t.outcome,
            open_vertices: t.open_vertices,
        })
        .collect();
    (row, protection)
}

/// Runs every trial of every sweep point.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentSummary, HarnessError> {
    spec.validate()?;
    let mut rows = Vec::new();
    let mut protection = Vec::new();
    let mut aggregates = Vec::new();
    for point in spec.points() {
        let base = spec.graph_at(point)?;
        let built = Arc::new(base.build()?);
        let n = built.vertex_count();
        let results = (0..spec.trials)
            .into_par_iter()
            .map(|trial| play_trial_on(spec, &base, &built, trial).map(|r| summarize(n, trial, &r)))
            .collect::<Result<Vec<_>, _>>()?;
        let start = rows.len();
        for (row, prot) in results {
            rows.push(row);
            protection.extend(prot);
        }
        let point_rows: Vec<&TrialRow> = rows[start..].iter().collect();
        aggregates.push(Aggregate::from_rows(n, &point_rows));
    }
    Ok(ExperimentSummary {
        spec: spec.clone(),
        rows,
        aggregates,
        protection,
    })
}
