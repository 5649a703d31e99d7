use std::fs::File;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use wb_core::boxgame::{run_box, BoxPolicy};
use wb_core::graph::{GraphSpec, Vertex};
use wb_core::harness::{run_experiment, verify, ExperimentSpec, Recipe};
use wb_core::solver::{best_response_value_with, solve_optimal_with, SolveOptions};
use wb_core::strategy::build_strategy;
use wb_core::{play_game, GameConfig, Role, Variant};

#[derive(Parser)]
#[command(name = "wb", version, about = "Walker-Breaker games: play, simulate, solve and verify")]
struct Cli {
    /// Base seed; trial i uses seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Emit an x,y series (size against median unvisited) instead of rows.
    #[arg(long, global = true)]
    plot_data: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and print its result.
    Play {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        walker: String,
        #[arg(long)]
        breaker: String,
    },
    /// Run many seeded games.
    Sim(SimArgs),
    /// Exact minimax value of a small game.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run verification recipes, or a best response against one strategy.
    Verify(VerifyArgs),
    /// Play the box game against an adversary policy.
    Box {
        #[arg(long)]
        beta: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: u64,
        /// greedy, random:SEED or idle.
        #[arg(long, default_value = "greedy")]
        policy: BoxPolicy,
    },
    /// Serve the session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Snapshot sessions to this directory.
        #[arg(long)]
        persist: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GameArgs {
    /// complete:N, hypercube:D, gnp:N:P:SEED or file:PATH.
    #[arg(long)]
    graph: GraphSpec,
    #[arg(long, default_value = "path", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value_t = 1)]
    bias: u32,
    /// Who moves first.
    #[arg(long, default_value = "walker", value_parser = parse_role)]
    first: Role,
    #[arg(long, default_value_t = 0)]
    start: Vertex,
    /// Walker moves before the game is stopped; defaults to 10n.
    #[arg(long)]
    move_cap: Option<usize>,
}

impl GameArgs {
    fn config(&self, seed: u64) -> Result<GameConfig> {
        let graph = Arc::new(self.graph.build()?);
        let cap = self.move_cap.unwrap_or(10 * graph.vertex_count());
        let config = GameConfig::new(graph, self.variant, self.bias)
            .with_first_mover(self.first)
            .with_move_cap(cap)
            .with_seed(seed);
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Skip the complete-graph symmetry reduction.
    #[arg(long)]
    no_canonical: bool,
    /// Search past the size guard.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    parallel: bool,
}

impl SearchArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            canonical: !self.no_canonical,
            force: self.force,
            parallel: self.parallel,
        }
    }
}

#[derive(Args)]
struct SimArgs {
    /// An ExperimentSpec as JSON; the other flags are then ignored.
    #[arg(long, conflicts_with_all = ["graph", "walker", "breaker"])]
    spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    graph: Option<GraphSpec>,
    #[arg(long, default_value = "path", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value_t = 1)]
    bias: u32,
    #[arg(long, required_unless_present = "spec")]
    walker: Option<String>,
    #[arg(long, required_unless_present = "spec")]
    breaker: Option<String>,
    #[arg(long, default_value = "breaker", value_parser = parse_role)]
    first: Role,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    start: Vertex,
    /// Draw each trial's start vertex from its seed.
    #[arg(long)]
    random_start: bool,
    #[arg(long)]
    move_cap: Option<usize>,
    /// Sizes to sweep, e.g. 100,200,400.
    #[arg(long, value_delimiter = ',')]
    sweep: Vec<usize>,
    /// Draw a fresh random graph per trial.
    #[arg(long)]
    resample: bool,
    /// Print per-size aggregates instead of per-trial rows.
    #[arg(long)]
    aggregates: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// t1, t2, t3, t4, box, rw; all when empty.
    recipes: Vec<String>,
    /// Strategy to hold fixed for a best-response search.
    #[arg(long, requires_all = ["free", "graph"], conflicts_with = "recipes")]
    fixed: Option<String>,
    /// The side that searches.
    #[arg(long, value_parser = parse_role)]
    free: Option<Role>,
    #[arg(long)]
    graph: Option<GraphSpec>,
    #[arg(long, default_value = "path", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value_t = 1)]
    bias: u32,
    #[arg(long, default_value = "walker", value_parser = parse_role)]
    first: Role,
    #[arg(long, default_value_t = 0)]
    start: Vertex,
    #[arg(long)]
    move_cap: Option<usize>,
    /// Fail unless the value is at least this.
    #[arg(long)]
    at_least: Option<usize>,
    /// Fail unless the value is at most this.
    #[arg(long)]
    at_most: Option<usize>,
    #[command(flatten)]
    search: SearchArgs,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

fn parse_role(s: &str) -> Result<Role, String> {
    s.parse()
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every requested check passed.
fn run(cli: Cli) -> Result<bool> {
    let mut out = output(&cli.out)?;
    match cli.command {
        Command::Play { game, walker, breaker } => {
            let config = game.config(cli.seed)?;
            let w = build_strategy(&walker, &config)?;
            let b = build_strategy(&breaker, &config)?;
            let result = play_game(config, w, b, game.start)?;
            if cli.format == Some(Format::Csv) {
                writeln!(out, "visited,unvisited,terminal_reason,walker_moves,breaker_moves")?;
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    result.visited_count,
                    result.unvisited_count(),
                    result.terminal_reason,
                    result.walker_moves,
                    result.breaker_moves
                )?;
            } else {
                writeln!(out, "{}", result.to_json())?;
            }
            Ok(true)
        }
        Command::Sim(args) => {
            let spec = sim_spec(&args, cli.seed)?;
            let summary = run_experiment(&spec)?;
            if cli.plot_data {
                summary.write_plot_data(out)?;
            } else if cli.format == Some(Format::Json) {
                writeln!(out, "{}", summary.to_json()?)?;
            } else if args.aggregates {
                summary.write_aggregates_csv(out)?;
            } else {
                summary.write_csv(out)?;
            }
            Ok(true)
        }
        Command::Solve { game, search } => {
            let config = game.config(cli.seed)?;
            let report = solve_optimal_with(&config, game.start, &search.options())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(true)
        }
        Command::Verify(args) => run_verify(args, cli.seed, cli.format, &mut out),
        Command::Box { beta, n, steps, policy } => {
            let trace = run_box(n, beta, &policy, steps)?;
            let violations = trace.violations(10);
            if cli.format == Some(Format::Json) {
                writeln!(out, "{}", serde_json::to_string(&trace)?)?;
            } else {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["t", "max_tail", "a_beta_ln_t"])?;
                for (t, v, bound) in trace.rows() {
                    w.write_record([t.to_string(), v.to_string(), format!("{bound:.6}")])?;
                }
                w.flush()?;
            }
            eprintln!(
                "{} turns, max tail/ln t {:.3} (A_beta {:.3}), {} violations for t >= 10",
                trace.turns(),
                trace.max_ratio(10),
                trace.a_beta,
                violations.len()
            );
            Ok(violations.is_empty())
        }
        Command::Serve { port, host, persist } => {
            drop(out);
            tracing_subscriber::fmt().with_writer(io::stderr).init();
            let addr: SocketAddr = format!("{host}:{port}").parse().context("bad host or port")?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(wb_service::serve(addr, persist.as_deref()))?;
            Ok(true)
        }
    }
}

fn sim_spec(args: &SimArgs, seed: u64) -> Result<ExperimentSpec> {
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        return Ok(serde_json::from_str(&text)?);
    }
    let (Some(graph), Some(walker), Some(breaker)) = (&args.graph, &args.walker, &args.breaker) else {
        bail!("--graph, --walker and --breaker are required without --spec");
    };
    let mut spec = ExperimentSpec::new(graph.clone(), args.variant, args.bias, walker, breaker);
    spec.first_mover = args.first;
    spec.trials = args.trials;
    spec.seed = seed;
    spec.start = args.start;
    spec.random_start = args.random_start;
    spec.move_cap = args.move_cap;
    spec.sweep = args.sweep.clone();
    spec.resample_graph = args.resample;
    Ok(spec)
}

fn run_verify(args: VerifyArgs, seed: u64, format: Option<Format>, out: &mut dyn Write) -> Result<bool> {
    if let Some(fixed) = &args.fixed {
        let (Some(free), Some(graph)) = (args.free, &args.graph) else {
            bail!("--fixed needs --free and --graph");
        };
        let game = GameArgs {
            graph: graph.clone(),
            variant: args.variant,
            bias: args.bias,
            first: args.first,
            start: args.start,
            move_cap: args.move_cap,
        };
        let config = game.config(seed)?;
        let strategy = build_strategy(fixed, &config)?;
        let report = best_response_value_with(&config, strategy.as_ref(), free, args.start, &args.search.options())?;
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        let ok = args.at_least.is_none_or(|v| report.value >= v) && args.at_most.is_none_or(|v| report.value <= v);
        return Ok(ok);
    }
    let recipes: Vec<Recipe> = if args.recipes.is_empty() {
        Recipe::ALL.to_vec()
    } else {
        args.recipes.iter().map(|r| r.parse()).collect::<Result<_, _>>()?
    };
    let mut all = true;
    let mut reports = Vec::new();
    for recipe in recipes {
        let report = verify(recipe, seed)?;
        all &= report.passed();
        if format != Some(Format::Json) {
            for check in &report.checks {
                writeln!(out, "{check}")?;
            }
        }
        reports.push(report);
    }
    if format == Some(Format::Json) {
        writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?;
    }
    Ok(all)
}
