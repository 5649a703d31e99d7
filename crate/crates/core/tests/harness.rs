use wb_core::graph::GraphSpec;
use wb_core::harness::{play_trial, run_experiment, verify, ExperimentSpec, HarnessError, Recipe};
use wb_core::{Role, Variant};

fn t3_spec() -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(
        GraphSpec::Complete { n: 10 },
        Variant::Walk,
        2,
        "dfs-walker",
        "block-protect-breaker",
    );
    spec.first_mover = Role::Walker;
    spec
}

#[test]
fn block_protect_recipe_on_k10() {
    let s = run_experiment(&t3_spec()).unwrap();
    assert_eq!(s.rows.len(), 1);
    assert_eq!(s.rows[0].visited, 7);
}

#[test]
fn zero_trials_are_rejected() {
    let mut spec = t3_spec();
    spec.trials = 0;
    assert!(matches!(run_experiment(&spec), Err(HarnessError::InvalidSpec(_))));
}

#[test]
fn mismatched_strategies_are_rejected_upfront() {
    let spec = ExperimentSpec::new(GraphSpec::Complete { n: 8 }, Variant::Path, 1, "lr-walker", "null-breaker");
    assert!(matches!(run_experiment(&spec), Err(HarnessError::Strategy(_))));
    let spec = ExperimentSpec::new(GraphSpec::Complete { n: 8 }, Variant::Path, 1, "null-breaker", "null-breaker");
    assert!(run_experiment(&spec).is_err());
}

#[test]
fn reruns_and_partial_runs_match() {
    let mut spec = ExperimentSpec::new(
        GraphSpec::Gnp { n: 40, p: 0.9, seed: 5 },
        Variant::RandomWalk,
        1,
        "random-walker",
        "randomwalk-protect-breaker",
    );
    spec.trials = 12;
    spec.seed = 100;
    spec.resample_graph = true;
    spec.sweep = vec![30, 40];
    let a = run_experiment(&spec).unwrap();
    let b = run_experiment(&spec).unwrap();
    assert_eq!(a, b);
    let mut csv_a = Vec::new();
    let mut csv_b = Vec::new();
    a.write_csv(&mut csv_a).unwrap();
    b.write_csv(&mut csv_b).unwrap();
    assert_eq!(csv_a, csv_b);

    let row = &a.rows[12 + 7];
    assert_eq!((row.n, row.trial, row.seed), (40, 7, 107));
    let single = play_trial(&spec, Some(40), 7).unwrap();
    assert_eq!(single.visited_count, row.visited);
    assert_eq!(single.terminal_reason, row.terminal_reason);
}

#[test]
fn aggregates_recompute_from_rows() {
    let mut spec = ExperimentSpec::new(GraphSpec::Complete { n: 20 }, Variant::Walk, 2, "random-walker", "random-breaker");
    spec.trials = 9;
    spec.sweep = vec![12, 20];
    let s = run_experiment(&spec).unwrap();
    for agg in &s.aggregates {
        let mut unv: Vec<usize> = s.rows.iter().filter(|r| r.n == agg.n).map(|r| r.unvisited).collect();
        unv.sort_unstable();
        assert_eq!(agg.trials, 9);
        assert_eq!(agg.median_unvisited, unv[4] as f64);
        assert_eq!(agg.min_unvisited, unv[0]);
        assert_eq!(agg.max_unvisited, unv[8]);
    }
    let mut plot = Vec::new();
    s.write_plot_data(&mut plot).unwrap();
    let text = String::from_utf8(plot).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("x,y"));
}

#[test]
fn rows_replay_through_the_engine() {
    let mut spec = ExperimentSpec::new(GraphSpec::Hypercube { dim: 5 }, Variant::Walk, 1, "dfs-walker", "mirror-breaker");
    spec.first_mover = Role::Walker;
    spec.random_start = true;
    spec.trials = 5;
    for t in 0..5 {
        let r = play_trial(&spec, None, t).unwrap();
        let end = r.replay().unwrap();
        assert_eq!(end.visited_count(), r.visited_count);
        assert_eq!(r.visited_count, 16);
    }
}

#[test]
fn summary_json_round_trips() {
    let s = run_experiment(&t3_spec()).unwrap();
    let json = s.to_json().unwrap();
    let back: wb_core::harness::ExperimentSummary = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
}

#[test]
fn t4_recipe_passes() {
    let report = verify(Recipe::T4, 3).unwrap();
    assert!(report.passed(), "{:?}", report.checks);
}

#[test]
fn t1_recipe_passes() {
    let report = verify(Recipe::T1, 3).unwrap();
    assert_eq!(report.checks.len(), 4);
    assert!(report.passed(), "{:?}", report.checks);
}
