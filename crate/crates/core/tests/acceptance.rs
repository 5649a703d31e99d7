//! One PASS/FAIL line per acceptance criterion.
//!
//! Two criteria fail on the reference strategies and are listed in
//! `EXPECTED_FAILURES` with the parts that fail; this target exits non-zero
//! if any other part fails, if an expected failure starts passing, or if a
//! check overruns its time limit.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use wb_core::harness::verify::{
    box_lemma, rw_trend, t1_exact, t1_games, t1_soundness, t2_scaling, t3_exact, t4_bounds, Check, Part,
};

const SEED: u64 = 1;
const ENGINE_GAMES: u64 = 10_000;

/// (criterion, failing part): protect-breaker seals off one vertex fewer
/// than floor(log2 n), and the block-protect count runs out of unvisited
/// vertices at n - 1 = β².
const EXPECTED_FAILURES: [(&str, &str); 2] = [("T2-scaling", "a"), ("T3-exact", "(26,5) value 17")];

fn engine_invariants() -> Check {
    let started = Instant::now();
    let failures: Vec<(u64, String)> = (0..ENGINE_GAMES)
        .into_par_iter()
        .filter_map(|seed| {
            let result = common::random_game(seed);
            if let Err(e) = common::audit_game(&result) {
                return Some((seed, e));
            }
            if common::random_game(seed) != result {
                return Some((seed, "same seed gave a different game".into()));
            }
            None
        })
        .collect();
    let detail = format!(
        "{ENGINE_GAMES} games, {} failures{}",
        failures.len(),
        failures
            .first()
            .map(|(s, e)| format!(" (seed {s}: {e})"))
            .unwrap_or_default()
    );
    let parts = vec![Part {
        name: "randomized games".into(),
        passed: failures.is_empty(),
        detail,
    }];
    let elapsed_secs = started.elapsed().as_secs_f64();
    Check {
        id: "Engine-invariants".into(),
        passed: failures.is_empty() && elapsed_secs <= 300.0,
        parts,
        elapsed_secs,
        limit_secs: 300.0,
    }
}

fn main() -> ExitCode {
    let (smoke, invariant) = t1_games(SEED).expect("T1 games run");
    let checks = vec![
        t1_exact().expect("T1 solve runs"),
        t1_soundness().expect("T1 best responses run"),
        smoke,
        t3_exact(SEED).expect("T3 runs"),
        t4_bounds(SEED).expect("T4 runs"),
        t2_scaling(SEED).expect("T2 runs"),
        box_lemma(SEED).expect("box runs"),
        rw_trend(SEED).expect("random-walk sweep runs"),
        engine_invariants(),
        invariant,
    ];
    let mut unexpected = Vec::new();
    for check in &checks {
        println!("{check}");
        let expected: Vec<&str> = EXPECTED_FAILURES
            .iter()
            .filter(|(id, _)| *id == check.id)
            .map(|(_, part)| *part)
            .collect();
        if check.failed_parts() != expected {
            unexpected.push(format!("{}: failing parts {:?}, expected {:?}", check.id, check.failed_parts(), expected));
        }
        if !check.within_limit() {
            unexpected.push(format!("{}: over its time limit", check.id));
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            eprintln!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
