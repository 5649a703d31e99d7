mod common;

use std::sync::Arc;

use common::complete;
use wb_core::graph::{hypercube_coordinate, Graph, GraphSpec};
use wb_core::strategy::{build_strategy, MirrorBreaker, StrategyError};
use wb_core::{play_game, Game, GameConfig, Move, Role, StrategyError as Reexported, Variant};

#[test]
fn mirror_breaker_keeps_walker_in_one_half() {
    for dim in 3..=7 {
        let g = Arc::new(Graph::hypercube(dim).unwrap());
        for seed in 0..20u64 {
            let c = GameConfig::new(Arc::clone(&g), Variant::Walk, 1)
                .with_first_mover(Role::Walker)
                .with_seed(seed);
            let walker = build_strategy("random-walker", &c).unwrap();
            let start = (seed as usize % g.vertex_count()) as u32;
            let mut game = Game::new(c, walker, Box::new(MirrorBreaker::new(dim)), start).unwrap();
            let mut cut = None;
            while let Some(mv) = game.step().unwrap() {
                let mv = mv.clone();
                let walk = game.state().walk();
                if cut.is_none() && matches!(mv, Move::Breaker(_)) {
                    // The first Breaker edge crosses the cut at Walker's vertex.
                    let Move::Breaker(edges) = &mv else { unreachable!() };
                    let e = edges[0];
                    let c = (0..dim)
                        .find(|&c| hypercube_coordinate(dim, e.lo(), c) != hypercube_coordinate(dim, e.hi(), c))
                        .unwrap();
                    cut = Some((c, hypercube_coordinate(dim, walk[0], c)));
                }
                if let Some((c, bit)) = cut {
                    assert!(walk.iter().all(|&v| hypercube_coordinate(dim, v, c) == bit));
                }
            }
            assert!(game.state().visited_count() <= 1 << (dim - 1));
        }
    }
}

#[test]
fn dfs_leaves_fewer_than_two_beta_on_complete_graphs() {
    for beta in 1..=4u32 {
        for n in [12usize, 20, 33] {
            let c = complete(n, Variant::Walk, beta, Role::Breaker).with_seed(u64::from(beta) * 100 + n as u64);
            for breaker in ["random-breaker", "protect-breaker", "null-breaker"] {
                let w = build_strategy("dfs-walker", &c).unwrap();
                let b = build_strategy(breaker, &c).unwrap();
                let r = play_game(c.clone(), w, b, 0).unwrap();
                assert!(r.unvisited_count() < 2 * beta as usize, "n={n} β={beta} vs {breaker}");
            }
        }
    }
}

#[test]
fn block_protect_meets_the_bound_where_the_count_works() {
    for (n, beta) in [(10usize, 2u32), (17, 2), (25, 2), (40, 3), (50, 4)] {
        for first in [Role::Walker, Role::Breaker] {
            let c = complete(n, Variant::Walk, beta, first);
            for walker in ["dfs-walker", "greedy-walker"] {
                let w = build_strategy(walker, &c).unwrap();
                let b = build_strategy("block-protect-breaker", &c).unwrap();
                let r = play_game(c.clone(), w, b, 0).unwrap();
                assert!(r.visited_count <= n - 2 * beta as usize + 1, "({n},{beta}) {first} {walker}: {}", r.visited_count);
            }
        }
    }
}

#[test]
fn block_protect_runs_short_at_n_minus_one_equal_to_beta_squared() {
    let c = complete(26, Variant::Walk, 5, Role::Walker);
    let w = build_strategy("dfs-walker", &c).unwrap();
    let b = build_strategy("block-protect-breaker", &c).unwrap();
    let r = play_game(c, w, b, 0).unwrap();
    assert_eq!(r.visited_count, 21);
}

#[test]
fn protect_breaker_seals_its_targets() {
    for n in [64usize, 128] {
        let c = complete(n, Variant::Path, 2, Role::Breaker);
        let w = build_strategy("lr-walker", &c).unwrap();
        let b = build_strategy("protect-breaker", &c).unwrap();
        let r = play_game(c, w, b, 3).unwrap();
        let report = r.breaker.clone().unwrap();
        assert!(!report.protected.is_empty());
        assert!(report.protected.iter().all(|v| r.unvisited.contains(v)));
        assert!(r.unvisited_count() >= report.protected.len());
    }
}

#[test]
fn lr_walker_visits_all_but_logarithmically_many() {
    for n in [100usize, 300] {
        let c = complete(n, Variant::Path, 2, Role::Breaker).with_seed(7);
        let w = build_strategy("lr-walker", &c).unwrap();
        let b = build_strategy("random-breaker", &c).unwrap();
        let r = play_game(c, w, b, 0).unwrap();
        assert!((r.unvisited_count() as f64) <= 3.0 * (n as f64).ln(), "n={n}: {}", r.unvisited_count());
    }
}

#[test]
fn registry_checks_preconditions() {
    let path1 = complete(8, Variant::Path, 1, Role::Breaker);
    let walk2 = complete(8, Variant::Walk, 2, Role::Breaker);
    let incompatible = |spec: &str, c: &GameConfig| {
        matches!(build_strategy(spec, c), Err(StrategyError::Incompatible { .. }))
    };
    assert!(incompatible("lr-walker", &path1));
    assert!(incompatible("theorem1-walker", &walk2));
    assert!(incompatible("dfs-walker", &path1));
    assert!(incompatible("mirror-breaker", &path1));
    assert!(incompatible("randomwalk-protect-breaker", &walk2));
    assert!(matches!(build_strategy("nope", &path1), Err(Reexported::Unknown(_))));
    assert!(matches!(
        build_strategy("random-walker:seed=x", &path1),
        Err(StrategyError::BadParameter { .. })
    ));
    assert!(matches!(
        build_strategy("random-walker:colour=red", &path1),
        Err(StrategyError::BadParameter { .. })
    ));
    let q = GameConfig::new(Arc::new(GraphSpec::Hypercube { dim: 4 }.build().unwrap()), Variant::Walk, 1);
    let m = build_strategy("mirror-breaker", &q).unwrap();
    assert_eq!(m.name(), "mirror-breaker");
    assert_eq!(m.role(), Role::Breaker);
}

#[test]
fn seeded_parameter_overrides_the_config_seed() {
    let c = complete(15, Variant::RandomWalk, 1, Role::Breaker).with_seed(1);
    let run = |w: &str| {
        let walker = build_strategy(w, &c).unwrap();
        let breaker = build_strategy("random-breaker:seed=4", &c).unwrap();
        play_game(c.clone(), walker, breaker, 0).unwrap().trace
    };
    assert_eq!(run("random-walker:seed=9"), run("random-walker:seed=9"));
    assert_ne!(run("random-walker:seed=9"), run("random-walker:seed=10"));
}
