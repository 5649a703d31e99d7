mod common;

use proptest::prelude::*;
use wb_core::boxgame::{dominance_check, greedy_adversary, mimic_move, BoxState, RandomAdversary};
use wb_core::graph::Edge;
use wb_core::harness::verify::theorem1_invariant;
use wb_core::strategy::build_strategy;
use wb_core::{play_game, GameState, Move, Role, Variant};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_games_pass_the_audit(seed in any::<u64>()) {
        let result = common::random_game(seed);
        prop_assert_eq!(common::audit_game(&result), Ok(()));
        prop_assert_eq!(common::random_game(seed), result);
    }

    #[test]
    fn visited_and_unvisited_partition_the_vertices(seed in any::<u64>()) {
        let result = common::random_game(seed);
        let config = result.config.to_config().unwrap();
        let n = config.graph.vertex_count();
        let mut state = GameState::initial(config, result.start).unwrap();
        for entry in &result.trace {
            state.apply(&entry.mv).unwrap();
            let unvisited = state.unvisited();
            prop_assert_eq!(state.visited_count() + unvisited.len(), n);
            prop_assert!(unvisited.iter().all(|&v| !state.is_visited(v)));
            prop_assert_eq!(state.visit_order().len(), state.visited_count());
        }
    }

    #[test]
    fn theorem1_walker_keeps_breaker_edges_on_the_path(
        n in 5usize..40,
        seed in any::<u64>(),
        walker_first in any::<bool>(),
    ) {
        let first = if walker_first { Role::Walker } else { Role::Breaker };
        let c = common::complete(n, Variant::Path, 1, first).with_seed(seed);
        let w = build_strategy("theorem1-walker", &c).unwrap();
        let b = build_strategy("random-breaker", &c).unwrap();
        let result = play_game(c, w, b, 0).unwrap();
        prop_assert!(result.visited_count >= n - 2);
        prop_assert_eq!(theorem1_invariant(&result), Ok(()));
    }

    #[test]
    fn mimicked_moves_preserve_dominance(
        beta in 1u32..4,
        values in prop::collection::vec(0u64..20, 4..40),
        bumps in prop::collection::vec(0u64..5, 40),
        extra in 0usize..5,
        seed in any::<u64>(),
    ) {
        let e_values = values.clone();
        let mut b_values: Vec<u64> = values.iter().zip(&bumps).map(|(v, d)| v + d).collect();
        b_values.extend(std::iter::repeat_n(0, extra));
        let mut e = BoxState::from_values(e_values, beta);
        let mut b = BoxState::from_values(b_values, beta);
        prop_assume!(dominance_check(&e, &b));
        let mut adversary = RandomAdversary::new(seed);
        while e.active_count() > 0 {
            let mv = adversary.next_move(&e);
            let copy = mimic_move(&e, &mv, &b).unwrap();
            e.step(&mv).unwrap();
            b.step(&copy).unwrap();
            prop_assert!(dominance_check(&e, &b));
        }
    }

    #[test]
    fn adversary_moves_are_legal(beta in 1u32..4, n in 1usize..200, seed in any::<u64>()) {
        let mut s = BoxState::zeros(n, beta);
        let mut random = RandomAdversary::new(seed);
        let mut g = s.clone();
        while s.active_count() > 0 {
            let mv = random.next_move(&s);
            s.step(&mv).unwrap();
        }
        while g.active_count() > 0 {
            let mv = greedy_adversary(&g);
            g.step(&mv).unwrap();
        }
    }
}

#[test]
fn audit_rejects_a_doctored_trace() {
    let c = common::complete(6, Variant::Path, 1, Role::Walker);
    let w = build_strategy("greedy-walker", &c).unwrap();
    let b = build_strategy("null-breaker", &c).unwrap();
    let mut result = play_game(c, w, b, 0).unwrap();
    assert_eq!(common::audit_game(&result), Ok(()));

    let mut claimed_walker_edge = result.clone();
    let Move::Walker(first) = claimed_walker_edge.trace[0].mv else {
        panic!("Walker opens");
    };
    claimed_walker_edge.trace[1].mv = Move::Breaker(vec![Edge::new(0, first)]);
    assert!(common::audit_game(&claimed_walker_edge).is_err());

    result.trace.pop();
    assert!(common::audit_game(&result).is_err());
}

#[test]
fn oracle_agrees_on_a_blocked_walker() {
    let c = common::complete(4, Variant::Walk, 3, Role::Breaker);
    let mut s = GameState::initial(c, 0).unwrap();
    s.apply(&Move::Breaker(vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3)])).unwrap();
    assert_eq!(s.terminal(), common::naive_terminal(&s));
    assert_eq!(s.terminal(), Some(wb_core::TerminalReason::WalkerBlocked));
}
