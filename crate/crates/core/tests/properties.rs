mod common;

use proptest::prelude::*;

use common::{coalitions, fib_subsets_by_sum, naive_pattern, naive_wins, non_adjacent, tree_size};
use zeck_core::engine::{GameState, Move, Session};
use zeck_core::fibzeck::{fib_value, max_index, zeckendorf, Decomposition};
use zeck_core::solver::{detect_steal_pattern, detect_steal_pattern_k, reachability, solve, Solver, SolverConfig};
use zeck_core::theorems::{claim_catalog, verify, ClaimId};
use zeck_core::{Coalition, SeatingConfig};

fn counts_of(d: &Decomposition) -> Vec<u32> {
    let top = d.indices().last().map_or(0, |i| i.get() as usize);
    d.to_counts(top)
}

/// Random walk from the initial state, `steps` moves or until terminal.
fn random_walk(n: u64, choices: &[usize]) -> (GameState, Vec<Move>) {
    let mut state = GameState::initial(n).unwrap();
    let mut moves = Vec::new();
    for &c in choices {
        let legal = state.legal_moves();
        if legal.is_empty() {
            break;
        }
        let m = legal[c % legal.len()];
        state = state.apply(m).unwrap();
        moves.push(m);
    }
    (state, moves)
}

proptest! {
    #[test]
    fn zeckendorf_sums_and_is_valid(n in 1u64..=1_000_000_000) {
        let d = zeckendorf(n).unwrap();
        prop_assert_eq!(d.sum(), n);
        prop_assert!(non_adjacent(&d.indices().iter().map(|i| i.get()).collect::<Vec<_>>()));
        prop_assert!(fib_value(max_index(n).unwrap()).unwrap() <= n);
    }

    #[test]
    fn moves_conserve_total(n in 1u64..=40, choices in prop::collection::vec(0usize..16, 0..120)) {
        let mut state = GameState::initial(n).unwrap();
        for c in choices {
            let legal = state.legal_moves();
            if legal.is_empty() {
                prop_assert_eq!(state.counts(), &counts_of(&zeckendorf(n).unwrap())[..]);
                break;
            }
            let m = legal[c % legal.len()];
            let next = state.apply(m).unwrap();
            prop_assert_eq!(next.clone(), state.apply(m).unwrap());
            let total: u64 = next.counts().iter().enumerate()
                .map(|(i, &c)| c as u64 * fib_value(i as u32 + 1).unwrap()).sum();
            prop_assert_eq!(total, n);
            state = next;
        }
    }

    #[test]
    fn legal_moves_are_deterministic_and_sorted(n in 2u64..=40, choices in prop::collection::vec(0usize..16, 0..60)) {
        let (state, _) = random_walk(n, &choices);
        let a = state.legal_moves();
        prop_assert_eq!(&a, &state.clone().legal_moves());
        let rank = |m: &Move| match m {
            Move::CombineOnes => (0, 0),
            Move::CombineAdjacent(i) => (1, *i),
            Move::SplitTwos => (2, 0),
            Move::SplitPair(i) => (3, *i),
        };
        prop_assert!(a.windows(2).all(|w| rank(&w[0]) < rank(&w[1])));
        prop_assert_eq!(a.is_empty(), state.is_terminal());
    }

    #[test]
    fn session_replay_matches(n in 2u64..=30, p in 1usize..=5, choices in prop::collection::vec(0usize..16, 0..80)) {
        let (state, moves) = random_walk(n, &choices);
        let seating = SeatingConfig::singletons(p).unwrap();
        let session = Session::replay(n, seating, &moves).unwrap();
        prop_assert_eq!(session.state(), &state);
        prop_assert_eq!(session.turn(), moves.len());
        if let Some(w) = session.winner() {
            prop_assert_eq!(w.player, (moves.len() - 1) % p + 1);
        }
        let json = serde_json::to_string(&session).unwrap();
        let back: Session = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, session);
    }

    #[test]
    fn move_token_roundtrip(kind in 0u8..4, i in 1u32..200) {
        let m = match kind {
            0 => Move::CombineOnes,
            1 => Move::CombineAdjacent(i),
            2 => Move::SplitTwos,
            _ => Move::SplitPair(i + 2),
        };
        prop_assert_eq!(m.to_string().parse::<Move>().unwrap(), m);
    }

    #[test]
    fn pattern_detectors_match_window(seq in prop::collection::vec(0u8..4, 0..40), k in 1usize..4) {
        let moves: Vec<Move> = seq.iter().map(|&b| match b {
            0 | 1 => Move::CombineOnes,
            2 => Move::SplitTwos,
            _ => Move::CombineAdjacent(1),
        }).collect();
        prop_assert_eq!(detect_steal_pattern_k(&moves, k).unwrap(), naive_pattern(&moves, k));
        prop_assert_eq!(detect_steal_pattern(&moves), naive_pattern(&moves, 1));
    }
}

#[test]
fn zeckendorf_unique_against_subsets() {
    let by_sum = fib_subsets_by_sum(200);
    for n in 1..=200u64 {
        let valid: Vec<&Vec<u32>> = by_sum[&n].iter().filter(|s| non_adjacent(s)).collect();
        assert_eq!(valid.len(), 1, "n = {n}");
        let greedy: Vec<u32> = zeckendorf(n).unwrap().indices().iter().map(|i| i.get()).collect();
        assert_eq!(valid[0], &greedy);
    }
}

#[test]
fn solver_matches_naive_tree() {
    for p in 1..=4 {
        let seating = SeatingConfig::singletons(p).unwrap();
        for target in coalitions(p, true) {
            for n in 1..=10 {
                let expect = naive_wins(&GameState::initial(n).unwrap(), 0, &seating, &target);
                assert_eq!(solve(n, &seating, &target).unwrap().win, expect, "n={n} p={p} {target}");
            }
        }
    }
}

#[test]
fn witness_tree_is_tiny() {
    // n = 4 has 5 nodes in its unshared game tree.
    assert_eq!(tree_size(&GameState::initial(4).unwrap()), 5);
}

#[test]
fn terminal_states_are_zeckendorf() {
    for n in 1..=25u64 {
        let r = reachability(n, 1_000_000).unwrap();
        assert!(r.acyclic);
        let z = counts_of(&zeckendorf(n).unwrap());
        assert_eq!(r.terminal_states.len(), 1, "n = {n}");
        assert_eq!(r.terminal_states[0].counts(), &z[..]);
    }
}

#[test]
fn full_coalition_wins_iff_game_has_moves() {
    for p in 1..=4 {
        let seating = SeatingConfig::singletons(p).unwrap();
        let everyone = Coalition::new(1..=p, p).unwrap();
        for n in 1..=12 {
            assert_eq!(solve(n, &seating, &everyone).unwrap().win, n >= 2);
        }
    }
}

#[test]
fn single_player_always_moves_last() {
    // With p = 1 the only player makes every move.
    let seating = SeatingConfig::singletons(1).unwrap();
    let me = Coalition::singleton(1, 1).unwrap();
    for n in 2..=15 {
        assert!(solve(n, &seating, &me).unwrap().win);
    }
}

#[test]
fn best_move_agrees_with_value() {
    let seating = SeatingConfig::singletons(3).unwrap();
    for target in coalitions(3, false) {
        let mut solver = Solver::new(seating.clone(), target.clone(), SolverConfig::default()).unwrap();
        let start = GameState::initial(9).unwrap();
        for turn in 0..3 {
            let hint = solver.best_move(&start, turn).unwrap();
            let mover_in = target.contains(seating.player_to_move(turn));
            let child = start.apply(hint.mv).unwrap();
            let child_value = if child.is_terminal() {
                mover_in
            } else {
                naive_wins(&child, turn + 1, &seating, &target)
            };
            assert_eq!(hint.win, naive_wins(&start, turn, &seating, &target));
            if mover_in == hint.win {
                // winning member or resisting non-member: the move keeps the value
                assert_eq!(child_value, hint.win, "{target} turn {turn}");
            }
        }
    }
}

#[test]
fn verify_points_match_fresh_solves() {
    use rand::seq::IndexedRandom;
    let mut rng = rand::rng();
    for claim in claim_catalog() {
        let claim = if claim.id == ClaimId::TeamsK { claim.with_n_range(16, 20) } else { claim };
        let report = verify(&claim, SolverConfig::default()).unwrap();
        for r in report.points.choose_multiple(&mut rng, 10) {
            let seating = SeatingConfig::from_teams(r.p, &r.teams).unwrap();
            let fresh = solve(r.n, &seating, &r.coalition).unwrap();
            assert_eq!(fresh.win, r.observed, "{} {:?}", claim.id, r);
        }
    }
}
