//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use zeck_core::engine::{GameState, Move};
use zeck_core::fibzeck::fib_value;
use zeck_core::solver::PolicyKey;
use zeck_core::{Coalition, SeatingConfig};

/// Plain game-tree recursion, no memo: can the target force a member to
/// make the last move from `state` with `turn` moves played?
pub fn naive_wins(state: &GameState, turn: usize, seating: &SeatingConfig, target: &Coalition) -> bool {
    let member = target.contains(seating.player_to_move(turn));
    let moves = state.legal_moves();
    if moves.is_empty() {
        return false;
    }
    let child_value = |m: Move| {
        let child = state.apply(m).unwrap();
        if child.is_terminal() {
            member
        } else {
            naive_wins(&child, turn + 1, seating, target)
        }
    };
    if member {
        moves.into_iter().any(child_value)
    } else {
        moves.into_iter().all(child_value)
    }
}

/// Number of nodes in the full (unshared) game tree from `state`.
pub fn tree_size(state: &GameState) -> usize {
    1 + state
        .legal_moves()
        .into_iter()
        .map(|m| tree_size(&state.apply(m).unwrap()))
        .sum::<usize>()
}

/// For every target sum up to `limit`: all subsets of distinct Fibonacci
/// numbers (as sorted index lists) that sum to it.
pub fn fib_subsets_by_sum(limit: u64) -> BTreeMap<u64, Vec<Vec<u32>>> {
    let fibs: Vec<u64> = (1..).map(|i| fib_value(i).unwrap()).take_while(|&f| f <= limit).collect();
    let mut out: BTreeMap<u64, Vec<Vec<u32>>> = BTreeMap::new();
    for mask in 0u64..(1 << fibs.len()) {
        let mut sum = 0;
        let mut idx = Vec::new();
        for (i, f) in fibs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum += f;
                idx.push(i as u32 + 1);
            }
        }
        if sum >= 1 && sum <= limit {
            out.entry(sum).or_default().push(idx);
        }
    }
    out
}

pub fn non_adjacent(indices: &[u32]) -> bool {
    indices.windows(2).all(|w| w[1] - w[0] >= 2)
}

/// Sliding-window check for `k` c1, `k` c1, `k` s2 blocks.
pub fn naive_pattern(moves: &[Move], k: usize) -> Vec<usize> {
    let mut want = vec![Move::CombineOnes; 2 * k];
    want.extend(std::iter::repeat_n(Move::SplitTwos, k));
    if moves.len() < want.len() {
        return Vec::new();
    }
    (0..=moves.len() - want.len())
        .filter(|&j| moves[j..j + want.len()] == want[..])
        .collect()
}

/// Plays the policy against every possible opposition response. Returns
/// a description of the first line where a non-member moves last or the
/// policy has no entry.
pub fn check_policy(
    n: u64,
    seating: &SeatingConfig,
    target: &Coalition,
    policy: &BTreeMap<PolicyKey, Move>,
) -> Result<usize, String> {
    let mut seen = HashSet::new();
    let start = GameState::initial(n).unwrap();
    walk(&start, 0, seating, target, policy, &mut seen)?;
    Ok(seen.len())
}

fn walk(
    state: &GameState,
    turn: usize,
    seating: &SeatingConfig,
    target: &Coalition,
    policy: &BTreeMap<PolicyKey, Move>,
    seen: &mut HashSet<PolicyKey>,
) -> Result<(), String> {
    let key = (state.clone(), turn % seating.players());
    if !seen.insert(key.clone()) {
        return Ok(());
    }
    let mover = seating.player_to_move(turn);
    let moves = if target.contains(mover) {
        let m = *policy
            .get(&key)
            .ok_or_else(|| format!("no policy move at {state} turn {turn}"))?;
        if !state.legal_moves().contains(&m) {
            return Err(format!("policy move {m} illegal at {state}"));
        }
        vec![m]
    } else {
        state.legal_moves()
    };
    for m in moves {
        let child = state.apply(m).unwrap();
        if child.is_terminal() {
            if !target.contains(mover) {
                return Err(format!("player {mover} ends the game with {m} from {state}"));
            }
        } else {
            walk(&child, turn + 1, seating, target, policy, seen)?;
        }
    }
    Ok(())
}

/// Every non-empty subset of `1..=p`, optionally excluding the full set.
pub fn coalitions(p: usize, include_full: bool) -> Vec<Coalition> {
    let top = if include_full { 1 << p } else { (1 << p) - 1 };
    (1..top)
        .map(|mask: usize| Coalition::new((1..=p).filter(|i| mask & (1 << (i - 1)) != 0), p).unwrap())
        .collect()
}
