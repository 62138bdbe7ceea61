//! Perfect-play search for coalition winning strategies.
//!
//! A coalition wins a line of play when one of its members makes the final
//! move. Non-members are treated as a single adversary that coordinates
//! freely, so the value of a position is an OR over moves when a member is to
//! move and an AND over moves otherwise. Moving into a terminal state wins
//! for the mover's side.
//!
//! Positions are memoized on `(state, turn mod p)`: the same multiset can be
//! reached after different numbers of moves, so the mover is not a function
//! of the state alone.

mod patterns;
mod reach;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::engine::{GameState, Move};
use crate::error::{Error, Result};
use crate::fibzeck::validate_n;
use crate::seating::{Coalition, SeatingConfig};

pub use patterns::{detect_steal_pattern, detect_steal_pattern_k};
pub use reach::{reachability, ReachReport};

/// Default cap on memo entries.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// Environment variable overriding [`DEFAULT_STATE_CAP`].
pub const STATE_CAP_ENV: &str = "ZECK_STATE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of memoized positions (also bounds reachability).
    pub state_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl SolverConfig {
    /// Default config, with the cap taken from `ZECK_STATE_CAP` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(STATE_CAP_ENV) {
            Ok(v) => {
                let state_cap = v.trim().parse::<usize>().map_err(|_| {
                    Error::invalid(format!("{STATE_CAP_ENV} must be a positive integer, got {v:?}"))
                })?;
                if state_cap == 0 {
                    return Err(Error::invalid(format!("{STATE_CAP_ENV} must be positive")));
                }
                Ok(SolverConfig { state_cap })
            }
            Err(_) => Ok(SolverConfig::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Positions expanded by the search.
    pub states_visited: u64,
    pub memo_entries: u64,
    /// Deepest search stack, in moves from the queried position.
    pub max_depth: u64,
}

/// Policy key: a state and the turn index modulo `p`.
pub type PolicyKey = (GameState, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub win: bool,
    /// For every evaluated winning position where a coalition member moves:
    /// the first winning move in canonical order.
    pub policy: BTreeMap<PolicyKey, Move>,
    pub stats: SolveStats,
}

/// Suggested move at a position, with the position's value for the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hint {
    #[serde(rename = "best_move")]
    pub mv: Move,
    pub win: bool,
}

#[derive(Debug, Clone, Copy)]
enum Node {
    OnStack,
    Done { win: bool, best: Option<Move> },
}

struct Frame {
    state: GameState,
    turn_mod: usize,
    member: bool,
    moves: Vec<Move>,
    next: usize,
}

/// Memoized search for one `(seating, target)` pair. Reusable across queries
/// and game sizes.
pub struct Solver {
    seating: SeatingConfig,
    target: Coalition,
    config: SolverConfig,
    memo: HashMap<PolicyKey, Node>,
    stats: SolveStats,
}

impl Solver {
    pub fn new(seating: SeatingConfig, target: Coalition, config: SolverConfig) -> Result<Self> {
        if let Some(bad) = target.members().find(|&m| m > seating.players()) {
            return Err(Error::invalid(format!(
                "coalition member {bad} is out of range 1..={}",
                seating.players()
            )));
        }
        if target.is_empty() {
            return Err(Error::invalid("coalition must not be empty"));
        }
        Ok(Solver {
            seating,
            target,
            config,
            memo: HashMap::new(),
            stats: SolveStats::default(),
        })
    }

    pub fn seating(&self) -> &SeatingConfig {
        &self.seating
    }

    pub fn target(&self) -> &Coalition {
        &self.target
    }

    pub fn stats(&self) -> SolveStats {
        SolveStats {
            memo_entries: self.memo.len() as u64,
            ..self.stats
        }
    }

    fn is_member(&self, turn_mod: usize) -> bool {
        self.target.contains(self.seating.player_to_move(turn_mod))
    }

    /// Whether the target can force a member to make the final move from
    /// `state` with `turn` moves already played. A terminal `state` is a loss:
    /// nobody gets to move.
    pub fn evaluate(&mut self, state: &GameState, turn: usize) -> Result<bool> {
        let p = self.seating.players();
        let root_mod = turn % p;
        if state.is_terminal() {
            return Ok(false);
        }
        if let Some(Node::Done { win, .. }) = self.memo.get(&(state.clone(), root_mod)) {
            return Ok(*win);
        }

        let mut stack: Vec<Frame> = Vec::new();
        self.push(&mut stack, state.clone(), root_mod)?;
        // Value of the child reached by the top frame's current move.
        let mut pending: Option<bool> = None;

        loop {
            let frame = stack.last_mut().expect("search stack is never empty here");
            if let Some(child_win) = pending.take() {
                if child_win == frame.member {
                    let best = frame.moves[frame.next];
                    let win = frame.member;
                    if !self.finish(&mut stack, win, Some(best)) {
                        return Ok(win);
                    }
                    pending = Some(win);
                    continue;
                }
                frame.next += 1;
            }

            if frame.next == frame.moves.len() {
                // Every move went the other side's way.
                let win = !frame.member;
                if !self.finish(&mut stack, win, None) {
                    return Ok(win);
                }
                pending = Some(win);
                continue;
            }

            let m = frame.moves[frame.next];
            let mut child = frame.state.clone();
            child.apply_unchecked(m);
            if child.is_terminal() {
                pending = Some(frame.member);
                continue;
            }
            let child_mod = (frame.turn_mod + 1) % p;
            match self.memo.get(&(child.clone(), child_mod)) {
                Some(Node::Done { win, .. }) => pending = Some(*win),
                Some(Node::OnStack) => {
                    return Err(Error::Invariant(format!(
                        "cycle through state {child} (turn mod {child_mod})"
                    )))
                }
                None => self.push(&mut stack, child, child_mod)?,
            }
        }
    }

    fn push(&mut self, stack: &mut Vec<Frame>, state: GameState, turn_mod: usize) -> Result<()> {
        let key = (state.clone(), turn_mod);
        if self.memo.contains_key(&key) {
            return Err(Error::Invariant(format!(
                "position {state} (turn mod {turn_mod}) expanded twice"
            )));
        }
        if self.memo.len() >= self.config.state_cap {
            // Leave the memo without dangling on-stack marks.
            for f in stack.drain(..) {
                self.memo.remove(&(f.state, f.turn_mod));
            }
            return Err(Error::Capacity {
                cap: self.config.state_cap,
            });
        }
        self.memo.insert(key, Node::OnStack);
        self.stats.states_visited += 1;
        let member = self.is_member(turn_mod);
        let moves = state.legal_moves();
        stack.push(Frame {
            state,
            turn_mod,
            member,
            moves,
            next: 0,
        });
        self.stats.max_depth = self.stats.max_depth.max(stack.len() as u64);
        Ok(())
    }

    /// Pops the top frame and records its value. False once the stack is empty.
    fn finish(&mut self, stack: &mut Vec<Frame>, win: bool, best: Option<Move>) -> bool {
        let frame = stack.pop().expect("finish called on empty stack");
        self.memo
            .insert((frame.state, frame.turn_mod), Node::Done { win, best });
        !stack.is_empty()
    }

    /// The recommended move at a non-terminal position.
    ///
    /// A coalition member in a winning position gets the first winning move;
    /// a non-member facing a winning coalition gets the first move that keeps
    /// the coalition losing, if there is one. Otherwise the first legal move.
    pub fn best_move(&mut self, state: &GameState, turn: usize) -> Result<Hint> {
        let moves = state.legal_moves();
        let Some(&first) = moves.first() else {
            return Err(Error::NoMove);
        };
        let win = self.evaluate(state, turn)?;
        let turn_mod = turn % self.seating.players();
        let best = match self.memo.get(&(state.clone(), turn_mod)) {
            Some(Node::Done { best, .. }) => *best,
            _ => None,
        };
        Ok(Hint {
            mv: best.unwrap_or(first),
            win,
        })
    }

    /// Winning moves recorded for coalition members so far.
    pub fn policy(&self) -> BTreeMap<PolicyKey, Move> {
        self.memo
            .iter()
            .filter_map(|(key, node)| match node {
                Node::Done {
                    win: true,
                    best: Some(m),
                } if self.is_member(key.1) => Some((key.clone(), *m)),
                _ => None,
            })
            .collect()
    }
}

/// Solves the game of size `n` from its initial position using the default
/// resource cap.
pub fn solve(n: u64, seating: &SeatingConfig, target: &Coalition) -> Result<SolveOutcome> {
    solve_with(n, seating, target, SolverConfig::default())
}

pub fn solve_with(
    n: u64,
    seating: &SeatingConfig,
    target: &Coalition,
    config: SolverConfig,
) -> Result<SolveOutcome> {
    validate_n(n)?;
    let mut solver = Solver::new(seating.clone(), target.clone(), config)?;
    let win = solver.evaluate(&GameState::initial(n)?, 0)?;
    Ok(SolveOutcome {
        win,
        policy: solver.policy(),
        stats: solver.stats(),
    })
}

/// [`Solver::best_move`] with a fresh solver.
pub fn best_move(
    state: &GameState,
    turn: usize,
    seating: &SeatingConfig,
    target: &Coalition,
) -> Result<Hint> {
    Solver::new(seating.clone(), target.clone(), SolverConfig::default())?.best_move(state, turn)
}
