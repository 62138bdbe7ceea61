//! Exact engine and perfect-play coalition solver for the multiplayer
//! Zeckendorf game.
//!
//! The game starts from `n` copies of `F_1 = 1` (Fibonacci numbers are indexed
//! so that `F_1 = 1, F_2 = 2, F_3 = 3, ...`). Players take turns applying one of
//! four combine/split rules and whoever produces the Zeckendorf decomposition
//! of `n` wins. Players may be grouped into alliances; an alliance wins when
//! any of its members makes the final move.
//!
//! * [`fibzeck`]: Fibonacci values and Zeckendorf decompositions.
//! * [`engine`]: game states, moves, and turn-tracked sessions.
//! * [`seating`]: players, teams and coalitions.
//! * [`solver`]: memoized AND/OR search deciding whether a coalition can force
//!   the last move, plus reachability analysis and move-pattern detectors.
//! * [`theorems`]: parameter sweeps checking winning-strategy claims.

pub mod engine;
pub mod error;
pub mod fibzeck;
pub mod seating;
pub mod solver;
pub mod theorems;

pub use engine::{GameState, Move, Session, SessionStatus};
pub use error::{Error, Result};
pub use seating::{Coalition, SeatingConfig};
pub use solver::{solve, SolveOutcome, Solver, SolverConfig};
