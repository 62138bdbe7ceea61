//! Game states, the four move rules, and turn-tracked sessions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibzeck::{fib_value, is_zeckendorf, max_index, validate_n};
use crate::seating::SeatingConfig;

/// Multiset of Fibonacci parts, stored as counts. Position 0 holds the
/// multiplicity of `F_1`.
///
/// The counts vector always has `max_index(n) + 1` entries, so two states for
/// the same `n` are equal iff their counts are equal. The serialized form
/// trims trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    n: u64,
    counts: Vec<u32>,
}

fn capacity(n: u64) -> Result<usize> {
    Ok(max_index(n)? as usize + 1)
}

impl GameState {
    /// `n` copies of `F_1`.
    pub fn initial(n: u64) -> Result<Self> {
        let mut counts = vec![0; capacity(n)?];
        counts[0] = n as u32;
        Ok(GameState { n, counts })
    }

    /// Builds a state for game size `n`; the parts must sum to `n`.
    pub fn from_counts(n: u64, counts: &[u32]) -> Result<Self> {
        let cap = capacity(n)?;
        let used = counts.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1);
        if used > cap {
            return Err(Error::invalid(format!(
                "F_{used} is larger than n = {n}"
            )));
        }
        let mut total: u64 = 0;
        for (i, &c) in counts[..used].iter().enumerate() {
            total = total.saturating_add((c as u64).saturating_mul(fib_value(i as u32 + 1)?));
        }
        if total != n {
            return Err(Error::invalid(format!(
                "parts sum to {total}, expected n = {n}"
            )));
        }
        let mut full = vec![0; cap];
        full[..used].copy_from_slice(&counts[..used]);
        Ok(GameState { n, counts: full })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Counts with trailing zeros trimmed.
    pub fn counts(&self) -> &[u32] {
        let used = self.counts.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1);
        &self.counts[..used]
    }

    /// Multiplicity of `F_i` (1-based); zero outside the stored range.
    pub fn count(&self, i: u32) -> u32 {
        if i == 0 {
            return 0;
        }
        self.counts.get(i as usize - 1).copied().unwrap_or(0)
    }

    pub fn part_count(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn is_terminal(&self) -> bool {
        is_zeckendorf(&self.counts)
    }

    /// All legal moves in canonical order: `CombineOnes`, `CombineAdjacent`
    /// by ascending index, `SplitTwos`, `SplitPair` by ascending index.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        self.legal_moves_into(&mut moves);
        moves
    }

    pub fn legal_moves_into(&self, moves: &mut Vec<Move>) {
        moves.clear();
        let c = &self.counts;
        if c[0] >= 2 {
            moves.push(Move::CombineOnes);
        }
        for i in 0..c.len() - 1 {
            if c[i] > 0 && c[i + 1] > 0 {
                moves.push(Move::CombineAdjacent(i as u32 + 1));
            }
        }
        if c.len() > 1 && c[1] >= 2 {
            moves.push(Move::SplitTwos);
        }
        for (i, &count) in c.iter().enumerate().skip(2) {
            if count >= 2 {
                moves.push(Move::SplitPair(i as u32 + 1));
            }
        }
    }

    /// Checks the move's count precondition.
    pub fn check(&self, m: Move) -> Result<()> {
        let need = |i: u32, k: u32| -> Result<()> {
            let have = self.count(i);
            if have < k {
                let what = if k == 1 { "a copy".to_string() } else { format!("{k} copies") };
                return Err(Error::IllegalMove {
                    token: m.to_string(),
                    reason: format!("requires {what} of F_{i}, found {have}"),
                });
            }
            Ok(())
        };
        match m {
            Move::CombineOnes => need(1, 2),
            Move::CombineAdjacent(0) | Move::SplitPair(0..=2) => Err(Error::IllegalMove {
                token: m.to_string(),
                reason: "index out of range for this move kind".into(),
            }),
            Move::CombineAdjacent(i) => {
                need(i, 1)?;
                need(i + 1, 1)
            }
            Move::SplitTwos => need(2, 2),
            Move::SplitPair(i) => need(i, 2),
        }
    }

    /// Applies a legal move, returning the successor state.
    pub fn apply(&self, m: Move) -> Result<GameState> {
        self.check(m)?;
        let mut next = self.clone();
        next.apply_unchecked(m);
        Ok(next)
    }

    /// Caller guarantees `m` is legal.
    pub(crate) fn apply_unchecked(&mut self, m: Move) {
        let c = &mut self.counts;
        match m {
            Move::CombineOnes => {
                c[0] -= 2;
                c[1] += 1;
            }
            Move::CombineAdjacent(i) => {
                let i = i as usize - 1;
                c[i] -= 1;
                c[i + 1] -= 1;
                c[i + 2] += 1;
            }
            Move::SplitTwos => {
                c[1] -= 2;
                c[0] += 1;
                c[2] += 1;
            }
            Move::SplitPair(i) => {
                let i = i as usize - 1;
                c[i] -= 2;
                c[i - 2] += 1;
                c[i + 1] += 1;
            }
        }
    }
}

impl fmt::Display for GameState {
    /// Multiset notation, e.g. `{1^3 + 2 + 5^2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let v = fib_value(i as u32 + 1).map_err(|_| fmt::Error)?;
            if c == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{c}")?;
            }
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    n: u64,
    counts: Vec<u32>,
}

impl Serialize for GameState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateWire {
            n: self.n,
            counts: self.counts().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GameState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = StateWire::deserialize(deserializer)?;
        GameState::from_counts(wire.n, &wire.counts).map_err(serde::de::Error::custom)
    }
}

/// One of the four move rules. Payloads are 1-based Fibonacci indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// `1 + 1 = 2`
    CombineOnes,
    /// `F_i + F_{i+1} = F_{i+2}`, `i >= 1`
    CombineAdjacent(u32),
    /// `2 + 2 = 1 + 3`
    SplitTwos,
    /// `F_i + F_i = F_{i-2} + F_{i+1}`, `i >= 3`
    SplitPair(u32),
}

impl Move {
    /// Arithmetic form such as `1+2=3` or `5+5=2+8`.
    pub fn describe(&self) -> String {
        let f = |i: u32| fib_value(i).map(|v| v.to_string()).unwrap_or_else(|_| format!("F_{i}"));
        match *self {
            Move::CombineOnes => "1+1=2".into(),
            Move::CombineAdjacent(i) => format!("{}+{}={}", f(i), f(i + 1), f(i + 2)),
            Move::SplitTwos => "2+2=1+3".into(),
            Move::SplitPair(i) => format!("{}+{}={}+{}", f(i), f(i), f(i.saturating_sub(2)), f(i + 1)),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::CombineOnes => write!(f, "c1"),
            Move::CombineAdjacent(i) => write!(f, "adj:{i}"),
            Move::SplitTwos => write!(f, "s2"),
            Move::SplitPair(i) => write!(f, "split:{i}"),
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unrecognised move token {s:?}"));
        match s {
            "c1" => return Ok(Move::CombineOnes),
            "s2" => return Ok(Move::SplitTwos),
            _ => {}
        }
        let (kind, index) = s.split_once(':').ok_or_else(bad)?;
        if index.starts_with('+') {
            return Err(bad());
        }
        let i: u32 = index.parse().map_err(|_| bad())?;
        match kind {
            "adj" if i >= 1 => Ok(Move::CombineAdjacent(i)),
            "split" if i >= 3 => Ok(Move::SplitPair(i)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Move {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Move {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let token = String::deserialize(deserializer)?;
        token.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Winner {
    pub player: usize,
    pub team: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SessionStatus {
    InProgress,
    /// `winner` is `None` only when the game started at its terminal state
    /// (`n = 1`).
    Finished { winner: Option<Winner> },
}

/// A game in progress: state, move log and seating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SessionWire", into = "SessionWire")]
pub struct Session {
    state: GameState,
    moves: Vec<Move>,
    seating: SeatingConfig,
    status: SessionStatus,
}

impl Session {
    pub fn new(n: u64, seating: SeatingConfig) -> Result<Self> {
        validate_n(n)?;
        let state = GameState::initial(n)?;
        let status = if state.is_terminal() {
            SessionStatus::Finished { winner: None }
        } else {
            SessionStatus::InProgress
        };
        Ok(Session {
            state,
            moves: Vec::new(),
            seating,
            status,
        })
    }

    /// Replays a move log from the initial state.
    pub fn replay(n: u64, seating: SeatingConfig, moves: &[Move]) -> Result<Self> {
        let mut session = Session::new(n, seating)?;
        for &m in moves {
            session.apply(m)?;
        }
        Ok(session)
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn seating(&self) -> &SeatingConfig {
        &self.seating
    }

    pub fn status(&self) -> SessionStatus {
        self.status
    }

    /// Number of moves made so far.
    pub fn turn(&self) -> usize {
        self.moves.len()
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.status, SessionStatus::Finished { .. })
    }

    /// Player due to move next (meaningless once finished).
    pub fn to_move(&self) -> usize {
        self.seating.player_to_move(self.turn())
    }

    pub fn winner(&self) -> Option<Winner> {
        match self.status {
            SessionStatus::Finished { winner } => winner,
            SessionStatus::InProgress => None,
        }
    }

    /// Plays `m` for the player to move. The session is left untouched on
    /// error.
    pub fn apply(&mut self, m: Move) -> Result<()> {
        if self.is_finished() {
            return Err(Error::GameOver);
        }
        let next = self.state.apply(m)?;
        let mover = self.to_move();
        self.state = next;
        self.moves.push(m);
        if self.state.is_terminal() {
            self.status = SessionStatus::Finished {
                winner: Some(Winner {
                    player: mover,
                    team: self.seating.team_of(mover),
                }),
            };
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SessionWire {
    n: u64,
    seating: SeatingConfig,
    moves: Vec<Move>,
    turn: usize,
    to_move: usize,
    state: GameState,
    #[serde(flatten)]
    status: SessionStatus,
}

impl From<Session> for SessionWire {
    fn from(s: Session) -> Self {
        SessionWire {
            n: s.state.n(),
            turn: s.turn(),
            to_move: s.to_move(),
            seating: s.seating,
            moves: s.moves,
            state: s.state,
            status: s.status,
        }
    }
}

impl TryFrom<SessionWire> for Session {
    type Error = Error;

    fn try_from(w: SessionWire) -> Result<Self> {
        let session = Session::replay(w.n, w.seating, &w.moves)?;
        if session.state != w.state || session.status != w.status {
            return Err(Error::invalid("session snapshot does not match its move log"));
        }
        Ok(session)
    }
}
