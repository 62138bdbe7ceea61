//! Players, teams and coalitions.
//!
//! Players are numbered `1..=p` and sit in a circle: player `p` is followed by
//! player `1`. Every player belongs to exactly one team.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeatingConfig {
    p: usize,
    /// `team_of[i]` is the 1-based team of player `i + 1`.
    team_of: Vec<usize>,
}

impl SeatingConfig {
    /// Every player on their own team.
    pub fn singletons(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("at least one player is required"));
        }
        Ok(SeatingConfig {
            p,
            team_of: (1..=p).collect(),
        })
    }

    /// Builds a seating from explicit teams. Teams must partition `1..=p`.
    /// Team numbers follow the order given.
    pub fn from_teams(p: usize, teams: &[Vec<usize>]) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("at least one player is required"));
        }
        let mut team_of = vec![0; p];
        for (t, team) in teams.iter().enumerate() {
            if team.is_empty() {
                return Err(Error::invalid(format!("team {} is empty", t + 1)));
            }
            for &player in team {
                if player == 0 || player > p {
                    return Err(Error::invalid(format!(
                        "player {player} is out of range 1..={p}"
                    )));
                }
                if team_of[player - 1] != 0 {
                    return Err(Error::invalid(format!(
                        "player {player} is assigned to more than one team"
                    )));
                }
                team_of[player - 1] = t + 1;
            }
        }
        if let Some(i) = team_of.iter().position(|&t| t == 0) {
            return Err(Error::invalid(format!("player {} has no team", i + 1)));
        }
        Ok(SeatingConfig { p, team_of })
    }

    /// Parses `"1,2,3,4;5,6"`: semicolon-separated teams of comma-separated
    /// players. Errors name the byte offset of the offending token.
    pub fn parse_alliances(p: usize, text: &str) -> Result<Self> {
        let mut teams = Vec::new();
        let mut offset = 0;
        for team_text in text.split(';') {
            let mut team = Vec::new();
            let mut inner = offset;
            for tok in team_text.split(',') {
                let trimmed = tok.trim();
                let player = trimmed.parse::<usize>().map_err(|_| {
                    Error::invalid(format!(
                        "alliances: expected a player number at position {inner}, found {trimmed:?}"
                    ))
                })?;
                team.push(player);
                inner += tok.len() + 1;
            }
            teams.push(team);
            offset += team_text.len() + 1;
        }
        Self::from_teams(p, &teams)
    }

    pub fn players(&self) -> usize {
        self.p
    }

    pub fn team_count(&self) -> usize {
        self.team_of.iter().copied().max().unwrap_or(0)
    }

    /// Team of a 1-based player.
    pub fn team_of(&self, player: usize) -> usize {
        self.team_of[player - 1]
    }

    /// Members of a 1-based team, ascending.
    pub fn team(&self, team: usize) -> Vec<usize> {
        (1..=self.p).filter(|&i| self.team_of[i - 1] == team).collect()
    }

    pub fn teams(&self) -> Vec<Vec<usize>> {
        (1..=self.team_count()).map(|t| self.team(t)).collect()
    }

    /// Player who makes the move with 0-based index `turn`.
    pub fn player_to_move(&self, turn: usize) -> usize {
        turn % self.p + 1
    }

    /// Same teams with every player `i` replaced by `i + r` (mod `p`).
    pub fn rotated(&self, r: usize) -> Self {
        let teams: Vec<Vec<usize>> = self
            .teams()
            .into_iter()
            .map(|team| team.into_iter().map(|i| rotate_player(i, r, self.p)).collect())
            .collect();
        Self::from_teams(self.p, &teams).expect("rotation preserves a partition")
    }
}

fn rotate_player(player: usize, r: usize, p: usize) -> usize {
    (player - 1 + r) % p + 1
}

/// A non-empty set of players who win together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition {
    members: BTreeSet<usize>,
}

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = usize>, p: usize) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::invalid("coalition must not be empty"));
        }
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > p) {
            return Err(Error::invalid(format!(
                "coalition member {bad} is out of range 1..={p}"
            )));
        }
        Ok(Coalition { members })
    }

    pub fn singleton(player: usize, p: usize) -> Result<Self> {
        Self::new([player], p)
    }

    pub fn team(seating: &SeatingConfig, team: usize) -> Result<Self> {
        if team == 0 || team > seating.team_count() {
            return Err(Error::invalid(format!(
                "team {team} does not exist (have {})",
                seating.team_count()
            )));
        }
        Self::new(seating.team(team), seating.players())
    }

    /// `"team2"` names a team of `seating`; `"1,3"` is an explicit player set.
    pub fn parse(text: &str, seating: &SeatingConfig) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("team") {
            let team = rest
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad team name {text:?}")))?;
            return Self::team(seating, team);
        }
        let members = text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad coalition member {:?}", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(members, seating.players())
    }

    pub fn contains(&self, player: usize) -> bool {
        self.members.contains(&player)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Everyone else, or `None` if the coalition already has all `p` players.
    pub fn complement(&self, p: usize) -> Option<Self> {
        let rest: Vec<usize> = (1..=p).filter(|i| !self.members.contains(i)).collect();
        Self::new(rest, p).ok()
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn rotated(&self, r: usize, p: usize) -> Self {
        Coalition {
            members: self.members.iter().map(|&i| rotate_player(i, r, p)).collect(),
        }
    }

    /// Length of the longest circular run of consecutive members.
    pub fn longest_run(&self, p: usize) -> usize {
        if self.members.len() >= p {
            return p;
        }
        let mut best = 0;
        for start in 1..=p {
            let mut len = 0;
            while len < p && self.contains(rotate_player(start, len, p)) {
                len += 1;
            }
            best = best.max(len);
        }
        best
    }

    /// For every non-member `i`, player `i - b` (mod `p`, player 0 is player
    /// `p`) is a member.
    pub fn has_offset_cover(&self, b: usize, p: usize) -> bool {
        (1..=p)
            .filter(|i| !self.contains(*i))
            .all(|i| self.contains(rotate_player(i, p - b % p, p)))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}
