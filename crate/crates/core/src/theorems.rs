//! Parameter sweeps that check winning-strategy claims by exhaustive solving.
//!
//! Each claim asserts that some coalition wins (or that none does) for every
//! `n` at or above a bound. A sweep solves every grid point exactly; points
//! below the bound are recorded as findings with no expected value. A finite
//! sweep never proves a claim for all `n`, it only checks a prefix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seating::{Coalition, SeatingConfig};
use crate::solver::{solve_with, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimId {
    TwoPlayer,
    NoWinnerMulti,
    TeamsK,
    #[serde(rename = "ALLIANCE_4V2")]
    Alliance4v2,
    #[serde(rename = "BIG_VS_2")]
    BigVs2,
    #[serde(rename = "OFFSET_2B")]
    Offset2b,
    #[serde(rename = "OFFSET_3B")]
    Offset3b,
    #[serde(rename = "BIG_2D_VS_D")]
    Big2dVsD,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::TwoPlayer,
        ClaimId::NoWinnerMulti,
        ClaimId::TeamsK,
        ClaimId::Alliance4v2,
        ClaimId::BigVs2,
        ClaimId::Offset2b,
        ClaimId::Offset3b,
        ClaimId::Big2dVsD,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::TwoPlayer => "TWO_PLAYER",
            ClaimId::NoWinnerMulti => "NO_WINNER_MULTI",
            ClaimId::TeamsK => "TEAMS_K",
            ClaimId::Alliance4v2 => "ALLIANCE_4V2",
            ClaimId::BigVs2 => "BIG_VS_2",
            ClaimId::Offset2b => "OFFSET_2B",
            ClaimId::Offset3b => "OFFSET_3B",
            ClaimId::Big2dVsD => "BIG_2D_VS_D",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            ClaimId::TwoPlayer => "p = 2: player 2 wins for n >= 3",
            ClaimId::NoWinnerMulti => "p >= 3: no single player wins for n >= 5",
            ClaimId::TeamsK => "t >= 3 teams of k = t - 1 consecutive players: no team wins",
            ClaimId::Alliance4v2 => "p = 6, 4 vs 2: the 4-player alliance wins for n >= 30",
            ClaimId::BigVs2 => "p >= 7, p - 2 vs 2: the big alliance wins for n >= 32",
            ClaimId::Offset2b => {
                "alliance with > 2p/3 players, offset-b cover and a run of 2b: wins for n >= 4pb + 2p - 2b"
            }
            ClaimId::Offset3b => "alliance with offset-b cover and a run of 3b: wins for n >= 2p + 4b",
            ClaimId::Big2dVsD => "2d consecutive vs d consecutive: the 2d alliance wins for n >= 12d^2 + 4d",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown claim id {s:?}")))
    }
}

/// Claim-specific sweep parameters beyond the `n` range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimParams {
    /// No extra parameters (the player count is fixed by the claim).
    Fixed,
    /// Player counts to sweep.
    Players(Vec<usize>),
    /// Team counts `t` to sweep (teams of `t - 1`).
    Teams(Vec<usize>),
    /// Small-alliance sizes `d` to sweep (`p = 3d`).
    SmallSize(Vec<usize>),
    /// A single explicit alliance with offset `b`.
    Offset { p: usize, b: usize, alliance: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSpec {
    pub id: ClaimId,
    pub n_min: u64,
    pub n_max: u64,
    pub params: ClaimParams,
}

/// A bound on `n` stated alongside a claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub label: String,
    pub n: u64,
}

/// One solve in a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    pub n: u64,
    pub params: String,
    pub rotation: usize,
    pub seating: SeatingConfig,
    pub coalition: Coalition,
    /// Outcome the claim asserts for this coalition.
    pub claimed: bool,
    /// `n` from which the outcome is asserted.
    pub from_n: u64,
}

impl GridPoint {
    pub fn expected(&self) -> Option<bool> {
        (self.n >= self.from_n).then_some(self.claimed)
    }

    fn sort_key(&self) -> (u64, &str, usize, usize, &Coalition) {
        (self.n, &self.params, self.seating.players(), self.rotation, &self.coalition)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub params: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointResult {
    pub n: u64,
    pub p: usize,
    pub params: String,
    pub rotation: usize,
    pub teams: Vec<Vec<usize>>,
    pub coalition: Coalition,
    /// `None` below the claim's bound: the point is a finding, not a check.
    pub expected: Option<bool>,
    pub observed: bool,
    pub pass: Option<bool>,
    pub states_visited: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub points: usize,
    pub passed: usize,
    pub failed: usize,
    pub findings: usize,
    pub skipped: usize,
    pub states_visited: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: ClaimId,
    pub summary: String,
    pub n_min: u64,
    pub n_max: u64,
    pub bounds: Vec<Bound>,
    pub points: Vec<PointResult>,
    pub skipped: Vec<SkippedPoint>,
    /// Smallest tested `n` from which the claimed outcome held at every
    /// larger tested `n`.
    pub empirical_threshold: Option<u64>,
    pub stats: ReportStats,
}

impl VerificationReport {
    /// No checked point failed.
    pub fn all_pass(&self) -> bool {
        self.stats.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &PointResult> {
        self.points.iter().filter(|p| p.pass == Some(false))
    }

    /// Aligned plain-text table, one row per grid point.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.claim, self.summary);
        let bounds: Vec<String> = self.bounds.iter().map(|b| format!("{} n >= {}", b.label, b.n)).collect();
        let _ = writeln!(out, "n in [{}, {}]; bounds: {}", self.n_min, self.n_max, bounds.join(", "));
        let rows: Vec<[String; 8]> = self
            .points
            .iter()
            .map(|r| {
                [
                    r.n.to_string(),
                    r.p.to_string(),
                    r.params.clone(),
                    r.rotation.to_string(),
                    format_teams(&r.teams),
                    r.coalition.to_string(),
                    match r.expected {
                        Some(e) => outcome(e).to_string(),
                        None => "-".into(),
                    },
                    format!(
                        "{} {}",
                        outcome(r.observed),
                        match r.pass {
                            Some(true) => "PASS",
                            Some(false) => "FAIL",
                            None => "FINDING",
                        }
                    ),
                ]
            })
            .collect();
        let header = ["n", "p", "params", "rot", "teams", "coalition", "expected", "observed"];
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[&str]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let _ = write!(s, "{cell:<w$}");
            }
            s.trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&header));
        for row in &rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            let _ = writeln!(out, "{}", line(&cells));
        }
        for s in &self.skipped {
            let _ = writeln!(out, "skipped {}: {}", s.params, s.reason);
        }
        let threshold = self
            .empirical_threshold
            .map_or_else(|| "none in range".to_string(), |n| n.to_string());
        let _ = writeln!(
            out,
            "points: {}  passed: {}  failed: {}  findings: {}  skipped: {}  empirical threshold: {}",
            self.stats.points,
            self.stats.passed,
            self.stats.failed,
            self.stats.findings,
            self.stats.skipped,
            threshold
        );
        out
    }
}

fn outcome(win: bool) -> &'static str {
    if win {
        "WIN"
    } else {
        "LOSS"
    }
}

fn format_teams(teams: &[Vec<usize>]) -> String {
    teams
        .iter()
        .map(|t| t.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

/// The eight claims with their default desk-scale grids.
pub fn claim_catalog() -> Vec<ClaimSpec> {
    let spec = |id, n_min, n_max, params| ClaimSpec { id, n_min, n_max, params };
    let offset = || ClaimParams::Offset { p: 4, b: 1, alliance: vec![1, 2, 3] };
    vec![
        spec(ClaimId::TwoPlayer, 3, 25, ClaimParams::Fixed),
        spec(ClaimId::NoWinnerMulti, 5, 22, ClaimParams::Players(vec![3, 4, 5, 6])),
        spec(ClaimId::TeamsK, 16, 30, ClaimParams::Teams(vec![3, 4])),
        spec(ClaimId::Alliance4v2, 5, 30, ClaimParams::Fixed),
        spec(ClaimId::BigVs2, 5, 32, ClaimParams::Players(vec![7, 8])),
        spec(ClaimId::Offset2b, 12, 22, offset()),
        spec(ClaimId::Offset3b, 12, 22, offset()),
        spec(ClaimId::Big2dVsD, 2, 22, ClaimParams::SmallSize(vec![1])),
    ]
}

/// Default spec for one claim.
pub fn default_claim(id: ClaimId) -> ClaimSpec {
    claim_catalog()
        .into_iter()
        .find(|c| c.id == id)
        .expect("catalog covers every claim")
}

impl ClaimSpec {
    pub fn with_n_range(mut self, n_min: u64, n_max: u64) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn bounds(&self) -> Vec<Bound> {
        let b = |label: &str, n: u64| Bound { label: label.to_string(), n };
        match (&self.id, &self.params) {
            (ClaimId::TwoPlayer, _) => vec![b("theorem", 3)],
            (ClaimId::NoWinnerMulti, _) => vec![b("theorem", 5), b("lemmas", 13)],
            (ClaimId::TeamsK, ClaimParams::Teams(ts)) => {
                let mut out = Vec::new();
                for &t in ts {
                    let k = t.saturating_sub(1) as u64;
                    out.push(b(&format!("theorem t={t}"), 2 * k * k + 4 * k));
                    if t == 3 {
                        out.push(b("lemma t=3", 30));
                    }
                }
                out
            }
            (ClaimId::Alliance4v2, _) => vec![b("theorem", 30)],
            (ClaimId::BigVs2, ClaimParams::Players(ps)) => {
                let mut out = vec![b("theorem", 32)];
                if ps.iter().any(|&p| p >= 8) {
                    out.push(b("lemma p>=8", 22));
                }
                out
            }
            (ClaimId::Offset2b, ClaimParams::Offset { p, b: off, .. }) => {
                let (p, off) = (*p as u64, *off as u64);
                vec![b("theorem", (4 * p * off + 2 * p).saturating_sub(2 * off))]
            }
            (ClaimId::Offset3b, ClaimParams::Offset { p, b: off, .. }) => {
                vec![b("theorem", 2 * *p as u64 + 4 * *off as u64)]
            }
            (ClaimId::Big2dVsD, ClaimParams::SmallSize(ds)) => ds
                .iter()
                .map(|&d| {
                    let d = d as u64;
                    b(&format!("theorem d={d}"), 12 * d * d + 4 * d)
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Expands the grid into solve points (deduplicated over rotations) and
    /// the parameter combinations that fail the claim's preconditions.
    pub fn points(&self) -> Result<(Vec<GridPoint>, Vec<SkippedPoint>)> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::invalid(format!(
                "bad n range [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        let configs = self.configurations()?;
        let mut points = Vec::new();
        let mut skipped = Vec::new();
        for config in configs {
            match config {
                Err(skip) => skipped.push(skip),
                Ok(cfg) => {
                    for n in self.n_min..=self.n_max {
                        for (rotation, seating, coalition) in &cfg.variants {
                            points.push(GridPoint {
                                n,
                                params: cfg.label.clone(),
                                rotation: *rotation,
                                seating: seating.clone(),
                                coalition: coalition.clone(),
                                claimed: cfg.claimed,
                                from_n: cfg.from_n,
                            });
                        }
                    }
                }
            }
        }
        points.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Ok((points, skipped))
    }

    fn configurations(&self) -> Result<Vec<Result<Config, SkippedPoint>>> {
        let mismatch = || {
            Error::invalid(format!(
                "parameters {:?} do not fit claim {}",
                self.params, self.id
            ))
        };
        let skip = |label: String, reason: String| Err(SkippedPoint { params: label, reason });
        let mut out = Vec::new();
        match (self.id, &self.params) {
            (ClaimId::TwoPlayer, ClaimParams::Fixed) => {
                let seating = SeatingConfig::singletons(2)?;
                for (player, claimed) in [(1, false), (2, true)] {
                    out.push(Ok(Config::new(
                        "p=2".into(),
                        &seating,
                        vec![Coalition::singleton(player, 2)?],
                        claimed,
                        3,
                        false,
                    )));
                }
            }
            (ClaimId::NoWinnerMulti, ClaimParams::Players(ps)) => {
                for &p in ps {
                    let label = format!("p={p}");
                    if p < 3 {
                        out.push(skip(label, "needs at least 3 players".into()));
                        continue;
                    }
                    let seating = SeatingConfig::singletons(p)?;
                    let singles = (1..=p).map(|m| Coalition::singleton(m, p)).collect::<Result<_>>()?;
                    out.push(Ok(Config::new(label, &seating, singles, false, 5, false)));
                }
            }
            (ClaimId::TeamsK, ClaimParams::Teams(ts)) => {
                for &t in ts {
                    let label = format!("t={t}");
                    if t < 3 {
                        out.push(skip(label, "needs at least 3 teams".into()));
                        continue;
                    }
                    let k = t - 1;
                    let p = t * k;
                    let teams: Vec<Vec<usize>> =
                        (1..=t).map(|j| ((j - 1) * k + 1..=j * k).collect()).collect();
                    let seating = SeatingConfig::from_teams(p, &teams)?;
                    let from_n = if t == 3 { 30 } else { (2 * k * k + 4 * k) as u64 };
                    let all = (1..=t).map(|team| Coalition::team(&seating, team)).collect::<Result<_>>()?;
                    out.push(Ok(Config::new(label, &seating, all, false, from_n, true)));
                }
            }
            (ClaimId::Alliance4v2, ClaimParams::Fixed) => {
                let seating = SeatingConfig::from_teams(6, &[vec![1, 2, 3, 4], vec![5, 6]])?;
                out.push(Ok(Config::new(
                    "p=6".into(),
                    &seating,
                    vec![Coalition::team(&seating, 1)?],
                    true,
                    30,
                    true,
                )));
            }
            (ClaimId::BigVs2, ClaimParams::Players(ps)) => {
                for &p in ps {
                    let label = format!("p={p}");
                    if p < 7 {
                        out.push(skip(label, "needs at least 7 players".into()));
                        continue;
                    }
                    let seating =
                        SeatingConfig::from_teams(p, &[(1..=p - 2).collect(), vec![p - 1, p]])?;
                    out.push(Ok(Config::new(
                        label,
                        &seating,
                        vec![Coalition::team(&seating, 1)?],
                        true,
                        32,
                        true,
                    )));
                }
            }
            (id @ (ClaimId::Offset2b | ClaimId::Offset3b), ClaimParams::Offset { p, b, alliance }) => {
                let (p, b) = (*p, *b);
                let label = format!("p={p} b={b} alliance={}", format_teams(std::slice::from_ref(alliance)));
                let coalition = Coalition::new(alliance.iter().copied(), p)?;
                let run = if id == ClaimId::Offset2b { 2 * b } else { 3 * b };
                if b == 0 {
                    out.push(skip(label, "offset b must be positive".into()));
                } else if !coalition.has_offset_cover(b, p) {
                    out.push(skip(label, format!("some non-member i has player i-{b} outside the alliance")));
                } else if coalition.longest_run(p) < run {
                    out.push(skip(label, format!("no run of {run} consecutive alliance players")));
                } else if id == ClaimId::Offset2b && 3 * coalition.len() <= 2 * p {
                    out.push(skip(label, "alliance does not exceed two thirds of the players".into()));
                } else {
                    let rest: Vec<usize> = (1..=p).filter(|i| !coalition.contains(*i)).collect();
                    let mut teams = vec![coalition.members().collect::<Vec<_>>()];
                    if !rest.is_empty() {
                        teams.push(rest);
                    }
                    let seating = SeatingConfig::from_teams(p, &teams)?;
                    let from_n = if id == ClaimId::Offset2b {
                        (4 * p * b + 2 * p - 2 * b) as u64
                    } else {
                        (2 * p + 4 * b) as u64
                    };
                    out.push(Ok(Config::new(label, &seating, vec![coalition], true, from_n, true)));
                }
            }
            (ClaimId::Big2dVsD, ClaimParams::SmallSize(ds)) => {
                for &d in ds {
                    let label = format!("d={d}");
                    if d == 0 {
                        out.push(skip(label, "d must be positive".into()));
                        continue;
                    }
                    let p = 3 * d;
                    let seating =
                        SeatingConfig::from_teams(p, &[(1..=2 * d).collect(), (2 * d + 1..=p).collect()])?;
                    let from_n = (12 * d * d + 4 * d) as u64;
                    out.push(Ok(Config::new(
                        label,
                        &seating,
                        vec![Coalition::team(&seating, 1)?],
                        true,
                        from_n,
                        true,
                    )));
                }
            }
            _ => return Err(mismatch()),
        }
        Ok(out)
    }
}

/// One parameter combination with its distinct seating rotations.
struct Config {
    label: String,
    variants: Vec<(usize, SeatingConfig, Coalition)>,
    claimed: bool,
    from_n: u64,
}

impl Config {
    fn new(
        label: String,
        seating: &SeatingConfig,
        coalitions: Vec<Coalition>,
        claimed: bool,
        from_n: u64,
        rotate: bool,
    ) -> Self {
        let p = seating.players();
        let mut seen = BTreeSet::new();
        let mut variants = Vec::new();
        for r in 0..if rotate { p } else { 1 } {
            let s = seating.rotated(r);
            let mut key: Vec<Vec<usize>> = s.teams();
            key.sort();
            for coalition in &coalitions {
                let c = coalition.rotated(r, p);
                if seen.insert((key.clone(), c.clone())) {
                    variants.push((r, s.clone(), c));
                }
            }
        }
        Config {
            label,
            variants,
            claimed,
            from_n,
        }
    }
}

/// Solves every grid point (in parallel) and assembles the report. The
/// result does not depend on the number of worker threads.
pub fn verify(claim: &ClaimSpec, config: SolverConfig) -> Result<VerificationReport> {
    let (points, skipped) = claim.points()?;
    let results: Vec<PointResult> = points
        .par_iter()
        .map(|pt| {
            let out = solve_with(pt.n, &pt.seating, &pt.coalition, config)?;
            let expected = pt.expected();
            Ok(PointResult {
                n: pt.n,
                p: pt.seating.players(),
                params: pt.params.clone(),
                rotation: pt.rotation,
                teams: pt.seating.teams(),
                coalition: pt.coalition.clone(),
                expected,
                observed: out.win,
                pass: expected.map(|e| e == out.win),
                states_visited: out.stats.states_visited,
            })
        })
        .collect::<Result<_>>()?;

    let empirical_threshold = threshold(&points, &results);
    let stats = ReportStats {
        points: results.len(),
        passed: results.iter().filter(|r| r.pass == Some(true)).count(),
        failed: results.iter().filter(|r| r.pass == Some(false)).count(),
        findings: results.iter().filter(|r| r.pass.is_none()).count(),
        skipped: skipped.len(),
        states_visited: results.iter().map(|r| r.states_visited).sum(),
    };
    Ok(VerificationReport {
        claim: claim.id,
        summary: claim.id.summary().to_string(),
        n_min: claim.n_min,
        n_max: claim.n_max,
        bounds: claim.bounds(),
        points: results,
        skipped,
        empirical_threshold,
        stats,
    })
}

fn threshold(points: &[GridPoint], results: &[PointResult]) -> Option<u64> {
    let mut holds: BTreeMap<u64, bool> = BTreeMap::new();
    for (pt, r) in points.iter().zip(results) {
        *holds.entry(pt.n).or_insert(true) &= r.observed == pt.claimed;
    }
    let mut found = None;
    for (&n, &ok) in holds.iter().rev() {
        if !ok {
            break;
        }
        found = Some(n);
    }
    found
}

/// Smallest `n` in `[n_min, n_max]` from which the claimed outcome holds at
/// every tested larger `n`.
pub fn find_threshold(claim: &ClaimSpec, n_min: u64, n_max: u64, config: SolverConfig) -> Result<Option<u64>> {
    let claim = claim.clone().with_n_range(n_min, n_max);
    Ok(verify(&claim, config)?.empirical_threshold)
}
