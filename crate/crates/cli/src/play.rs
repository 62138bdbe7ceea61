//! Terminal read-evaluate loop.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use zeck_core::solver::{Solver, SolverConfig};
use zeck_core::{Coalition, Move, SeatingConfig, Session};

use crate::commands::CliError;

fn io_err(e: std::io::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Plays one game. Human seats read move tokens from `input`; the others
/// play the solver's move for their own team.
pub fn run(
    n: u64,
    seating: SeatingConfig,
    humans: &[usize],
    config: SolverConfig,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut session = Session::new(n, seating.clone())?;
    let mut solvers: HashMap<usize, Solver> = HashMap::new();
    let mut hint_for = |session: &Session, team: usize| -> Result<_, CliError> {
        let solver = match solvers.entry(team) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(Solver::new(seating.clone(), Coalition::team(&seating, team)?, config)?)
            }
        };
        Ok(solver.best_move(session.state(), session.turn())?)
    };

    writeln!(out, "n = {n}, teams: {:?}, humans: {humans:?}", seating.teams()).map_err(io_err)?;
    while !session.is_finished() {
        let player = session.to_move();
        let team = seating.team_of(player);
        let legal = session.state().legal_moves();
        writeln!(out, "\nturn {}: {}", session.turn(), session.state()).map_err(io_err)?;
        writeln!(out, "player {player} (team {team}) to move").map_err(io_err)?;
        let listed: Vec<String> = legal.iter().map(|m| format!("{m} [{}]", m.describe())).collect();
        writeln!(out, "legal: {}", listed.join(", ")).map_err(io_err)?;

        let chosen: Move = if humans.contains(&player) {
            loop {
                write!(out, "> ").map_err(io_err)?;
                out.flush().map_err(io_err)?;
                let mut line = String::new();
                if input.read_line(&mut line).map_err(io_err)? == 0 {
                    return Err(CliError::Runtime("input closed before the game ended".into()));
                }
                let line = line.trim();
                match line {
                    "" => continue,
                    "quit" | "q" => {
                        writeln!(out, "game abandoned").map_err(io_err)?;
                        return Ok(());
                    }
                    "hint" | "?" => {
                        let hint = hint_for(&session, team)?;
                        writeln!(
                            out,
                            "team {team} is {}; suggested move {} [{}]",
                            if hint.win { "winning" } else { "losing" },
                            hint.mv,
                            hint.mv.describe()
                        )
                        .map_err(io_err)?;
                        continue;
                    }
                    _ => {}
                }
                match line.parse::<Move>() {
                    Ok(m) if legal.contains(&m) => break m,
                    Ok(m) => writeln!(out, "{m} is not legal here").map_err(io_err)?,
                    Err(e) => writeln!(out, "{e}; try one of the tokens listed, `hint` or `quit`").map_err(io_err)?,
                }
            }
        } else {
            let m = hint_for(&session, team)?.mv;
            writeln!(out, "player {player} plays {m} [{}]", m.describe()).map_err(io_err)?;
            m
        };
        session.apply(chosen)?;
    }
    writeln!(out, "\nfinal: {}", session.state()).map_err(io_err)?;
    match session.winner() {
        Some(w) => writeln!(out, "player {} (team {}) wins after {} moves", w.player, w.team, session.turn()),
        None => writeln!(out, "no moves possible: the game starts at its decomposition"),
    }
    .map_err(io_err)?;
    Ok(())
}
