//! `zeck`: decompose, solve, verify, explore and serve Zeckendorf games.

mod commands;
mod play;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "zeck", version, about = "Multiplayer Zeckendorf game engine and coalition solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Zeckendorf decomposition of n.
    Decompose {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Decide which coalitions can force the last move.
    Solve {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        players: usize,
        /// Teams, e.g. "1,2,3,4;5,6". Defaults to one team per player.
        #[arg(long)]
        alliances: Option<String>,
        /// "teamK" or a player list like "1,3". Repeatable; defaults to every team.
        #[arg(long)]
        coalition: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Check winning-strategy claims over a grid (all claims by default).
    Verify {
        /// Claim id, e.g. TWO_PLAYER. Repeatable.
        #[arg(long)]
        claim: Vec<String>,
        #[arg(long)]
        n_min: Option<u64>,
        #[arg(long)]
        n_max: Option<u64>,
        /// Player counts for NO_WINNER_MULTI / BIG_VS_2, e.g. "3,4".
        #[arg(long)]
        players: Option<String>,
        /// Team counts t for TEAMS_K.
        #[arg(long)]
        teams: Option<String>,
        /// Small alliance sizes d for BIG_2D_VS_D.
        #[arg(long)]
        d: Option<String>,
        /// Offset b for OFFSET_2B / OFFSET_3B.
        #[arg(long)]
        b: Option<usize>,
        /// Alliance players for OFFSET_2B / OFFSET_3B, e.g. "1,2,3".
        #[arg(long)]
        alliance: Option<String>,
        /// Player count for OFFSET_2B / OFFSET_3B.
        #[arg(long)]
        offset_players: Option<usize>,
        /// Worker threads (defaults to the number of cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate every state reachable from n ones.
    Reach {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Play interactively on the terminal.
    Play {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        players: usize,
        #[arg(long)]
        alliances: Option<String>,
        /// Seats controlled from stdin, e.g. "1,3". Others are played by the solver.
        #[arg(long, default_value = "")]
        human: String,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = zeck_server::DEFAULT_PORT)]
        port: u16,
        /// JSON-lines session snapshot, reloaded on start.
        #[arg(long)]
        persist: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose { n, json } => commands::decompose(n, json),
        Command::Solve {
            n,
            players,
            alliances,
            coalition,
            json,
        } => commands::solve(n, players, alliances.as_deref(), &coalition, json),
        Command::Verify {
            claim,
            n_min,
            n_max,
            players,
            teams,
            d,
            b,
            alliance,
            offset_players,
            jobs,
            json,
        } => commands::verify(commands::VerifyArgs {
            claims: claim,
            n_min,
            n_max,
            players,
            teams,
            d,
            b,
            alliance,
            offset_players,
            jobs,
            json,
        }),
        Command::Reach { n, json } => commands::reach(n, json),
        Command::Play {
            n,
            players,
            alliances,
            human,
        } => commands::play(n, players, alliances.as_deref(), &human),
        Command::Serve { port, persist } => commands::serve(port, persist),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            if e.is_usage() {
                eprintln!("run `zeck --help` for usage");
            }
            e.exit_code()
        }
    }
}
