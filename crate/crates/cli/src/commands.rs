use std::io::{self, BufRead};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use serde_json::json;

use zeck_core::fibzeck::{validate_n, zeckendorf};
use zeck_core::solver::{reachability, solve_with, SolverConfig};
use zeck_core::theorems::{claim_catalog, default_claim, verify as run_verify, ClaimId, ClaimParams, ClaimSpec};
use zeck_core::{Coalition, Error, SeatingConfig};

/// Exit 2 for usage problems, 1 for failures at run time.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(self, CliError::Usage(_))
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Runtime(_) => ExitCode::from(1),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Overflow { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

fn solver_config() -> Result<SolverConfig, CliError> {
    Ok(SolverConfig::from_env()?)
}

fn seating(players: usize, alliances: Option<&str>) -> Result<SeatingConfig, CliError> {
    Ok(match alliances {
        Some(text) => SeatingConfig::parse_alliances(players, text)?,
        None => SeatingConfig::singletons(players)?,
    })
}

fn print_json(value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    println!("{text}");
    Ok(())
}

pub fn decompose(n: u64, json: bool) -> CliResult {
    let d = zeckendorf(n)?;
    let mut indices: Vec<u32> = d.indices().iter().map(|i| i.get()).collect();
    let mut values = d.values();
    indices.reverse();
    values.reverse();
    if json {
        print_json(&json!({ "n": n, "indices": indices, "values": values }))?;
    } else {
        let terms: Vec<String> = indices.iter().map(|i| format!("F_{i}")).collect();
        let nums: Vec<String> = values.iter().map(u64::to_string).collect();
        println!("{n} = {} = {}", terms.join(" + "), nums.join(" + "));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn solve(n: u64, players: usize, alliances: Option<&str>, coalitions: &[String], json: bool) -> CliResult {
    validate_n(n)?;
    let seating = seating(players, alliances)?;
    let config = solver_config()?;
    let targets: Vec<Coalition> = if coalitions.is_empty() {
        (1..=seating.team_count())
            .map(|t| Coalition::team(&seating, t))
            .collect::<Result<_, _>>()?
    } else {
        coalitions
            .iter()
            .map(|c| Coalition::parse(c, &seating))
            .collect::<Result<_, _>>()?
    };
    let mut results = Vec::new();
    for target in &targets {
        let out = solve_with(n, &seating, target, config)?;
        if !json {
            println!("coalition {target}: {}", if out.win { "WIN" } else { "LOSS" });
            println!(
                "  states visited: {}, memo entries: {}, max depth: {}, policy entries: {}",
                out.stats.states_visited,
                out.stats.memo_entries,
                out.stats.max_depth,
                out.policy.len()
            );
        }
        results.push(json!({
            "coalition": target,
            "win": out.win,
            "stats": out.stats,
            "policy_entries": out.policy.len(),
        }));
    }
    if json {
        print_json(&json!({
            "n": n,
            "players": players,
            "teams": seating.teams(),
            "results": results,
        }))?;
    }
    Ok(ExitCode::SUCCESS)
}

pub struct VerifyArgs {
    pub claims: Vec<String>,
    pub n_min: Option<u64>,
    pub n_max: Option<u64>,
    pub players: Option<String>,
    pub teams: Option<String>,
    pub d: Option<String>,
    pub b: Option<usize>,
    pub alliance: Option<String>,
    pub offset_players: Option<usize>,
    pub jobs: Option<usize>,
    pub json: bool,
}

fn number_list(flag: &str, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("--{flag}: expected comma-separated numbers, got {text:?}")))
        })
        .collect()
}

fn apply_overrides(mut spec: ClaimSpec, args: &VerifyArgs) -> Result<ClaimSpec, CliError> {
    spec.n_min = args.n_min.unwrap_or(spec.n_min);
    spec.n_max = args.n_max.unwrap_or(spec.n_max);
    match &mut spec.params {
        ClaimParams::Players(ps) => {
            if let Some(t) = &args.players {
                *ps = number_list("players", t)?;
            }
        }
        ClaimParams::Teams(ts) => {
            if let Some(t) = &args.teams {
                *ts = number_list("teams", t)?;
            }
        }
        ClaimParams::SmallSize(ds) => {
            if let Some(t) = &args.d {
                *ds = number_list("d", t)?;
            }
        }
        ClaimParams::Offset { p, b, alliance } => {
            if let Some(v) = args.offset_players {
                *p = v;
            }
            if let Some(v) = args.b {
                *b = v;
            }
            if let Some(t) = &args.alliance {
                *alliance = number_list("alliance", t)?;
            }
        }
        ClaimParams::Fixed => {}
    }
    Ok(spec)
}

pub fn verify(args: VerifyArgs) -> CliResult {
    let specs: Vec<ClaimSpec> = if args.claims.is_empty() {
        claim_catalog()
    } else {
        args.claims
            .iter()
            .map(|c| c.parse::<ClaimId>().map(default_claim))
            .collect::<Result<_, _>>()?
    };
    let specs = specs
        .into_iter()
        .map(|s| apply_overrides(s, &args))
        .collect::<Result<Vec<_>, _>>()?;
    let config = solver_config()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut reports = Vec::new();
    for spec in &specs {
        // Validate the grid before spending time on earlier claims' output.
        spec.points()?;
    }
    for spec in &specs {
        let report = pool.install(|| run_verify(spec, config))?;
        if !args.json {
            print!("{}", report.to_table());
            println!();
        }
        reports.push(report);
    }
    let all_pass = reports.iter().all(|r| r.all_pass());
    if args.json {
        print_json(&reports)?;
    } else {
        for r in &reports {
            println!(
                "{:<16} {}  ({} checked, {} failed, {} findings)",
                r.claim.as_str(),
                if r.all_pass() { "PASS" } else { "FAIL" },
                r.stats.passed + r.stats.failed,
                r.stats.failed,
                r.stats.findings
            );
        }
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn reach(n: u64, json: bool) -> CliResult {
    let config = solver_config()?;
    let r = reachability(n, config.state_cap)?;
    if json {
        print_json(&r)?;
    } else {
        println!(
            "states: {}, terminal: {}, acyclic: {}",
            r.state_count,
            r.terminal_states.len(),
            if r.acyclic { "yes" } else { "no" }
        );
        println!("moves (edges): {}", r.edge_count);
        if let (Some(short), Some(long)) = (r.shortest_path, r.longest_path) {
            println!("game length: shortest {short}, longest {long}");
        }
        for t in &r.terminal_states {
            println!("terminal: {t}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn play(n: u64, players: usize, alliances: Option<&str>, human: &str) -> CliResult {
    validate_n(n)?;
    let seating = seating(players, alliances)?;
    let humans = if human.trim().is_empty() {
        Vec::new()
    } else {
        number_list("human", human)?
    };
    if let Some(bad) = humans.iter().find(|&&h| h == 0 || h > players) {
        return Err(CliError::Usage(format!("--human: player {bad} is out of range 1..={players}")));
    }
    let config = solver_config()?;
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut output = io::stdout();
    crate::play::run(n, seating, &humans, config, &mut input as &mut dyn BufRead, &mut output)?;
    Ok(ExitCode::SUCCESS)
}

pub fn serve(port: u16, persist: Option<PathBuf>) -> CliResult {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .try_init();
    let config = solver_config()?;
    let state = match persist {
        Some(path) => zeck_server::AppState::with_persistence(config, path)?,
        None => zeck_server::AppState::new(config),
    };
    let runtime = tokio::runtime::Runtime::new()?;
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    runtime
        .block_on(zeck_server::serve(addr, state))
        .map_err(|e| CliError::Runtime(format!("cannot serve on port {port}: {e}")))?;
    Ok(ExitCode::SUCCESS)
}
