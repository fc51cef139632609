//! `chipgame` command-line tool.

mod commands;
mod play;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use chipgame::solver::DominationMode;
use chipgame::SolverConfig;

#[derive(Parser)]
#[command(name = "chipgame", version, about = "Solve and certify Pusher/Remover chip games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one game and optionally export its closures.
    Solve {
        #[arg(long, short = 'g')]
        gamma: u32,
        /// Column sizes, e.g. 3,3,3,3.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        winning_out: Option<std::path::PathBuf>,
        #[arg(long)]
        losing_out: Option<std::path::PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Paintability of a complete multipartite graph with the given parts.
    Paint {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// First threshold tried.
        #[arg(long)]
        low: Option<u32>,
        /// Last threshold tried.
        #[arg(long)]
        high: Option<u32>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check a closure file.
    Verify {
        #[arg(long)]
        file: std::path::PathBuf,
        /// Report every bad state, not just the first.
        #[arg(long)]
        scan_all: bool,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
    },
    /// Play the brick strategy against Remover policies.
    BrickSim {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = RemoverKind::Random)]
        remover: RemoverKind,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Round-by-round log of every trial.
        #[arg(long)]
        transcript: Option<std::path::PathBuf>,
    },
    /// Bounds on the online panchromatic coloring threshold.
    Bounds {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
    },
    /// Solve the symmetric game with `n` labels and `r` columns.
    SymSolve {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        nodes: Option<u64>,
        /// Play the matching hypergraph coloring game and log it.
        #[arg(long)]
        transcript: Option<std::path::PathBuf>,
    },
    /// Compare the solver against direct Lister/Painter search.
    OracleCheck {
        #[arg(long, default_value_t = chipgame::oracle::DEFAULT_VERTEX_LIMIT)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        max_r: u32,
        /// Also compare against the search without symmetry reduction.
        #[arg(long)]
        unreduced: bool,
    },
    /// Play a game against the engine on stdin.
    Play {
        #[arg(long, short = 'g')]
        gamma: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Side taken by the human.
        #[arg(long = "as", value_enum, default_value_t = Side::Pusher)]
        side: Side,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Give up after expanding this many states.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    nodes: Option<u64>,
    /// Give up once this many states are stored.
    #[arg(long, value_parser = parse_positive)]
    max_states: Option<usize>,
    /// Give up after this many seconds.
    #[arg(long, value_parser = parse_seconds)]
    time_limit: Option<Duration>,
    #[arg(long)]
    no_prune_pusher: bool,
    #[arg(long)]
    no_prune_remover: bool,
    #[arg(long, value_enum, default_value_t = Domination::Neighbors)]
    domination: Domination,
    /// Keep only minimal losing and maximal winning states.
    #[arg(long)]
    compact: bool,
    #[arg(long, default_value_t = 1, value_parser = parse_positive)]
    threads: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            prune_pusher: !self.no_prune_pusher,
            prune_remover: !self.no_prune_remover,
            domination: match self.domination {
                Domination::Off => DominationMode::Off,
                Domination::Neighbors => DominationMode::Neighbors,
                Domination::Scan => DominationMode::Scan,
            },
            compact: self.compact,
            node_budget: self.nodes,
            max_entries: self.max_states,
            time_limit: self.time_limit,
            threads: self.threads,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum Domination {
    Off,
    Neighbors,
    Scan,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum RemoverKind {
    Exhaustive,
    Random,
    Greedy,
    RoundRobin,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Side {
    Pusher,
    Remover,
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if !(secs > 0.0 && secs.is_finite()) {
        return Err("must be a positive number of seconds".into());
    }
    Ok(Duration::from_secs_f64(secs))
}

/// Exit statuses.
pub const OK: u8 = 0;
pub const USAGE: u8 = 1;
pub const REJECTED: u8 = 2;
pub const INCONCLUSIVE: u8 = 3;

/// What a command leaves behind: an exit status and the summary object.
pub struct Report {
    pub status: u8,
    pub summary: serde_json::Value,
}

/// A command that stopped early.
pub struct Failure {
    pub status: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl ToString) -> Self {
        Self { status: USAGE, message: message.to_string() }
    }

    pub fn inconclusive(message: impl ToString) -> Self {
        Self { status: INCONCLUSIVE, message: message.to_string() }
    }
}

impl From<chipgame::SolveError> for Failure {
    fn from(e: chipgame::SolveError) -> Self {
        match e {
            chipgame::SolveError::Game(g) => Failure::usage(g),
            other => Failure::inconclusive(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e)
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Solve { .. } => "solve",
        Command::Paint { .. } => "paint",
        Command::Verify { .. } => "verify",
        Command::BrickSim { .. } => "brick-sim",
        Command::Bounds { .. } => "bounds",
        Command::SymSolve { .. } => "sym-solve",
        Command::OracleCheck { .. } => "oracle-check",
        Command::Play { .. } => "play",
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<Report, Failure> {
    match cmd {
        Command::Solve { gamma, sizes, winning_out, losing_out, solver } => {
            commands::solve(out, gamma, &sizes, winning_out.as_deref(), losing_out.as_deref(), &solver.config())
        }
        Command::Paint { sizes, low, high, solver } => commands::paint(out, &sizes, low, high, &solver.config()),
        Command::Verify { file, scan_all, threads } => commands::verify(out, &file, scan_all, threads as usize),
        Command::BrickSim { m, k, remover, trials, seed, transcript } => {
            commands::brick_sim(out, m, k, remover, trials, seed, transcript.as_deref())
        }
        Command::Bounds { k, r } => commands::bounds(out, k, r),
        Command::SymSolve { k, n, r, nodes, transcript } => commands::sym_solve(out, k, n, r, nodes, transcript.as_deref()),
        Command::OracleCheck { max_vertices, max_r, unreduced } => {
            commands::oracle_check(out, max_vertices, max_r, unreduced)
        }
        Command::Play { gamma, sizes, side, solver } => {
            let mut config = solver.config();
            config.threads = 1;
            let stdin = io::stdin();
            play::play(&mut stdin.lock(), out, gamma, &sizes, side == Side::Pusher, config)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            println!("{}", json!({ "status": "usage_error" }));
            return ExitCode::from(USAGE);
        }
    };
    let command = name(&cli.command);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = match run(cli.command, &mut out) {
        Ok(mut report) => {
            if let Some(obj) = report.summary.as_object_mut() {
                obj.insert("command".into(), command.into());
                obj.insert("exit".into(), report.status.into());
            }
            let _ = writeln!(out, "{}", report.summary);
            report.status
        }
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            let _ = writeln!(out, "{}", json!({ "command": command, "exit": f.status, "error": f.message }));
            f.status
        }
    };
    let _ = out.flush();
    ExitCode::from(status)
}
