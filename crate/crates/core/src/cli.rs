//! Command-line front end. Exit codes: 0 success, 1 solve or runtime
//! failure, 2 usage or configuration error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, BenchError, HeuristicSpec, PolicySpec};
use crate::cube::{scramble, CubeState, MoveSequence, StateKey};
use crate::heuristic::{DistanceTable, DEFAULT_ENTRY_BUDGET, DEFAULT_TABLE_DEPTH};
use crate::solver::{astar_solve, SearchLimits, SolveError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cubewcd",
    version,
    about = "Rubik's Cube A* solver with the WCD heuristic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an exact distance table by breadth-first search and save it.
    BuildTable {
        #[arg(long)]
        depth: u8,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENTRY_BUDGET)]
        budget: usize,
    },
    /// Print a seeded random scramble and its state key.
    Scramble {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Solve one state with A*.
    Solve(SolveArgs),
    /// Run a benchmark described by a JSON config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write the supervised policy dataset for every state of a table.
    ExportDataset {
        #[arg(long)]
        depth: u8,
        #[arg(long)]
        out: PathBuf,
        /// Shuffle records with this seed instead of sorting them.
        #[arg(long)]
        seed: Option<u64>,
        /// Read the table from a file instead of building it.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HeuristicKindArg {
    Exact,
    Wcd,
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    /// Scramble applied to the solved cube, e.g. "R U f".
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "state",
        required_unless_present = "state"
    )]
    moves: Option<String>,
    /// Start state as a 26-digit hex key.
    #[arg(long)]
    state: Option<String>,
    #[arg(long, value_enum, default_value_t = HeuristicKindArg::Wcd)]
    heuristic: HeuristicKindArg,
    /// Convolution depth (0 for exact, 1 by default for wcd).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = bench::DEFAULT_MU)]
    mu: f64,
    /// uniform, boltzmann[:T] or mlp:PATH.
    #[arg(long, default_value = "uniform")]
    policy: String,
    /// Distance table file; built in memory when absent.
    #[arg(long, conflicts_with = "table_depth")]
    table: Option<PathBuf>,
    #[arg(long)]
    table_depth: Option<u8>,
    #[arg(long)]
    max_nodes: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    max_time: Option<f64>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Runtime(_) => EXIT_FAILURE,
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Config(_) | BenchError::Table(_) | BenchError::Model(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn io_failure(path: &std::path::Path, e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(format!("{}: {e}", path.display()))
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::BuildTable { depth, out, budget } => build_table(depth, out, budget),
        Command::Scramble { depth, seed } => {
            let (state, moves) = scramble(seed, depth);
            println!("scramble: {moves}");
            println!("key: {}", state.canonical_key().to_hex());
            Ok(())
        }
        Command::Solve(args) => solve(args),
        Command::Bench { config } => run_bench(config),
        Command::ExportDataset {
            depth,
            out,
            seed,
            table,
        } => export(depth, out, seed, table),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Runtime(msg)) = &f;
            eprintln!("error: {msg}");
            f.code()
        }
    }
}

fn build_table(depth: u8, out: PathBuf, budget: usize) -> Result<(), Failure> {
    let t0 = Instant::now();
    let table = DistanceTable::build_with_budget(depth, budget)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    table.save(&out).map_err(|e| io_failure(&out, e))?;
    println!("entries: {}", table.len());
    println!("layers: {:?}", table.layer_sizes());
    println!("build_s: {:.3}", t0.elapsed().as_secs_f64());
    Ok(())
}

fn load_table(path: Option<&PathBuf>, depth: Option<u8>) -> Result<Arc<DistanceTable>, Failure> {
    let table = match path {
        Some(p) => {
            DistanceTable::load(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => DistanceTable::build(depth.unwrap_or(DEFAULT_TABLE_DEPTH))
            .map_err(|e| Failure::Runtime(e.to_string()))?,
    };
    Ok(Arc::new(table))
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let start = match (&args.moves, &args.state) {
        (Some(m), None) => {
            let seq: MoveSequence = m
                .parse()
                .map_err(|e| Failure::Usage(format!("--moves: {e}")))?;
            seq.apply_to(&CubeState::SOLVED)
        }
        (None, Some(hex)) => {
            let key =
                StateKey::from_hex(hex).map_err(|e| Failure::Usage(format!("--state: {e}")))?;
            CubeState::from_key(key).map_err(|e| Failure::Usage(format!("--state: {e}")))?
        }
        _ => {
            return Err(Failure::Usage(
                "give exactly one of --moves or --state".into(),
            ))
        }
    };
    let policy: PolicySpec = args
        .policy
        .parse()
        .map_err(|e: BenchError| Failure::Usage(e.to_string()))?;
    let spec = match args.heuristic {
        HeuristicKindArg::Exact => {
            if args.k.is_some_and(|k| k != 0) {
                return Err(Failure::Usage(
                    "--heuristic exact takes no --k (or --k 0)".into(),
                ));
            }
            HeuristicSpec::exact()
        }
        HeuristicKindArg::Wcd => HeuristicSpec::wcd(args.k.unwrap_or(1), args.mu, policy),
    };
    let mut limits = SearchLimits::default();
    if let Some(n) = args.max_nodes {
        limits.max_closed_nodes = n;
    }
    if let Some(t) = args.max_time {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage("--max-time must be positive".into()));
        }
        limits.max_time = Duration::from_secs_f64(t);
    }
    let limits = SearchLimits::new(limits.max_closed_nodes, limits.max_time)
        .map_err(|e| Failure::Usage(e.to_string()))?;

    let table = load_table(args.table.as_ref(), args.table_depth)?;
    let heuristic = spec.build(&table)?;
    match astar_solve(&start, &heuristic, limits) {
        Ok(sol) => {
            println!("solution: {}", sol.moves);
            println!("length: {}", sol.length());
            println!("searched_nodes: {}", sol.searched_nodes);
            println!("time_s: {:.6}", sol.elapsed.as_secs_f64());
            println!("heuristic: {}", sol.heuristic);
            Ok(())
        }
        Err(SolveError::InvalidStart(v)) => {
            Err(Failure::Usage(format!("invalid start state: {v}")))
        }
        Err(e) => Err(Failure::Runtime(e.to_string())),
    }
}

fn run_bench(config: PathBuf) -> Result<(), Failure> {
    let cfg = BenchConfig::load(&config)?;
    let report = bench::run_bench(&cfg)?;
    report.write_outputs(&cfg.output)?;
    print!("{}", report.format_table());
    Ok(())
}

fn export(
    depth: u8,
    out: PathBuf,
    seed: Option<u64>,
    table: Option<PathBuf>,
) -> Result<(), Failure> {
    let table = match table {
        Some(p) => {
            let t = load_table(Some(&p), None)?;
            if t.max_depth() != depth {
                return Err(Failure::Usage(format!(
                    "{} has depth {}, not {depth}",
                    p.display(),
                    t.max_depth()
                )));
            }
            t
        }
        None => load_table(None, Some(depth))?,
    };
    let file = File::create(&out).map_err(|e| io_failure(&out, e))?;
    let mut w = BufWriter::new(file);
    let n = bench::export_dataset(&table, seed, &mut w)?;
    w.flush().map_err(|e| io_failure(&out, e))?;
    println!("records: {n}");
    Ok(())
}
