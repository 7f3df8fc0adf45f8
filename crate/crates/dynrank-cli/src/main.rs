//! `dynrank` — replay change logs against the incremental trackers and
//! benchmark maintenance against from-scratch recomputation.
//!
//! Exit codes: 0 success, 1 parse/usage error, 2 invariant breach.

mod bench;
mod engine;
mod logfmt;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynrank::modp::PrimeMode;

use logfmt::{CliError, Mode};

#[derive(Parser)]
#[command(name = "dynrank", version, about = "Incremental rank and dynamic graph queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a change log and print one record per query line
    Run(RunArgs),
    /// Time incremental maintenance against from-scratch elimination
    Bench(BenchArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PrimesOpt {
    /// Shortest prime prefix whose product beats the minor bound (default)
    Product,
    /// All primes up to the cubic bound; many more primes, kept for fidelity
    Paper,
}

impl From<PrimesOpt> for PrimeMode {
    fn from(value: PrimesOpt) -> PrimeMode {
        match value {
            PrimesOpt::Product => PrimeMode::ProductBound,
            PrimesOpt::Paper => PrimeMode::PaperBound,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Change-log file
    log: PathBuf,
    /// Tracker the log drives
    #[arg(long, value_enum)]
    mode: Mode,
    /// Prime-set sizing
    #[arg(long, value_enum, default_value = "product")]
    primes: PrimesOpt,
    /// Seed for the matching tracker's weight draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent weight trials for the matching tracker
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// NFA file (rpq mode)
    #[arg(long)]
    nfa: Option<PathBuf>,
    /// JSON records instead of text
    #[arg(long)]
    json: bool,
    /// Re-verify every maintained invariant after every step (slow)
    #[arg(long)]
    check_invariants: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Change-log file (matrix or reach mode)
    log: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, value_enum, default_value = "product")]
    primes: PrimesOpt,
    /// Bench a single-prime state instead of the full prime set (matrix mode)
    #[arg(long)]
    prime: Option<u64>,
    /// JSON report instead of text
    #[arg(long)]
    json: bool,
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    if args.trials < 1 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let text = read_file(&args.log)?;
    let log = logfmt::parse_log(&text, args.mode)?;
    let nfa = match &args.nfa {
        Some(path) => Some(logfmt::parse_nfa(&read_file(path)?)?),
        None => None,
    };
    let opts = engine::RunOptions {
        primes: args.primes.into(),
        seed: args.seed,
        trials: args.trials,
        nfa,
        json: args.json,
        check_invariants: args.check_invariants,
    };
    for line in engine::run(&log, &opts)? {
        println!("{line}");
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let text = read_file(&args.log)?;
    let log = logfmt::parse_log(&text, args.mode)?;
    let report = bench::bench(&log, args.primes.into(), args.prime)?;
    println!("{}", report.render(args.json));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Run(args) => cmd_run(args),
        Cmd::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
