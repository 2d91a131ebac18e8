use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aeqs_cli::verify::{run_suite, SUITES};
use aeqs_cli::{run, Algorithm, CliError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "aeqs", version, about = "Learn relations with simulated quantum machine pools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a learning algorithm and emit a JSON run record.
    Run(RunArgs),
    /// Run a property suite: lemma1, lemma2, estimation, counting, maxfind or all.
    Verify { suite: String },
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Builtin relation (all, none, eq, balanced, parity-even, majority) or a relation file.
    #[arg(long)]
    relation: String,
    /// Input length; required for builtin relations.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.9)]
    eta: f64,
    #[arg(long, value_enum, default_value_t = Algorithm::Second)]
    algorithm: Algorithm,
    /// Qubits per machine.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Angle grid resolution D.
    #[arg(long, default_value_t = 4)]
    grid: u32,
    /// Single-qubit gates per design tuple.
    #[arg(long, default_value_t = 1)]
    ltuples: usize,
    /// Design tuples per searched symbol.
    #[arg(long, default_value_t = 1)]
    ldesigns: usize,
    /// Accepting sets to enumerate: sets separated by `;`, indices by `,` (an empty segment is the empty set).
    #[arg(long, default_value = "0;1")]
    sacc: String,
    /// Symbols whose designs are searched, as a string over L01R.
    #[arg(long, default_value = "L01R")]
    symbols: String,
    /// Comma-separated free angles among psi, alpha, theta, beta (or `all`).
    #[arg(long, default_value = "theta")]
    angles: String,
    /// Fourier resolution for amplitude estimation and counting.
    #[arg(long, default_value_t = 1024)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Also write the record to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print per-step state norms and query tallies to stderr.
    #[arg(long)]
    trace: bool,
}

fn parse_sacc(s: &str) -> Result<Vec<BTreeSet<usize>>, CliError> {
    s.split(';')
        .map(|set| {
            set.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| CliError::InvalidConfig(format!("bad accepting index `{t}` in --sacc")))
                })
                .collect()
        })
        .collect()
}

fn parse_angles(s: &str) -> Vec<String> {
    if s == "all" {
        return ["psi", "alpha", "theta", "beta"].map(String::from).to_vec();
    }
    s.split(',').filter(|a| !a.is_empty()).map(String::from).collect()
}

fn run_command(args: RunArgs) -> Result<ExitCode, CliError> {
    let cfg = RunConfig {
        relation: args.relation,
        n: args.n,
        eta: args.eta,
        algorithm: args.algorithm,
        m: args.m,
        grid: args.grid,
        ltuples: args.ltuples,
        ldesigns: args.ldesigns,
        sacc: parse_sacc(&args.sacc)?,
        symbols: args.symbols,
        angles: parse_angles(&args.angles),
        k: args.k,
        seed: args.seed,
        reps: args.reps,
    };
    let record = run(&cfg, args.trace)?;
    let json = record.to_json()?;
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{json}\n")).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }
    println!("{json}");
    Ok(if record.success { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn verify_command(suite: &str) -> Result<ExitCode, CliError> {
    let outcomes = run_suite(suite)?;
    for o in &outcomes {
        println!("{o}");
    }
    Ok(if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
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
            return ExitCode::FAILURE;
        }
    };
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Verify { suite } => verify_command(&suite),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        if matches!(e, CliError::UnknownSuite { .. }) {
            eprintln!("valid suites: {}", SUITES.join(", "));
        }
        ExitCode::FAILURE
    })
}
