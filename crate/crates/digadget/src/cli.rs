//! Command-line interface: instance generation, oracle checks, exhaustive
//! verification, and budget sweeps.
//!
//! Every command is a deterministic function of its flags and seeds, so
//! repeated invocations produce byte-identical output. Exit codes: 0 on
//! success (and on clean verification), 1 when verification finds a
//! mismatch, 2 on usage or parse errors.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::algo::SampledIndex;
use crate::gadget::{BitVector, GadgetInstance, IndexInstance, Property};
use crate::instance_file::{InstanceFile, ParseError};
use crate::protocol::{estimate_success, exhaustive_verify, CoinMode, EXHAUSTIVE_M_LIMIT};
use crate::stream::{StreamOrder, StreamingAlgorithm};

#[derive(Debug, Parser)]
#[command(
    name = "digadget",
    version,
    about = "Index-encoding gadget graphs and one-pass streaming simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance file from (x, i)
    Gen(GenArgs),
    /// Exhaustively verify oracle and protocol agreement at small m
    Verify(VerifyArgs),
    /// Run the exact oracle on an instance file
    Check(CheckArgs),
    /// Estimate success rates across memory budgets and emit CSV
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Property the instance encodes: acyc, sc, or reach
    #[arg(long, value_parser = Property::from_str)]
    property: Property,
    /// Bit-vector length
    #[arg(long)]
    m: usize,
    /// Queried position, 0-based
    #[arg(long)]
    i: usize,
    /// Explicit bit-vector, e.g. 001011010 (length must equal m)
    #[arg(long, conflicts_with = "seed")]
    x: Option<String>,
    /// Draw the bit-vector uniformly at random from this seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Property to verify: acyc, sc, or reach
    #[arg(long, value_parser = Property::from_str)]
    property: Property,
    /// Bit-vector length; all 2^m * m cases are checked
    #[arg(long)]
    m: usize,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Instance file to check
    file: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Property to sweep: acyc, sc, or reach
    #[arg(long, value_parser = Property::from_str)]
    property: Property,
    /// Bit-vector length
    #[arg(long)]
    m: usize,
    /// Comma-separated memory budgets in bits, e.g. 0,16,32,64
    #[arg(long, default_value = "")]
    budgets: String,
    /// Trials per budget (at least 100)
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Master seed; trials derive their own seeds from it by counter
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coin mode: shared or private
    #[arg(long, value_parser = CoinMode::from_str, default_value = "shared")]
    coins: CoinMode,
    /// Stream order within segments: canonical or shuffled
    #[arg(long, value_parser = StreamOrder::from_str, default_value = "canonical")]
    order: StreamOrder,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {err}")]
    Parse { path: String, err: ParseError },
    #[error("cannot {action} {path}: {source}")]
    Io { action: &'static str, path: String, source: std::io::Error },
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

/// Runs a parsed command line and maps the outcome to an exit code.
pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Check(args) => cmd_check(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|source| CliError::Io {
            action: "write",
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, CliError> {
    if args.m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    let x = match (&args.x, args.seed) {
        (Some(text), None) => {
            let x: BitVector = text.parse().map_err(|e| usage(format!("--x: {e}")))?;
            if x.len() != args.m {
                return Err(usage(format!(
                    "--x has {} bits but --m is {}",
                    x.len(),
                    args.m
                )));
            }
            x
        }
        (None, Some(seed)) => {
            BitVector::random(args.m, &mut ChaCha12Rng::seed_from_u64(seed))
        }
        (None, None) => return Err(usage("provide the bit-vector with --x or --seed")),
        (Some(_), Some(_)) => unreachable!("clap rejects --x together with --seed"),
    };
    let inst = IndexInstance::new(x, args.i).map_err(|e| usage(e.to_string()))?;
    let gadget = GadgetInstance::build(args.property, &inst);
    let file = InstanceFile::from_instance(&gadget);
    write_output(&args.out, &file.render())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    if !(1..=EXHAUSTIVE_M_LIMIT).contains(&args.m) {
        return Err(usage(format!("--m must be in 1..={EXHAUSTIVE_M_LIMIT} for exhaustive runs")));
    }
    let report = exhaustive_verify(args.property, args.m);
    println!(
        "verify {} m={}: {} cases, {} oracle mismatches, {} protocol mismatches",
        report.property,
        report.m,
        report.cases,
        report.oracle_mismatches,
        report.protocol_mismatches
    );
    for failure in &report.failures {
        println!("  {failure}");
    }
    Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, CliError> {
    let path = args.file.display().to_string();
    let text = fs::read_to_string(&args.file).map_err(|source| CliError::Io {
        action: "read",
        path: path.clone(),
        source,
    })?;
    let file = InstanceFile::parse(&text).map_err(|err| CliError::Parse { path, err })?;
    let graph = file
        .graph()
        .map_err(|e| usage(format!("instance graph is inconsistent: {e}")))?;
    let (label, verdict) = match file.property {
        Property::Acyclicity => ("acyclic", graph.is_acyclic()),
        Property::StrongConnectivity => ("strongly_connected", graph.is_strongly_connected()),
        Property::ReachabilityFromS => {
            let s = file.s.expect("parser guarantees reachability files carry s");
            ("reaches_all", graph.reaches_all(s).map_err(|e| usage(e.to_string()))?)
        }
    };
    println!("{label}: {verdict}");
    Ok(ExitCode::SUCCESS)
}

fn parse_budgets(text: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|token| {
            token
                .trim()
                .parse()
                .map_err(|_| usage(format!("--budgets: invalid entry {token:?}")))
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str =
    "property,m,budget_bits,trials,successes,rate,ci95,epsilon_hat,max_message_bits,seed";

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    if args.m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    if args.trials < 100 {
        return Err(usage("--trials must be at least 100"));
    }
    let budgets = parse_budgets(&args.budgets)?;
    let factory =
        |budget: usize| Box::new(SampledIndex::new(budget)) as Box<dyn StreamingAlgorithm>;
    let mut csv = String::new();
    writeln!(csv, "{SWEEP_CSV_HEADER}").unwrap();
    for budget in budgets {
        let estimate = estimate_success(
            &factory,
            args.property,
            args.m,
            budget,
            args.trials,
            args.coins,
            args.order,
            args.seed,
        )
        .map_err(|e| usage(format!("sweep failed at budget {budget}: {e}")))?;
        if estimate.budget_violations > 0 {
            eprintln!(
                "warning: {} trials exceeded the {budget}-bit budget",
                estimate.budget_violations
            );
        }
        writeln!(
            csv,
            "{},{},{},{},{},{:.6},{:.6},{:.6},{},{}",
            args.property,
            args.m,
            budget,
            estimate.trials,
            estimate.successes,
            estimate.rate(),
            estimate.ci95_halfwidth(),
            estimate.epsilon_hat(),
            estimate.max_message_bits,
            args.seed
        )
        .unwrap();
    }
    write_output(&args.out, &csv)?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_lists_parse() {
        assert_eq!(parse_budgets("").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_budgets("0,16,32,64").unwrap(), vec![0, 16, 32, 64]);
        assert_eq!(parse_budgets(" 8 , 9 ").unwrap(), vec![8, 9]);
        assert!(parse_budgets("8,x").is_err());
    }

    #[test]
    fn cli_parses_a_gen_command() {
        let cli = Cli::try_parse_from([
            "digadget", "gen", "--property", "acyc", "--m", "9", "--i", "5", "--x", "001011010",
        ])
        .unwrap();
        match cli.command {
            Command::Gen(args) => {
                assert_eq!(args.property, Property::Acyclicity);
                assert_eq!((args.m, args.i), (9, 5));
                assert_eq!(args.x.as_deref(), Some("001011010"));
            }
            other => panic!("parsed into {other:?}"),
        }
    }

    #[test]
    fn cli_rejects_x_with_seed() {
        let result = Cli::try_parse_from([
            "digadget", "gen", "--property", "acyc", "--m", "4", "--i", "0", "--x", "0000",
            "--seed", "3",
        ]);
        assert!(result.is_err());
    }
}
