//! `tfm`: run transfinite machine programs, take halting censuses, sample
//! oracles, and evaluate ordinal expressions.
//!
//! Diverges, undefined and budget-exceeded runs exit 0: they are answers.
//! Usage and parse errors exit 2 with a one-line diagnostic.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use transfinite::machines::{FamilySpec, MachineError};
use transfinite::oracle::Oracle;
use transfinite::ordinal::{parse_ordinal, Ordinal};
use transfinite::programs::{parse_program, Program};
use transfinite::runner::{
    halting_census, monte_carlo, Budget, RunOutcome, Runner, Target,
};

#[derive(Parser)]
#[command(name = "tfm", version, about = "Transfinite machine simulator suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one program and report the outcome with its exact ordinal clock.
    Run(RunArgs),
    /// Run an enumeration prefix of programs and tabulate outcomes.
    Census(CensusArgs),
    /// Estimate halting/output frequency over sampled pseudorandom oracles.
    Sample(SampleArgs),
    /// Evaluate an ordinal expression, or combine two with an operator.
    Ord(OrdArgs),
}

#[derive(Args)]
struct FamilyArg {
    /// Machine family: witrm | itrm | ittm | alpha:<ordinal> | otm.
    #[arg(long)]
    family: String,
}

impl FamilyArg {
    fn parse(&self) -> Result<FamilySpec, CliError> {
        FamilySpec::parse(&self.family).map_err(CliError::from)
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Ordinal clock ceiling, in the ordinal expression grammar.
    #[arg(long, default_value = "w^3")]
    max_time: String,
    /// Event-count guard: successor steps plus limit jumps.
    #[arg(long, default_value_t = 100_000)]
    max_events: u64,
}

impl BudgetArgs {
    fn parse(&self) -> Result<Budget, CliError> {
        let max_time = parse_ordinal(&self.max_time)
            .map_err(|e| CliError(format!("bad --max-time `{}`: {e}", self.max_time)))?;
        if max_time.is_zero() {
            return Err(CliError("--max-time must be positive".to_string()));
        }
        if self.max_events == 0 {
            return Err(CliError("--max-events must be positive".to_string()));
        }
        Ok(Budget::new(max_time, self.max_events))
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    family: FamilyArg,
    /// Program file (.tfm).
    #[arg(long)]
    program: PathBuf,
    /// Oracle descriptor: zero | support:3,5 | periodic:10/01 | rand:SEED |
    /// join(DESC,DESC).
    #[arg(long, default_value = "zero")]
    oracle: String,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the event trace to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Record a full configuration snapshot every N events in the trace.
    #[arg(long, default_value_t = 0)]
    snapshot_every: u64,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    family: FamilyArg,
    /// Number of enumerated programs to run.
    #[arg(long)]
    max_index: u64,
    #[arg(long, default_value = "zero")]
    oracle: String,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    family: FamilyArg,
    #[arg(long)]
    program: PathBuf,
    /// Output description to match, or `any` for any halting run.
    #[arg(long, default_value = "any")]
    target: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct OrdArgs {
    /// Expression, optionally followed by an operator (+ - * ^ cmp pair)
    /// and a second expression.
    #[arg(required = true, num_args = 1..=3)]
    terms: Vec<String>,
}

struct CliError(String);

impl From<MachineError> for CliError {
    fn from(e: MachineError) -> Self {
        CliError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Census(args) => cmd_census(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Ord(args) => cmd_ord(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_program(path: &PathBuf, family: &FamilySpec) -> Result<Program, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read `{}`: {e}", path.display())))?;
    let mut program = parse_program(&text, family.dialect())
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    if program.name.is_empty() {
        if let Some(stem) = path.file_stem() {
            program.name = stem.to_string_lossy().to_string();
        }
    }
    Ok(program)
}

fn parse_oracle(text: &str) -> Result<Oracle, CliError> {
    Oracle::parse(text).map_err(|e| CliError(e.to_string()))
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let family = args.family.parse()?;
    let budget = args.budget.parse()?;
    let program = load_program(&args.program, &family)?;
    let oracle = parse_oracle(&args.oracle)?;
    let runner = Runner {
        snapshot_every: args.snapshot_every,
        ..Runner::default()
    };
    let (outcome, trace) = runner
        .run(&family, &program, &oracle, &budget)
        .map_err(CliError::from)?;
    match &outcome {
        RunOutcome::Halted { time, output } => {
            println!("outcome: halted");
            println!("time: {time}");
            println!("output: {output}");
        }
        RunOutcome::Diverges {
            certificate,
            recurring,
        } => {
            println!("outcome: diverges");
            println!("certificate: {}", certificate.summary());
            println!("recurring: {recurring}");
        }
        RunOutcome::Undefined { time, register } => {
            println!("outcome: undefined");
            println!("time: {time}");
            println!("register: R{register}");
        }
        RunOutcome::BudgetExceeded {
            time_reached,
            snapshot,
        } => {
            println!("outcome: budget-exceeded");
            println!("time-reached: {time_reached}");
            println!("snapshot: {snapshot}");
        }
    }
    if let Some(path) = &args.trace {
        std::fs::write(path, trace.render())
            .map_err(|e| CliError(format!("cannot write `{}`: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_census(args: CensusArgs) -> Result<(), CliError> {
    let family = args.family.parse()?;
    let budget = args.budget.parse()?;
    let oracle = parse_oracle(&args.oracle)?;
    let census =
        halting_census(&family, args.max_index, &oracle, &budget).map_err(CliError::from)?;
    print!("{}", census.render());
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let family = args.family.parse()?;
    let budget = args.budget.parse()?;
    let program = load_program(&args.program, &family)?;
    let target = Target::parse(&args.target);
    let report = monte_carlo(&family, &program, &target, args.seed, args.trials, &budget)
        .map_err(CliError::from)?;
    println!("trials: {}", report.trials);
    println!("halted: {}", report.halted);
    println!("matched: {}", report.matched_target);
    println!("diverged: {}", report.diverged);
    println!("undefined: {}", report.undefined);
    println!("budget-exceeded: {}", report.budget_exceeded);
    println!(
        "frequency: {}/{} = {}",
        report.frequency.numer(),
        report.frequency.denom(),
        report.frequency_decimal(6)
    );
    println!("seed: {}", report.sampler_seed);
    Ok(())
}

fn cmd_ord(args: OrdArgs) -> Result<(), CliError> {
    let parse = |s: &str| -> Result<Ordinal, CliError> {
        parse_ordinal(s).map_err(|e| CliError(format!("bad ordinal `{s}`: {e}")))
    };
    match args.terms.as_slice() {
        [expr] => {
            println!("{}", parse(expr)?);
            Ok(())
        }
        [lhs, op, rhs] => {
            let (a, b) = (parse(lhs)?, parse(rhs)?);
            match op.as_str() {
                "+" => println!("{}", a.add(&b)),
                "*" => println!("{}", a.mul(&b)),
                "^" => println!("{}", a.pow(&b)),
                "-" => match a.sub_left(&b) {
                    Ok(d) => println!("{d}"),
                    Err(e) => return Err(CliError(format!("`{lhs} - {rhs}`: {e}"))),
                },
                "cmp" => println!("{}", match a.cmp(&b) {
                    std::cmp::Ordering::Less => "less",
                    std::cmp::Ordering::Equal => "equal",
                    std::cmp::Ordering::Greater => "greater",
                }),
                "pair" => println!("{}", transfinite::ordinal::goedel_pair(&a, &b)),
                other => {
                    return Err(CliError(format!(
                        "unknown operator `{other}` (expected + - * ^ cmp pair)"
                    )))
                }
            }
            Ok(())
        }
        _ => Err(CliError(
            "ord takes one expression, or two expressions joined by an operator".to_string(),
        )),
    }
}
