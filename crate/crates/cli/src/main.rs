use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use toric_wall_cli::catalog::{self, CATALOG};
use toric_wall_cli::driver::{error_outcome, CliError};
use toric_wall_cli::problem::{check_prime_bits, parse_file, ParseError};
use toric_wall_cli::{run, Command, Format, ProblemFile, Report, Status};

#[derive(Parser)]
#[command(
    name = "toric-wall",
    version,
    about = "Bondal-Orlov transforms across toric wall crossings"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate both stability conditions and describe the wall
    Analyze(Input),
    /// Fixed points, isotropy groups, character lifts and Euler classes
    FixedPoints(Input),
    /// Images of every basis vector under BO_k
    Bo(WithK),
    /// Matrices of BO_k at random specializations
    Matrix(WithK),
    /// The spherical twist around the k-th twisted exceptional locus
    Twist(WithK),
    /// Run the full identity suite
    Verify(Input),
    /// List the example catalog, or verify all of it with --run
    Examples {
        #[arg(long)]
        run: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Input {
    /// Problem file (JSON)
    file: Option<PathBuf>,
    /// Use a catalog example instead of a file
    #[arg(long, conflicts_with = "file")]
    example: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct WithK {
    /// Twist index
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct Overrides {
    /// Seed for primes and specialization points
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random specializations
    #[arg(long)]
    specializations: Option<usize>,
    /// Size of the random primes, 8 to 62
    #[arg(long)]
    prime_bits: Option<i64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Machine,
}

impl Overrides {
    fn format(&self) -> Format {
        match self.format {
            OutputFormat::Human => Format::Human,
            OutputFormat::Machine => Format::Machine,
        }
    }

    fn apply(&self, p: &mut ProblemFile) -> Result<(), CliError> {
        if let Some(s) = self.seed {
            p.options.seed = s;
        }
        if let Some(n) = self.specializations {
            if n == 0 {
                return Err(flag_error("specializations", "must be at least 1".into()));
            }
            p.options.specializations = n;
        }
        if let Some(b) = self.prime_bits {
            p.options.prime_bits = check_prime_bits(b).map_err(|m| flag_error("prime-bits", m))?;
        }
        Ok(())
    }
}

fn flag_error(flag: &str, message: String) -> CliError {
    ParseError {
        line: None,
        field: Some(format!("--{flag}")),
        message,
    }
    .into()
}

fn load(input: &Input) -> Result<ProblemFile, CliError> {
    let mut p = match (&input.file, &input.example) {
        (_, Some(name)) => catalog::find(name)
            .map(|e| e.problem())
            .ok_or_else(|| flag_error("example", format!("no catalog example named {name}")))?,
        (Some(path), None) => parse_file(path)?,
        (None, None) => {
            return Err(flag_error(
                "file",
                "give a problem file or --example".into(),
            ))
        }
    };
    input.overrides.apply(&mut p)?;
    Ok(p)
}

fn emit(report: &Report, format: Format, status: Status) -> ExitCode {
    print!("{}", report.render(format));
    if let Some(err) = report.tree.get("error") {
        let mut place = Vec::new();
        if let Some(l) = err.get("line") {
            place.push(format!("line {l}"));
        }
        if let Some(f) = err.get("field").and_then(Value::as_str) {
            place.push(format!("field `{f}`"));
        }
        let message = err["message"].as_str().unwrap_or("unknown");
        if place.is_empty() {
            eprintln!("error: {message}");
        } else {
            eprintln!("error: {}: {message}", place.join(", "));
        }
    }
    ExitCode::from(status.code() as u8)
}

fn run_input(command: Command, input: &Input) -> ExitCode {
    let format = input.overrides.format();
    let outcome = match load(input) {
        Ok(p) => run(&command, &p),
        Err(e) => error_outcome(command.name(), None, &e),
    };
    emit(&outcome.report, format, outcome.status)
}

fn examples(run_all: bool, overrides: &Overrides) -> ExitCode {
    let format = overrides.format();
    if !run_all {
        let rows: Vec<Value> = CATALOG
            .iter()
            .map(|e| {
                let p = e.problem();
                json!({ "name": e.name, "rank": p.rank, "characters": p.characters.len(), "file": e.file, "description": e.description })
            })
            .collect();
        return emit(
            &Report::new(json!({ "examples": rows })),
            format,
            Status::Pass,
        );
    }
    let mut status = Status::Pass;
    let mut reports = Vec::new();
    for e in &CATALOG {
        let mut p = e.problem();
        let outcome = match overrides.apply(&mut p) {
            Ok(()) => run(&Command::Verify, &p),
            Err(err) => error_outcome("verify", Some(e.name), &err),
        };
        status = status.combine(outcome.status);
        reports.push(outcome.report.tree);
    }
    emit(&Report::new(json!({ "runs": reports })), format, status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Cmd::Analyze(i) => run_input(Command::Analyze, i),
        Cmd::FixedPoints(i) => run_input(Command::FixedPoints, i),
        Cmd::Bo(w) => run_input(Command::Bo { k: w.k }, &w.input),
        Cmd::Matrix(w) => run_input(Command::Matrix { k: w.k }, &w.input),
        Cmd::Twist(w) => run_input(Command::Twist { k: w.k }, &w.input),
        Cmd::Verify(i) => run_input(Command::Verify, i),
        Cmd::Examples { run, overrides } => examples(*run, overrides),
    }
}
