use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crcount_cli::{applicable, emit, exit, parse_problem, run_count, Algorithm, CliError, Format, RunOptions};

/// Count rational tropical plane curves through points satisfying
/// cross-ratio conditions.
#[derive(Debug, Parser)]
#[command(name = "crcount", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Problem file (JSON).
    problem: PathBuf,
    #[arg(long, value_enum)]
    algorithm: Option<Algorithm>,
    /// Seed for generic data; overrides the seed in the problem file.
    #[arg(long)]
    seed: Option<u64>,
    /// Also report the labeled count divided by the relabeling factor.
    #[arg(long)]
    unlabeled: bool,
    /// Omit the timing field.
    #[arg(long)]
    canonical: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count and print the result (JSON by default).
    Count {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "json")]
        emit: Format,
    },
    /// Validate a problem file and list the algorithms that apply.
    Check { problem: PathBuf },
    /// Count and print one row per counted object.
    List {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Count and export the counted objects (DOT by default).
    Export {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "dot")]
        emit: Format,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn count(run: &RunArgs, format: Format) -> Result<i32, CliError> {
    let problem = parse_problem(&read(&run.problem)?)?;
    let options = RunOptions {
        algorithm: run.algorithm,
        seed: run.seed,
        unlabeled: run.unlabeled,
        canonical: run.canonical,
    };
    let output = run_count(&problem, &options)?;
    print!("{}", emit(&output, format)?);
    if output.report.agrees() {
        Ok(exit::SUCCESS)
    } else {
        for c in &output.report.cross_check {
            if let Some(n) = c.count {
                eprintln!("{}: {n}", c.algorithm);
            }
        }
        eprintln!("cross-check mismatch");
        Ok(exit::MISMATCH)
    }
}

fn check(path: &PathBuf) -> Result<i32, CliError> {
    let problem = parse_problem(&read(path)?)?;
    println!("valid: degree {}, n = {}, {} cross-ratios", problem.degree, problem.n, problem.cross_ratios.len());
    for a in [Algorithm::Floor, Algorithm::LatticePath, Algorithm::Oracle] {
        match applicable(&problem, a) {
            Ok(()) => println!("{a}: applicable"),
            Err(e) => println!("{a}: {e}"),
        }
    }
    Ok(exit::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Count { run, emit } => count(run, *emit),
        Command::Check { problem } => check(problem),
        Command::List { run } => count(run, Format::Listing),
        Command::Export { run, emit } => count(run, *emit),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
