use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crepant::kodaira;
use crepant::report::{load_job, render_text, run_classify, run_resolve, JobError, Report};
use crepant::selftest::run_selftest;

/// Resolve isolated non-minimal fibers of elliptic threefolds and
/// classify the exceptional elliptic surfaces.
#[derive(Parser)]
#[command(name = "crepant", version, arg_required_else_help = true)]
struct Cli {
    /// Print the Kodaira classification table and exit.
    #[arg(long, global = true)]
    print_kodaira_table: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Order triples and Kodaira types at the job's points and divisors.
    Classify(JobArgs),
    /// Blow up each isolated (4, 6, 12) point and analyze the resulting
    /// surfaces: fibers, Mordell-Weil data, flops, and model-count bounds.
    Resolve(JobArgs),
    /// Run the built-in regression and property checks.
    Selftest {
        /// Accepted for compatibility; the checks are deterministic and
        /// produce identical output for every seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Print to stdout, tolerating a closed pipe (e.g. `crepant ... | head`).
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

#[derive(Args)]
struct JobArgs {
    /// Path to a JSON job specification.
    #[arg(long)]
    input: PathBuf,
    /// Emit the machine-readable JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Override the job's recursion limit.
    #[arg(long)]
    recursion_limit: Option<u32>,
}

fn run_job(args: &JobArgs, run: fn(&crepant::report::JobSpec) -> Result<Report, JobError>) -> u8 {
    let text = match std::fs::read_to_string(&args.input) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return 2;
        }
    };
    let mut job = match load_job(&text) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Some(limit) = args.recursion_limit {
        job.recursion_limit = limit;
    }
    match run(&job) {
        Ok(report) => {
            if args.json {
                emit(&report.to_json());
                emit("\n");
            } else {
                emit(&render_text(&report));
            }
            report.exit_code() as u8
        }
        Err(e @ JobError::Input(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e @ JobError::Semantic(_)) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.print_kodaira_table {
        emit(&kodaira::table_text());
        return ExitCode::SUCCESS;
    }
    let code = match &cli.command {
        Some(Command::Classify(args)) => run_job(args, run_classify),
        Some(Command::Resolve(args)) => run_job(args, run_resolve),
        Some(Command::Selftest { seed: _ }) => {
            let mut transcript = String::new();
            let ok = run_selftest(&mut transcript);
            emit(&transcript);
            if ok {
                0
            } else {
                1
            }
        }
        None => {
            // Unreachable: arg_required_else_help plus the flag check above.
            eprintln!("error: a subcommand is required");
            2
        }
    };
    ExitCode::from(code)
}
