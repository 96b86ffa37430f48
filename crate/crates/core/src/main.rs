use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nmtr::experiment::{self, ExperimentConfig, ExperimentError};
use nmtr::problems;
use nmtr::profiles::Measure;

#[derive(Parser)]
#[command(name = "nmtr", version, about = "Nonmonotone trust-region benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `workers` from the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check gradients, the windowed-term recursion and the Cauchy decrease.
    Verify {
        #[arg(long, default_value = "table1")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Print a performance profile computed from a results CSV.
    Profile {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value = "ng")]
        measure: Measure,
    },
    /// List the problems of a suite as JSON.
    Problems {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_VERIFY: u8 = 2;

fn fail(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(EXIT_CONFIG)
}

fn run(config: PathBuf, out: Option<PathBuf>, workers: Option<usize>) -> ExitCode {
    let text = match fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", config.display())),
    };
    let mut cfg = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Some(o) = out {
        cfg.out_dir = o;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    match experiment::run_experiment(&cfg) {
        Ok(summary) => {
            let solved = summary
                .runs
                .iter()
                .filter(|r| r.status == nmtr::Status::Converged)
                .count();
            println!(
                "{} runs, {} converged; results in {}",
                summary.runs.len(),
                solved,
                summary.out_dir.display()
            );
            if !summary.excluded.is_empty() {
                println!(
                    "excluded from profiles (no solver converged): {}",
                    summary.excluded.join(", ")
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn verify(suite: &str, workers: usize) -> ExitCode {
    match experiment::verify(suite, workers) {
        Ok(report) => {
            let _ = report.print(io::stdout().lock());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
        Err(e) => fail(e),
    }
}

fn profile(results: PathBuf, measure: Measure) -> ExitCode {
    let file = match fs::File::open(&results) {
        Ok(f) => f,
        Err(e) => return fail(format!("cannot read {}: {e}", results.display())),
    };
    let rows = match experiment::read_results_csv(file) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    match experiment::write_profile(&rows, measure, io::stdout().lock()) {
        Ok(excluded) => {
            if !excluded.is_empty() {
                eprintln!("excluded (no solver converged): {}", excluded.join(", "));
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn list(suite: &str) -> ExitCode {
    match problems::list_suite(suite)
        .map_err(ExperimentError::from)
        .and_then(|ps| problems::to_json(&ps).map_err(|e| ExperimentError::Config(e.to_string())))
    {
        Ok(json) => {
            println!("{json}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            workers,
        } => run(config, out, workers),
        Command::Verify { suite, workers } => verify(&suite, workers),
        Command::Profile { results, measure } => profile(results, measure),
        Command::Problems { suite } => list(&suite),
    }
}
