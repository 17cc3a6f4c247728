use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use safegrasp::experiment::{
    report, run_bench, run_experiment, BenchSuite, ExperimentConfig, ExperimentResult, ReportFormat,
};
use safegrasp::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "safegrasp", version, about = "Robust Bayesian optimization of grasp poses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment described by a `key = value` config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the master seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of parallel runs.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run a predefined suite of experiments.
    Bench {
        #[arg(long, value_parser = ["safe-synthetic", "planar-grasp"])]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Summarize experiment outputs found in a directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = ["csv", "md"])]
        format: String,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_numerical() => EXIT_NUMERICAL,
        Error::Io { .. } | Error::Input(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn print_result(r: &ExperimentResult) {
    let c = &r.config;
    match r.aggregate.final_row() {
        Some(f) => println!(
            "{}: {} runs, final ymc_mean {:.4} ± {:.4}, ymc_std {:.4} ± {:.4} -> {}",
            c.label(),
            r.completed.len(),
            f.ymc_mean,
            f.ymc_mean_ci95,
            f.ymc_std_mean,
            f.ymc_std_ci95,
            c.output_dir.display()
        ),
        None => println!("{}: no completed runs -> {}", c.label(), c.output_dir.display()),
    }
    for f in &r.failed {
        eprintln!("run {} (seed {}) failed: {}", f.run_id, f.seed, f.message);
    }
}

fn execute(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Run {
            config,
            seed,
            workers,
        } => {
            let mut c = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                c.seed = s;
            }
            if let Some(w) = workers {
                c.workers = w;
            }
            c.validate()?;
            let r = run_experiment(&c)?;
            print_result(&r);
            Ok(if r.failed.is_empty() { 0 } else { EXIT_NUMERICAL })
        }
        Command::Bench {
            suite,
            out,
            seed,
            workers,
        } => {
            if workers == 0 {
                return Err(Error::Config("workers must be at least 1".into()));
            }
            let results = run_bench(suite.parse::<BenchSuite>()?, &out, seed, workers)?;
            results.iter().for_each(print_result);
            let failed = results.iter().any(|r| !r.failed.is_empty());
            Ok(if failed { EXIT_NUMERICAL } else { 0 })
        }
        Command::Report { input, format } => {
            for p in report(&input, format.parse::<ReportFormat>()?)? {
                println!("{}", p.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
