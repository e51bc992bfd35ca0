use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use newq_harness::report::write_json;
use newq_harness::runner::MethodSpec;
use newq_harness::table1::{run_table1, Way, TABLE1_SEED};
use newq_harness::{config, poisson, sweep};
use std::path::PathBuf;
use std::process::ExitCode;

/// Experiment runner for the newq solvers.
#[derive(Parser)]
#[command(name = "newq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RetractionArg {
    Way1,
    Way2,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Run the three unit-sphere eigenvector experiments across all five
    /// methods and print the result tables.
    Table1 {
        /// Which sphere retraction to use.
        #[arg(long, value_enum, default_value = "both")]
        retraction: RetractionArg,
        /// Directory for per-run trace CSVs, the table text and a JSON
        /// summary.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify the table against the published endpoints; exits with
        /// code 2 on mismatch.
        #[arg(long)]
        check: bool,
        /// Seed for shift values and the damped-Newton baseline.
        #[arg(long, default_value_t = TABLE1_SEED)]
        seed: u64,
    },
    /// Run a basin-of-attraction sweep and print outcome fractions.
    Sweep {
        /// `quadratic_saddle` or `sphere_ex2`.
        #[arg(long)]
        objective: String,
        #[arg(long)]
        method: String,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Directory for the CSV histogram and JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the discrete Poisson energy and compare against direct
    /// elimination.
    Poisson {
        #[arg(long)]
        n: usize,
        /// Source term: `sin_pi`, `one` or `zero`.
        #[arg(long)]
        g: String,
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a single experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Table1 {
            retraction,
            out,
            check,
            seed,
        } => {
            let ways: &[Way] = match retraction {
                RetractionArg::Way1 => &[Way::One],
                RetractionArg::Way2 => &[Way::Two],
                RetractionArg::Both => &[Way::One, Way::Two],
            };
            let mut mismatches = Vec::new();
            for way in ways {
                let table = run_table1(*way, seed, out.as_deref())?;
                print!("{}", table.render());
                println!();
                if let Some(dir) = &out {
                    std::fs::create_dir_all(dir)?;
                    std::fs::write(
                        dir.join(format!("table1_{}.txt", way.name())),
                        table.render(),
                    )?;
                    write_json(&dir.join(format!("table1_{}.json", way.name())), &table)?;
                }
                if check {
                    mismatches.extend(table.self_check());
                }
            }
            if check {
                if mismatches.is_empty() {
                    println!("self-check: all asserted endpoints reproduced");
                } else {
                    for m in &mismatches {
                        eprintln!("self-check mismatch: {m}");
                    }
                    return Ok(ExitCode::from(2));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            objective,
            method,
            samples,
            seed,
            out,
        } => {
            let spec = MethodSpec::parse(&method)?;
            let report = sweep::run_sweep(&objective, spec, samples, seed)?;
            print!("{}", report.to_csv());
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
                let base = format!("sweep_{}_{}", report.objective, report.method);
                std::fs::write(dir.join(format!("{base}.csv")), report.to_csv())?;
                write_json(&dir.join(format!("{base}.json")), &report)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Poisson {
            n,
            g,
            method,
            seed,
            out,
        } => {
            let spec = MethodSpec::parse(&method)?;
            let report = poisson::run_poisson(n, &g, spec, seed)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some(dir) = &out {
                write_json(
                    &dir.join(format!("poisson_n{}_{}_{}.json", n, g, report.method)),
                    &report,
                )?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { config: path } => {
            let cfg = config::load_config(&path)?;
            config::execute(&cfg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
