use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use mpnc_harness::plan::{plan, PlanInput};
use mpnc_harness::report::{read_csv, to_csv_string};
use mpnc_harness::{run_experiment, table1, ExperimentConfig};

#[derive(Parser)]
#[command(name = "mpnc", version, about = "Coded multipath streaming experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every sweep point of a config and print the CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Root seed; run i uses seed + i.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        runs: Option<u32>,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the code rate bound and buffer minima for two paths.
    Plan {
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        /// Path 1 rate in packets per second.
        #[arg(long)]
        r1: f64,
        /// Path 2 rate in packets per second.
        #[arg(long)]
        r2: f64,
        /// Delay difference in seconds.
        #[arg(long = "delta-d")]
        delta_d: f64,
        #[arg(long)]
        we: u64,
        #[arg(long)]
        g: u64,
        /// Code rate R.
        #[arg(long)]
        rate: f64,
    },
    /// Highest code rate per curve whose mean loss meets the threshold.
    Table1 {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run { config, seed, runs, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(runs) = runs {
                anyhow::ensure!(runs >= 1, "--runs must be at least 1");
                cfg.runs = runs;
            }
            let rows = run_experiment(&cfg)?;
            let text = to_csv_string(&rows);
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
        }
        Command::Plan {
            eps1,
            eps2,
            r1,
            r2,
            delta_d,
            we,
            g,
            rate,
        } => {
            let report = plan(&PlanInput {
                eps1,
                eps2,
                r1,
                r2,
                delta_d,
                w_e: we,
                g,
                rate,
            })?;
            print!("{report}");
        }
        Command::Table1 { csv, threshold } => {
            let file = File::open(&csv).with_context(|| format!("opening {}", csv.display()))?;
            let rows = read_csv(BufReader::new(file))?;
            print!("{}", table1::render(&table1::extract(&rows, threshold), threshold));
        }
    }
    Ok(())
}
