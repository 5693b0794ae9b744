use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bops_cli::commands::{self, CandidateOverrides, SimulateArgs};
use bops_cli::{parse_scenario, CliError, Outcome, Scenario, EXIT_INPUT, EXIT_OK};

/// Equilibrium solver, region mapper and fulfilment simulator for
/// buy-online-pick-up-in-store retail.
#[derive(Parser)]
#[command(name = "bops", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the global equilibrium and print it as JSON
    Solve {
        /// Scenario file (`-` for standard input)
        scenario: PathBuf,
    },
    /// Classify a 2-D parameter grid into solution regions (CSV)
    RegionMap {
        scenario: PathBuf,
        /// Horizontal axis as param:lo:hi:steps (param: p, c, c_o, k, M, mu_bar)
        #[arg(long)]
        x: String,
        /// Vertical axis as param:lo:hi:steps
        #[arg(long)]
        y: String,
        /// Output path, `-` for standard output
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Check the closed-form equilibrium against a brute-force grid search
    Verify {
        scenario: PathBuf,
        /// Grid resolution as q_steps:mu_steps
        #[arg(long)]
        grid: Option<String>,
        /// Replace part of the candidate equilibrium, e.g. q=1
        #[arg(long = "override")]
        overrides: Vec<String>,
    },
    /// Run the two-store leftover-sharing simulation
    Simulate {
        /// Probability that unsold stock serves the partner store next week
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 20)]
        weeks: usize,
        /// Base seed; BOPS_SEED overrides it when set
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// leftover-from-store or independent-weekly
        #[arg(long, default_value = "leftover-from-store")]
        rule: String,
        /// Replications; more than one prints summary statistics as JSON
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve { scenario } => emit(commands::solve(&load(&scenario)?)?, Path::new("-")),
        Command::RegionMap { scenario, x, y, out } => {
            let csv = commands::region_map_csv(&load(&scenario)?, &x, &y)?;
            emit(Outcome { text: csv, exit_code: EXIT_OK }, &out)
        }
        Command::Verify { scenario, grid, overrides } => {
            let overrides = CandidateOverrides::parse(&overrides)?;
            let outcome = commands::verify(&load(&scenario)?, grid.as_deref(), &overrides)?;
            emit(outcome, Path::new("-"))
        }
        Command::Simulate { r, weeks, seed, rule, reps, out } => {
            let env = std::env::var("BOPS_SEED").ok();
            let seed = commands::effective_seed(seed, env.as_deref())?;
            let text = commands::simulate_output(&SimulateArgs { r, weeks, seed, rule, reps })?;
            emit(Outcome { text, exit_code: EXIT_OK }, &out)
        }
    }
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
    };
    Ok(parse_scenario(&text)?)
}

fn emit(outcome: Outcome, out: &Path) -> Result<i32, CliError> {
    if out == Path::new("-") {
        io::stdout().lock().write_all(outcome.text.as_bytes())?;
    } else {
        std::fs::write(out, outcome.text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(outcome.exit_code)
}
