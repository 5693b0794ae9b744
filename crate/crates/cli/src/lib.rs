//! Library half of the `bops` command-line tool: scenario files and the
//! commands behind each subcommand, kept free of process concerns so they can
//! be tested directly.

pub mod commands;
pub mod scenario;

pub use commands::{CliError, Outcome, EXIT_INPUT, EXIT_OK, EXIT_VERIFY_FAILED};
pub use scenario::{parse_scenario, render, Scenario, ScenarioError};
