mod args;
mod commands;
mod config;
mod error;
mod report;
mod sweep;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::config::RunConfig;
use crate::error::CliError;

fn run(cli: Cli) -> Result<bool, CliError> {
    let out = cli.common.out.clone();
    let config = RunConfig::resolve(cli)?;
    let outcome = commands::run(&config)?;
    let bytes = report::render(&config, &outcome)?;
    report::emit(&bytes, out.as_deref())?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    Ok(outcome.partial_failure)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: some rows failed; see the report");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
