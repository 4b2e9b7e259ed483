//! Command-line front end for `residuum-core`.
//!
//! [`run`] is the whole program; `main` only wires it to the process streams.
//! Exit codes: 0 success, 1 invalid input, 2 numerical non-convergence,
//! 3 a verification report did not meet its expectation. Every failure also
//! writes a JSON error object to the error stream.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::io::Write;

use clap::Parser;

use crate::args::Cli;
use crate::config::{Command, JobConfig};
use crate::error::CliError;

fn fail(err: &CliError, stderr: &mut dyn Write) -> u8 {
    let _ = writeln!(stderr, "{}", format::to_json_string(&err.to_json()));
    err.code.exit_code()
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Option<CliError>, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::validation("config", format!("cannot read {path}: {e}")))?;
            JobConfig::from_json(&text)?
        }
        None => JobConfig::default(),
    };
    let list = cli.apply(&mut cfg)?;
    let command = cfg
        .command
        .ok_or_else(|| CliError::validation("command", "no subcommand given"))?;
    let outcome = match command {
        Command::Winding => commands::winding(&cfg)?,
        Command::Integrate => commands::integrate(&cfg)?,
        Command::Residue => commands::residue(&cfg)?,
        Command::Improper => commands::improper(&cfg)?,
        Command::Verify => commands::verify(&cfg, list)?,
    };
    let body = outcome.rendered.body(cfg.format())?;
    format::write_out(&body, cfg.output.path.as_deref(), stdout)?;
    Ok(outcome.failure)
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let msg = e.render().to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            return fail(&CliError::validation("arguments", first), stderr);
        }
    };
    match execute(&cli, stdout) {
        Ok(None) => 0,
        Ok(Some(failure)) => fail(&failure, stderr),
        Err(e) => fail(&e, stderr),
    }
}
