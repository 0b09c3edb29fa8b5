mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{CliError, Outcome, EXIT_IO, EXIT_OK, EXIT_PARSE, EXIT_USAGE};
use config::{Cli, Command, Output};
use output::{emit, write_atomic};

fn finish(out: &Output, outcome: &Outcome) -> Result<i32, CliError> {
    emit(out.out.as_deref(), &outcome.table.render(out.format)).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(outcome.code)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eqm(a) => finish(&a.output, &commands::cmd_eqm(&a)?),
        Command::Compare(a) => finish(&a.output, &commands::cmd_compare(&a)?),
        Command::Conjecture(a) => finish(&a.output, &commands::cmd_conjecture(&a)?),
        Command::Project(a) => {
            let (outcome, approx) = commands::cmd_project(&a)?;
            if let (Some(path), Some(json)) = (&a.approx, approx) {
                write_atomic(path, &json).map_err(|e| CliError::Io(e.to_string()))?;
            }
            finish(&a.output, &outcome)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidValue | ErrorKind::ValueValidation => EXIT_PARSE,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            debug_assert!(code != EXIT_OK && code <= EXIT_IO);
            ExitCode::from(code as u8)
        }
    }
}
