use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lmmse_snr_cli::{execute, manifest_path, write_atomic, Cli, CliError, CliResult};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmmse-snr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let outcome = execute(cli)?;
    let manifest =
        serde_json::to_string_pretty(&outcome.manifest).map_err(|e| CliError::Io(e.into()))?;
    match &outcome.out {
        Some(path) => {
            write_atomic(path, outcome.body.as_bytes())?;
            write_atomic(&manifest_path(path), format!("{manifest}\n").as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(outcome.body.as_bytes())?;
            eprintln!("{manifest}");
        }
    }
    Ok(())
}
