use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use relaynet_cli::{run, Cli, CliError, EXIT_INTERNAL};

fn emit(text: &str) -> io::Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    out.flush()
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let outcome = match run(&cli, argv) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = match &outcome.summary {
        Some(line) => line.clone(),
        None => match serde_json::to_string_pretty(&outcome.report) {
            Ok(json) => json,
            Err(e) => {
                eprintln!("error: {}", CliError::from(e));
                return ExitCode::from(EXIT_INTERNAL);
            }
        },
    };
    match emit(&text) {
        // A closed reader (e.g. `| head`) is not an error of ours.
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTERNAL)
        }
        _ => ExitCode::from(outcome.exit),
    }
}
