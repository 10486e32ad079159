use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ratapprox_tools::config::{Cli, Format};
use ratapprox_tools::error::CliError;
use ratapprox_tools::{execute, requested_format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = requested_format(&cli);
    let result = execute(&cli).and_then(|outcome| {
        match &outcome.output {
            Some(path) => std::fs::write(path, &outcome.rendered)?,
            None => std::io::stdout().write_all(outcome.rendered.as_bytes())?,
        }
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => report_error(&e, format),
    }
}

fn report_error(e: &CliError, format: Format) -> ExitCode {
    if format == Format::Json {
        println!("{}", e.to_json());
    } else {
        eprintln!("error: {e}");
    }
    ExitCode::from(e.exit_code() as u8)
}
