//! Command-line front end of `ratapprox-core`: argument parsing, the
//! reference data of the published tables, and text, JSON and CSV reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod published;
pub mod report;

use config::{Cli, Command, Format, RunConfig, SubcommandName};
use error::CliError;
use report::{render, Report};

/// Rendered output of one run.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub rendered: String,
    /// `false` when the run finished but some row or check failed.
    pub ok: bool,
    pub output: Option<std::path::PathBuf>,
}

fn finish<R: Report>(report: &R, cfg: &RunConfig) -> Result<Outcome, CliError> {
    Ok(Outcome {
        rendered: render(report, cfg.format)?,
        ok: report.ok(),
        output: cfg.output.clone(),
    })
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Approx(args) => {
            let cfg = RunConfig::for_problem(SubcommandName::Approx, args)?;
            let report = with_precision!(cfg.precision, ctx => commands::approx::run(&cfg, &ctx)?);
            finish(&report, &cfg)
        }
        Command::Autocorrect(args) => {
            let cfg = RunConfig::for_problem(SubcommandName::Autocorrect, args)?;
            finish(&commands::autocorrect::run(&cfg)?, &cfg)
        }
        Command::Table1(out) => {
            let cfg = RunConfig::for_output(SubcommandName::Table1, out);
            let report =
                with_precision!(cfg.precision, ctx => commands::tables::table1(&cfg, &ctx));
            finish(&report, &cfg)
        }
        Command::Table2(out) => {
            let cfg = RunConfig::for_output(SubcommandName::Table2, out);
            let report =
                with_precision!(cfg.precision, ctx => commands::tables::table2(&cfg, &ctx));
            finish(&report, &cfg)
        }
        Command::Functions(out) => {
            let cfg = RunConfig::for_output(SubcommandName::Functions, out);
            finish(&commands::functions(&cfg), &cfg)
        }
    }
}

/// The output format requested on the command line, for error reporting.
pub fn requested_format(cli: &Cli) -> Format {
    match &cli.command {
        Command::Approx(a) | Command::Autocorrect(a) => a.out.format,
        Command::Table1(o) | Command::Table2(o) | Command::Functions(o) => o.format,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run(argv: &[&str]) -> Result<Outcome, CliError> {
        let mut v = vec!["ratapprox"];
        v.extend_from_slice(argv);
        execute(&Cli::try_parse_from(v).unwrap())
    }

    #[test]
    fn json_output_is_reproducible() {
        let argv = [
            "approx",
            "--function",
            "tan_pi4",
            "--m",
            "1",
            "--n",
            "1",
            "--format",
            "json",
        ];
        let a = run(&argv).unwrap();
        assert!(a.ok);
        assert_eq!(a.rendered, run(&argv).unwrap().rendered);
    }

    #[test]
    fn configuration_problems_map_to_exit_code_2() {
        let e = run(&[
            "approx",
            "--function",
            "exp",
            "--m",
            "1",
            "--n",
            "1",
            "--method",
            "linear",
            "--taylor",
            "9",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&[
            "autocorrect",
            "--function",
            "missing",
            "--m",
            "1",
            "--n",
            "1",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn format_follows_the_command_line() {
        let cli = Cli::try_parse_from(["ratapprox", "functions", "--format", "csv"]).unwrap();
        assert_eq!(requested_format(&cli), Format::Csv);
        assert!(execute(&cli)
            .unwrap()
            .rendered
            .starts_with("name,description"));
    }
}
