//! Command-line arguments and their validation into a [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ratapprox_core::arith::{DEFAULT_EXTENDED_BITS, MIN_EXTENDED_BITS};
use ratapprox_core::functions::lookup;
use ratapprox_core::plan::{ConstructionPlan, Method, SeriesSource};
use ratapprox_core::{FunctionId, NormalizationCondition, Parity, Segment};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "ratapprox",
    version,
    about = "Padé–Chebyshev rational approximants and error-autocorrection diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct one approximant and report its coefficients and errors.
    Approx(ProblemArgs),
    /// Rebuild the reference table of linear approximants.
    Table1(OutputArgs),
    /// Rebuild the reference table of nonlinear tan(πx/4) approximants.
    Table2(OutputArgs),
    /// Build one approximant at two precisions and study the error autocorrection.
    Autocorrect(ProblemArgs),
    /// List the function catalog.
    Functions(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Linear,
    Cross,
    Nonlinear,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Linear => Method::Linear,
            MethodArg::Cross => Method::Cross,
            MethodArg::Nonlinear => Method::Nonlinear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationArg {
    /// b_0 = 1
    B0,
    /// b_m = 1
    Bm,
    /// a_n = 1
    An,
}

impl NormalizationArg {
    pub fn condition(self) -> NormalizationCondition<f64> {
        match self {
            NormalizationArg::B0 => NormalizationCondition::B0,
            NormalizationArg::Bm => NormalizationCondition::BM,
            NormalizationArg::An => NormalizationCondition::AN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    General,
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::General => Parity::General,
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Working precision: `double`, `extended` or `extended:BITS`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended(usize),
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "double" | "f64" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended(DEFAULT_EXTENDED_BITS)),
            _ => {
                let bits = s.strip_prefix("extended:").ok_or_else(|| {
                    format!("unknown precision `{s}`; use double, extended or extended:BITS")
                })?;
                let bits: usize = bits
                    .parse()
                    .map_err(|_| format!("bad bit count `{bits}`"))?;
                if bits < MIN_EXTENDED_BITS {
                    return Err(format!(
                        "extended precision needs at least {MIN_EXTENDED_BITS} bits"
                    ));
                }
                Ok(Precision::Extended(bits))
            }
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Double => f.write_str("double"),
            Precision::Extended(bits) => write!(f, "extended:{bits}"),
        }
    }
}

impl Serialize for Precision {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_segment(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("segment `{s}` should look like A,B"))?;
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad endpoint `{a}`"))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad endpoint `{b}`"))?;
    Ok((a, b))
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Working precision: double, extended or extended:BITS.
    #[arg(long, env = "RATAPPROX_PRECISION", default_value = "extended")]
    pub precision: Precision,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Catalog name of the function, see `ratapprox functions`.
    #[arg(long)]
    pub function: String,
    /// Denominator degree (in x² for the even and odd shapes).
    #[arg(long)]
    pub m: usize,
    /// Numerator degree (in x² for the even and odd shapes).
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Linear)]
    pub method: MethodArg,
    #[arg(long, value_enum)]
    pub normalization: Option<NormalizationArg>,
    /// Overrides the catalog shape.
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    /// Overrides the catalog segment, as A,B.
    #[arg(long, value_parser = parse_segment, allow_hyphen_values = true)]
    pub segment: Option<(f64, f64)>,
    /// Number of quadrature nodes.
    #[arg(long)]
    pub s: Option<usize>,
    /// Take Chebyshev coefficients from the Taylor polynomial of this degree.
    #[arg(long)]
    pub taylor: Option<usize>,
    /// Points of the uniform error-measurement grid.
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubcommandName {
    Approx,
    Table1,
    Table2,
    Autocorrect,
    Functions,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: SubcommandName,
    pub function: Option<String>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub method: Option<MethodArg>,
    pub normalization: Option<NormalizationArg>,
    pub parity: Option<ParityArg>,
    pub segment: Option<(f64, f64)>,
    pub precision: Precision,
    pub quadrature: Option<usize>,
    pub taylor: Option<usize>,
    pub grid: usize,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Remarks produced by validation, copied into the report.
    #[serde(skip)]
    pub notes: Vec<String>,
}

fn parity_arg(p: Parity) -> ParityArg {
    match p {
        Parity::General => ParityArg::General,
        Parity::Even => ParityArg::Even,
        Parity::Odd => ParityArg::Odd,
    }
}

impl RunConfig {
    pub fn for_output(subcommand: SubcommandName, out: &OutputArgs) -> Self {
        RunConfig {
            subcommand,
            function: None,
            m: None,
            n: None,
            method: None,
            normalization: None,
            parity: None,
            segment: None,
            precision: out.precision,
            quadrature: None,
            taylor: None,
            grid: 2000,
            format: out.format,
            output: out.output.clone(),
            notes: Vec::new(),
        }
    }

    /// Checks every combination the core would reject later, and fills in catalog defaults.
    pub fn for_problem(subcommand: SubcommandName, args: &ProblemArgs) -> Result<Self, CliError> {
        let entry = lookup(&args.function).map_err(|e| CliError::Config(e.to_string()))?;
        let mut notes = Vec::new();
        let parity: Parity = args.parity.map(Into::into).unwrap_or(entry.parity);
        let segment = match args.segment {
            Some((a, b)) => Segment::new(a, b).map_err(|e| CliError::Config(e.to_string()))?,
            None => entry.segment,
        };
        if parity != Parity::General && segment.a != -segment.b {
            return Err(CliError::Config(format!(
                "the {parity} shape needs a segment symmetric about 0, got [{}, {}]",
                segment.a, segment.b
            )));
        }
        if args.grid < 2 {
            return Err(CliError::Config("--grid needs at least 2 points".into()));
        }
        if args.s == Some(0) {
            return Err(CliError::Config("--s must be positive".into()));
        }
        let method = args.method;
        let normalization = match (method, args.normalization) {
            (MethodArg::Cross, Some(tag)) if tag != NormalizationArg::B0 => {
                return Err(CliError::Config(
                    "the cross method fixes b_0 = 1; other normalizations are not available".into(),
                ));
            }
            (MethodArg::Nonlinear, Some(_)) => {
                notes.push(
                    "the nonlinear method has no normalization choice; --normalization ignored"
                        .into(),
                );
                NormalizationArg::B0
            }
            (_, tag) => tag.unwrap_or(NormalizationArg::B0),
        };
        if let Some(degree) = args.taylor {
            if method == MethodArg::Linear {
                return Err(CliError::Config(
                    "--taylor applies to the cross and nonlinear methods only".into(),
                ));
            }
            if degree == 0 {
                return Err(CliError::Config("--taylor must be positive".into()));
            }
            if !entry.has_taylor {
                return Err(CliError::Config(format!(
                    "{} has no Taylor coefficients",
                    entry.name
                )));
            }
            if !segment.is_unit() {
                return Err(CliError::Config(
                    "--taylor needs the segment [-1, 1]".into(),
                ));
            }
        }
        Ok(RunConfig {
            subcommand,
            function: Some(entry.name.to_string()),
            m: Some(args.m),
            n: Some(args.n),
            method: Some(method),
            normalization: Some(normalization),
            parity: Some(parity_arg(parity)),
            segment: Some((segment.a, segment.b)),
            precision: args.out.precision,
            quadrature: args.s,
            taylor: args.taylor,
            grid: args.grid,
            format: args.out.format,
            output: args.out.output.clone(),
            notes,
        })
    }

    pub fn function_id(&self) -> Option<FunctionId> {
        let name = self.function.as_deref()?;
        FunctionId::ALL.into_iter().find(|id| id.name() == name)
    }

    /// The construction this configuration describes.
    pub fn plan(&self) -> Option<ConstructionPlan> {
        let id = self.function_id()?;
        let (a, b) = self.segment?;
        let mut plan = ConstructionPlan::new(id, self.m?, self.n?)
            .with_method(self.method?.into())
            .with_parity(self.parity?.into())
            .with_segment(Segment { a, b })
            .with_normalization(self.normalization?.condition());
        if let Some(s) = self.quadrature {
            plan = plan.with_quadrature(s);
        }
        plan = plan.with_series(match self.taylor {
            Some(degree) => SeriesSource::Taylor { degree },
            None => SeriesSource::Quadrature { s: self.quadrature },
        });
        Some(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> ProblemArgs {
        let mut argv = vec!["ratapprox", "approx"];
        argv.extend_from_slice(extra);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Approx(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn precision_parsing() {
        assert_eq!("double".parse::<Precision>(), Ok(Precision::Double));
        assert_eq!(
            "extended".parse::<Precision>(),
            Ok(Precision::Extended(DEFAULT_EXTENDED_BITS))
        );
        assert_eq!(
            "extended:256".parse::<Precision>(),
            Ok(Precision::Extended(256))
        );
        assert!("extended:32".parse::<Precision>().is_err());
        assert!("quad".parse::<Precision>().is_err());
    }

    #[test]
    fn catalog_defaults_fill_in() {
        let cfg = RunConfig::for_problem(
            SubcommandName::Approx,
            &args(&["--function", "cos_pi4", "--m", "2", "--n", "3"]),
        )
        .unwrap();
        assert_eq!(cfg.parity, Some(ParityArg::Even));
        assert_eq!(cfg.segment, Some((-1.0, 1.0)));
        assert_eq!(cfg.normalization, Some(NormalizationArg::B0));
    }

    #[test]
    fn bad_combinations_are_config_errors() {
        let cases: &[&[&str]] = &[
            &["--function", "nope", "--m", "1", "--n", "1"],
            &[
                "--function",
                "exp",
                "--m",
                "1",
                "--n",
                "1",
                "--method",
                "cross",
                "--normalization",
                "bm",
            ],
            &[
                "--function",
                "exp",
                "--m",
                "1",
                "--n",
                "1",
                "--taylor",
                "10",
            ],
            &[
                "--function",
                "sqrt",
                "--m",
                "1",
                "--n",
                "1",
                "--method",
                "cross",
                "--taylor",
                "10",
            ],
            &[
                "--function",
                "sqrt",
                "--m",
                "1",
                "--n",
                "1",
                "--parity",
                "even",
            ],
            &[
                "--function",
                "exp",
                "--m",
                "1",
                "--n",
                "1",
                "--segment",
                "0,1",
                "--method",
                "cross",
                "--taylor",
                "9",
            ],
            &[
                "--function",
                "exp",
                "--m",
                "1",
                "--n",
                "1",
                "--segment",
                "1,0",
            ],
            &["--function", "exp", "--m", "1", "--n", "1", "--grid", "1"],
        ];
        for case in cases {
            let err = RunConfig::for_problem(SubcommandName::Approx, &args(case)).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{case:?}");
        }
    }

    #[test]
    fn nonlinear_ignores_normalization_with_a_note() {
        let cfg = RunConfig::for_problem(
            SubcommandName::Approx,
            &args(&[
                "--function",
                "exp",
                "--m",
                "2",
                "--n",
                "2",
                "--method",
                "nonlinear",
                "--normalization",
                "an",
            ]),
        )
        .unwrap();
        assert_eq!(cfg.normalization, Some(NormalizationArg::B0));
        assert_eq!(cfg.notes.len(), 1);
    }

    #[test]
    fn negative_segment_endpoints_parse() {
        let cfg = RunConfig::for_problem(
            SubcommandName::Approx,
            &args(&[
                "--function",
                "exp",
                "--m",
                "1",
                "--n",
                "1",
                "--segment",
                "-0.5,0.5",
            ]),
        )
        .unwrap();
        assert_eq!(cfg.segment, Some((-0.5, 0.5)));
    }
}
