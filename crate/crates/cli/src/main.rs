//! `infodiv`: entropies, divergence matrices, covariate selection, redundancy
//! detection and the property harness from the command line.

mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use infodiv::properties::verify;
use infodiv::selection::{detect_redundant, forward_select, SelectOptions};
use infodiv::{evaluate, ComplexitySpec};

use input::{load, Source};
use render::Render;

#[derive(Debug, Parser)]
#[command(name = "infodiv", version, about = "Information-based divergences between categorical variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropy of every column and the information summary of every pair.
    Entropy {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        display: DisplayArgs,
    },
    /// Pairwise divergence matrix over all columns.
    Matrix {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        display: DisplayArgs,
        /// Report the normalized divergence.
        #[arg(long)]
        normalized: bool,
    },
    /// Greedy forward selection of covariates for a target column.
    Select {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        display: DisplayArgs,
        /// Column to predict.
        #[arg(long)]
        target: String,
        /// Stop after this many accepted columns.
        #[arg(long)]
        max_features: Option<usize>,
        /// Smallest divergence decrease that justifies adding a column.
        #[arg(long, default_value_t = 0.0)]
        min_improvement: f64,
        /// Score with the normalized divergence.
        #[arg(long)]
        normalized: bool,
    },
    /// Covariate pairs whose normalized divergence is at most the threshold.
    Redundancy {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        display: DisplayArgs,
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
        /// Target column: excluded from the pairs and used for the impact bound.
        #[arg(long)]
        target: Option<String>,
    },
    /// Runs the sampled property checks and prints the report.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Samples per check; must be at least 1.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
    },
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Input file, or `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Complexity: E, I, Min, S:0.5, R, P, D, convex:0.5*E+0.5*I, nconvex:...
    #[arg(long, default_value = "S")]
    spec: String,
    /// Weight used by mean letters given without one.
    #[arg(long)]
    alpha: Option<f64>,
}

impl SpecArgs {
    fn parse(&self) -> Result<ComplexitySpec> {
        Ok(ComplexitySpec::parse_with_alpha(&self.spec, self.alpha)?)
    }
}

#[derive(Debug, Args)]
struct DisplayArgs {
    /// Logarithm base of displayed entropies; normalized values are unaffected.
    #[arg(long, value_enum, default_value_t = Base::E)]
    base: Base,
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    JointJson,
    TripleJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Base {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
    #[value(name = "10")]
    Ten,
}

impl Base {
    /// Converts a quantity in nats.
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Base::E => nats,
            Base::Two => nats / std::f64::consts::LN_2,
            Base::Ten => nats / std::f64::consts::LN_10,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Base::E => "nats",
            Base::Two => "bits",
            Base::Ten => "hartleys",
        }
    }
}

/// What a command printed and how it should exit.
struct Outcome {
    text: String,
    code: u8,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn entropy_cmd(source: &Source, display: &DisplayArgs) -> Result<String> {
    let names = source.names();
    let summaries = source.summaries()?;
    let r = Render::new(display.base, display.output.unwrap_or(OutputFormat::Text));
    Ok(r.entropy(&names, &summaries))
}

fn matrix_cmd(source: &Source, spec: &ComplexitySpec, display: &DisplayArgs, normalized: bool) -> Result<String> {
    let names = source.names();
    let summaries = source.summaries()?;
    let n = names.len();
    let mut m = vec![vec![None; n]; n];
    for a in 0..n {
        for b in a..n {
            let v = evaluate(spec, &summaries[a][b]).ok().map(|r| {
                if a == b && spec.is_divergence() {
                    0.0
                } else if normalized {
                    r.nib
                } else {
                    display.base.convert(r.ib)
                }
            });
            m[a][b] = v;
            m[b][a] = v;
        }
    }
    let r = Render::new(display.base, display.output.unwrap_or(OutputFormat::Csv));
    Ok(r.matrix(&names, &m, spec, normalized))
}

fn run(cli: Cli) -> Result<Outcome> {
    Ok(match cli.command {
        Command::Entropy { data, display } => {
            let source = load(&data.input, data.format)?;
            entropy_cmd(&source, &display)?.into()
        }
        Command::Matrix {
            data,
            spec,
            display,
            normalized,
        } => {
            let spec = spec.parse()?;
            let source = load(&data.input, data.format)?;
            matrix_cmd(&source, &spec, &display, normalized)?.into()
        }
        Command::Select {
            data,
            spec,
            display,
            target,
            max_features,
            min_improvement,
            normalized,
        } => {
            let spec = spec.parse()?;
            let source = load(&data.input, data.format)?;
            let options = SelectOptions {
                max_features,
                min_improvement,
                normalized,
            };
            let trace = forward_select(&spec, source.dataset("select")?, &target, &options)?;
            let r = Render::new(display.base, display.output.unwrap_or(OutputFormat::Json));
            r.selection(&spec, &trace)?.into()
        }
        Command::Redundancy {
            data,
            spec,
            display,
            threshold,
            target,
        } => {
            let spec = spec.parse()?;
            let source = load(&data.input, data.format)?;
            let pairs = detect_redundant(&spec, source.dataset("redundancy")?, threshold, target.as_deref())?;
            let r = Render::new(display.base, display.output.unwrap_or(OutputFormat::Csv));
            r.redundancy(&spec, &pairs)?.into()
        }
        Command::Verify { seed, trials, output } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let report = verify(seed, trials);
            let r = Render::new(Base::E, output.unwrap_or(OutputFormat::Json));
            Outcome {
                text: r.verify(&report)?,
                code: if report.has_proved_violations() { 2 } else { 0 },
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
