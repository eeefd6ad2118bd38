//! `diffdim`: dimension reports for difference algebraic groups read from
//! JSON job files.

mod fixtures;
mod job;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diffdim::groups::{default_max_level, Closure, GeneralizedGroupSpec};
use diffdim::Error;
use thiserror::Error as ThisError;

use report::{Document, Format, Section};

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("cannot read job: {0}")]
    Io(String),
    #[error("schema error at `{pointer}`: {message}")]
    Schema { pointer: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("oracle inconclusive at level {level}")]
    OracleInconclusive { level: u32 },
    #[error("oracle disagrees at level {level}: main {main}, oracle {oracle}")]
    OracleMismatch { level: u32, main: u64, oracle: u64 },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Schema { .. } | CliError::Usage(_) => 1,
            CliError::OracleInconclusive { .. } => 3,
            CliError::OracleMismatch { .. } => 4,
            CliError::Core(e) => match e {
                Error::InvalidDimension(_)
                | Error::DimensionMismatch { .. }
                | Error::Parse(_)
                | Error::Schedule(_)
                | Error::AxiomViolation { .. }
                | Error::LevelOutOfRange { .. } => 1,
                Error::FamilyViolation { .. } => 2,
                Error::SubsetBlowUp { .. }
                | Error::OracleInconclusive { .. }
                | Error::IndicatorUnresolved { .. }
                | Error::NotEventuallyPolynomial { .. }
                | Error::WindowTooShort { .. } => 3,
                _ => 4,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "diffdim", version, about = "Exact dimension reports for difference algebraic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct JobArgs {
    /// Job file (JSON).
    job: PathBuf,
    /// Highest level to report [default: 2·(max generator order) + n + 4].
    #[arg(long)]
    max_level: Option<u32>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Also compare the main path with the brute-force oracle.
    #[arg(long)]
    oracle_check: bool,
    /// Escalation window of the oracle.
    #[arg(long, default_value_t = 8)]
    oracle_window: u32,
    /// Search bound for indicators of explicit schedules [default: 2·max-level + 2].
    #[arg(long)]
    horizon: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Zariski closure dimensions dim G_i.
    Dims(JobArgs),
    /// Dimension polynomial, threshold and invariants.
    Dimpoly(JobArgs),
    /// Stabilization index with the per-level generation checks.
    Stabilize(JobArgs),
    /// Finite σ-generation certificate.
    Certificate(JobArgs),
    /// Dimensions, polynomial, indicators and axioms of the scheduled chain.
    Generalized(JobArgs),
    /// Projected chain and its indicators.
    Projections(JobArgs),
    /// Kernels of the truncation maps along the chain.
    Kernels(JobArgs),
    /// Kernels re-coordinatised over n − 1 shifts.
    Twisted(JobArgs),
    /// Main path against the brute-force oracle, level by level.
    OracleCheck(JobArgs),
    /// Every report in one document.
    Report(JobArgs),
    /// Bundled fixtures and a seeded random corpus.
    SelfTest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 24)]
        count: usize,
        /// Run only the bundled fixtures.
        #[arg(long)]
        fixtures: bool,
        #[arg(long, default_value_t = 8)]
        oracle_window: u32,
    },
}

/// Printed text plus an error to report after it; oracle disagreements
/// are reported after the table that shows them.
type Outcome = Result<(String, Option<CliError>), CliError>;

fn run_job(name: &str, args: &JobArgs) -> Outcome {
    let job = job::load_job(&args.job)?;
    let spec: GeneralizedGroupSpec = job.spec()?;
    let closure = Closure::new(&spec.base)?;
    let max_level = args.max_level.unwrap_or_else(|| default_max_level(&spec.base));
    let horizon = args.horizon.unwrap_or(2 * max_level + 2);
    let mut sections: Vec<Section> = Vec::new();
    match name {
        "dims" => sections.push(report::closure_dims(&closure, max_level)?),
        "dimpoly" => sections.push(report::dimension_polynomial(&closure)?),
        "stabilize" => sections.push(report::stabilization(&closure)?),
        "certificate" => sections.push(report::certificate(&closure)?),
        "generalized" => sections.push(report::generalized(&spec, max_level, horizon)?),
        "projections" => sections.push(report::projection(&spec, max_level, horizon)?),
        "kernels" => sections.push(report::kernel(&spec, &closure, max_level)?),
        "twisted" => sections.push(report::twisted(&spec, max_level)?),
        "oracle-check" => {}
        "report" => {
            sections.push(report::closure_dims(&closure, max_level)?);
            sections.push(report::dimension_polynomial(&closure)?);
            sections.push(report::stabilization(&closure)?);
            sections.push(report::certificate(&closure)?);
            sections.push(report::generalized(&spec, max_level, horizon)?);
            sections.push(report::projection(&spec, max_level, horizon)?);
            sections.push(report::kernel(&spec, &closure, max_level)?);
            if spec.base.n >= 2 {
                sections.push(report::twisted(&spec, max_level)?);
            }
        }
        other => unreachable!("unknown command {other}"),
    }
    if args.oracle_check || name == "oracle-check" {
        sections.push(report::oracle(&closure, max_level, args.oracle_window)?);
    }
    let doc = Document {
        command: name.to_string(),
        fixture: fixtures::matching(&job).map(str::to_string),
        job,
        max_level,
        sections,
    };
    let text = report::emit(&doc, args.format)?;
    Ok((text, report::oracle_verdict(&doc).err()))
}

fn run(cli: Cli) -> Outcome {
    let (name, args) = match &cli.command {
        Command::Dims(a) => ("dims", a),
        Command::Dimpoly(a) => ("dimpoly", a),
        Command::Stabilize(a) => ("stabilize", a),
        Command::Certificate(a) => ("certificate", a),
        Command::Generalized(a) => ("generalized", a),
        Command::Projections(a) => ("projections", a),
        Command::Kernels(a) => ("kernels", a),
        Command::Twisted(a) => ("twisted", a),
        Command::OracleCheck(a) => ("oracle-check", a),
        Command::Report(a) => ("report", a),
        Command::SelfTest { seed, count, fixtures, oracle_window } => {
            let mut out = selftest::Outcome { lines: Vec::new(), failures: 0 };
            selftest::fixtures(&mut out);
            if !fixtures {
                selftest::corpus(&mut out, *seed, *count, *oracle_window);
            }
            let mut text = out.lines.join("\n");
            text.push('\n');
            let failed = (out.failures > 0)
                .then(|| CliError::Core(Error::Invariant(format!("{} self-test checks failed", out.failures))));
            return Ok((text, failed));
        }
    };
    run_job(name, args)
}

fn main() -> ExitCode {
    let failure = match run(Cli::parse()) {
        Ok((text, failure)) => {
            print!("{text}");
            failure
        }
        Err(e) => Some(e),
    };
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
