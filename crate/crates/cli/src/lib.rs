//! Command-line front end: manifold descriptors in, JSON reports out.

pub mod closed_form;
pub mod descriptor;
pub mod error;
pub mod examples;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use secondkind::operator::{alpha_sum, bruteforce_min_alpha_sum, spectrum};
use secondkind::rigidity::{
    check_rigidity, verify_product_structure, HarnessVerdict, RigidityCase,
};

pub use descriptor::ManifoldDescriptor;
pub use error::{exit, CliError};
use report::{build_report, resolve_alpha, Detail};

#[derive(Debug, Parser)]
#[command(
    name = "secondkind",
    version,
    about = "Spectra, alpha-classification and rigidity checks for the curvature operator of the second kind"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, thresholds and closed-form comparison for a descriptor file.
    Spectrum { file: PathBuf },
    /// Classify at one or more alpha values (numbers, `A`, `B` or `line`).
    Classify {
        file: PathBuf,
        #[arg(long, required = true, num_args = 1)]
        alpha: Vec<String>,
    },
    /// Nonnegativity and nonpositivity thresholds only.
    Threshold { file: PathBuf },
    /// Evaluate the model-space example table against closed forms.
    Examples,
    /// Run a rigidity or product-structure harness.
    Verify(VerifyArgs),
    /// Compare the sampled minimum over random bases with the eigenvalue sum.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Harness {
    Line,
    ProductSpheres,
    ProductKahler,
    IffSpheres,
    IffKahler,
    ProductStructure,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub harness: Harness,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Total dimension for the line harness.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub n1: usize,
    #[arg(long, default_value_t = 3)]
    pub n2: usize,
    #[arg(long, default_value_t = 1)]
    pub m1: usize,
    #[arg(long, default_value_t = 1)]
    pub m2: usize,
    /// Comma-separated curvature grid for the iff harnesses.
    #[arg(long, value_delimiter = ',')]
    pub kappas: Option<Vec<f64>>,
    /// Two-factor product descriptor for `product-structure`.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub input: ManifoldDescriptor,
    pub alpha: f64,
    pub samples: usize,
    pub seed: u64,
    pub alpha_sum: f64,
    pub eigenbasis_sample: f64,
    pub sampled_min: f64,
    pub argmin_sample: usize,
    pub argmin_seed: Option<u64>,
    pub consistent: bool,
}

/// Slack for "no sampled basis beats the eigenvalue sum".
pub const ORACLE_SLACK: f64 = 1e-8;

pub fn load_descriptor(path: &Path) -> Result<ManifoldDescriptor, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ManifoldDescriptor::parse(&text)
}

fn emit<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize to JSON")
}

/// Executes a parsed command, returning the exit code and the JSON output.
pub fn execute(command: &Command) -> Result<(i32, String), CliError> {
    match command {
        Command::Spectrum { file } => {
            let d = load_descriptor(file)?;
            let report = build_report(&d, &[], Detail::Full)?;
            let code = match &report.closed_form {
                Some(Some(c)) if !c.matches => exit::MISMATCH,
                _ => exit::OK,
            };
            Ok((code, emit(&report)))
        }
        Command::Classify { file, alpha } => {
            let d = load_descriptor(file)?;
            Ok((exit::OK, emit(&build_report(&d, alpha, Detail::Full)?)))
        }
        Command::Threshold { file } => {
            let d = load_descriptor(file)?;
            Ok((
                exit::OK,
                emit(&build_report(&d, &[], Detail::ThresholdsOnly)?),
            ))
        }
        Command::Examples => {
            let report = examples::run_examples()?;
            let code = if report.passed {
                exit::OK
            } else {
                exit::MISMATCH
            };
            Ok((code, emit(&report)))
        }
        Command::Verify(args) => verify(args),
        Command::Oracle {
            file,
            alpha,
            samples,
            seed,
            tol,
        } => {
            let d = load_descriptor(file)?;
            let alpha = resolve_alpha(&d, alpha)?;
            let r = d.tensor()?;
            let g = alpha_sum(&spectrum(&r)?, alpha)?;
            let bf = bruteforce_min_alpha_sum(&r, alpha, *samples, *seed)?;
            let slack = ORACLE_SLACK * r.max_abs().max(1.0);
            let consistent = (bf.per_sample[0] - g).abs() <= *tol && bf.min >= g - slack;
            let report = OracleReport {
                input: d,
                alpha,
                samples: *samples,
                seed: *seed,
                alpha_sum: g,
                eigenbasis_sample: bf.per_sample[0],
                sampled_min: bf.min,
                argmin_sample: bf.argmin_sample,
                argmin_seed: bf.argmin_seed,
                consistent,
            };
            let code = if consistent { exit::OK } else { exit::MISMATCH };
            Ok((code, emit(&report)))
        }
    }
}

fn verify(args: &VerifyArgs) -> Result<(i32, String), CliError> {
    let kappas = || {
        args.kappas
            .clone()
            .unwrap_or_else(RigidityCase::default_kappas)
    };
    let report = match args.harness {
        Harness::ProductStructure => {
            let path = args.descriptor.as_ref().ok_or_else(|| {
                CliError::Usage("product-structure needs --descriptor <file>".into())
            })?;
            let d = load_descriptor(path)?;
            let ManifoldDescriptor::Product { factors } = &d else {
                return Err(CliError::Usage(
                    "product-structure needs a two-factor product".into(),
                ));
            };
            if factors.len() != 2 {
                return Err(CliError::Usage(
                    "product-structure needs a two-factor product".into(),
                ));
            }
            verify_product_structure(&factors[0].tensor()?, &factors[1].tensor()?, args.tol)?
        }
        h => {
            let case = match h {
                Harness::Line => RigidityCase::Line { n: args.n },
                Harness::ProductSpheres => RigidityCase::ProductSpheres {
                    n1: args.n1,
                    n2: args.n2,
                },
                Harness::ProductKahler => RigidityCase::ProductKahler {
                    m1: args.m1,
                    m2: args.m2,
                },
                Harness::IffSpheres => RigidityCase::IffSpheres {
                    n1: args.n1,
                    n2: args.n2,
                    kappas: kappas(),
                },
                Harness::IffKahler => RigidityCase::IffKahler {
                    m1: args.m1,
                    m2: args.m2,
                    kappas: kappas(),
                },
                Harness::ProductStructure => unreachable!(),
            };
            check_rigidity(&case, args.seed, args.samples, args.tol)?
        }
    };
    let code = match report.verdict {
        HarnessVerdict::Violated => exit::MISMATCH,
        _ => exit::OK,
    };
    Ok((code, emit(&report)))
}

/// Parses `argv`, runs the command and prints its report; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
        }
    };
    match execute(&cli.command) {
        Ok((code, out)) => {
            println!("{out}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
