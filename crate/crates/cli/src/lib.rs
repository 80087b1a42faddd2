//! Command-line front end for `dmod-core`. Every command builds a JSON
//! report; the plain-text output is rendered from that report.

mod commands;
mod input;
mod render;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub use render::human;

/// Version tag of the structured output.
pub const SCHEMA: &str = "dmod/1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_from!(
    dmod_core::gkz::GkzError,
    dmod_core::linalg::LinalgError,
    dmod_core::reduction::ReductionError,
    dmod_core::equivariant::EquivariantError,
    dmod_core::weyl_groebner::WeylGbError,
    dmod_core::groebner::NotSymplectic
);

impl From<dmod_core::parse::ParseError> for CliError {
    fn from(e: dmod_core::parse::ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Lex,
    Degrevlex,
    Weighted,
}

#[derive(Debug, Parser)]
#[command(name = "dmod", version, about = "Exact computations with D-modules and GKZ systems")]
pub struct Cli {
    /// Print the structured report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel steps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ChiArgs {
    /// JSON document `{"chi": [[..]], "lambda": ["p/q", ..]}`.
    #[arg(long)]
    pub chi: PathBuf,
    /// Comma-separated parameters; overrides the document.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Section {
    Report,
    Generators,
    Strata,
    Verdicts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a GKZ system with its orbit strata and verdicts.
    Gkz {
        #[command(flatten)]
        chi: ChiArgs,
        /// Also compute gr I and compare it with the bound ideal.
        #[arg(long)]
        compare_graded: bool,
        #[arg(value_enum, default_value = "report")]
        section: Section,
    },
    /// Characteristic ideal and holonomicity of a left ideal.
    Charvar {
        /// Generators separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        ops: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Commutative Groebner basis.
    Gb {
        #[arg(long, allow_hyphen_values = true)]
        ops: String,
        /// Comma-separated variable names, largest first under lex.
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, value_enum, default_value = "degrevlex")]
        order: OrderArg,
        /// Weights for `--order weighted`.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Left Groebner basis in the Weyl algebra.
    Wgb {
        #[arg(long, allow_hyphen_values = true)]
        ops: String,
        #[arg(long)]
        dim: Option<usize>,
        /// `weighted` is the order filtration.
        #[arg(long, value_enum, default_value = "weighted")]
        order: OrderArg,
    },
    /// Fourier transform x -> -d, d -> x.
    Fourier {
        #[arg(long, allow_hyphen_values = true)]
        ops: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Formal adjoint.
    Adjoint {
        #[arg(long, allow_hyphen_values = true)]
        ops: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Reduce a GKZ system to operators in theta on the quotient torus.
    Reduce {
        #[command(flatten)]
        chi: ChiArgs,
        /// Read the one-variable operator as a generalized hypergeometric equation.
        #[arg(long)]
        l1: bool,
        /// Shift vector solving chi * shift = lambda.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        /// Number of series coefficients to print with `--l1`.
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Stability, character and homogeneity of an equivariant system.
    CheckEquivariance {
        #[arg(long)]
        action: PathBuf,
    },
    /// Apply an operator to a polynomial or to c x^e.
    Apply {
        #[arg(long, allow_hyphen_values = true)]
        ops: String,
        /// Polynomial in x.
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        /// Comma-separated exponents of x^e.
        #[arg(long, allow_hyphen_values = true)]
        power: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        coeff: String,
        #[arg(long)]
        dim: Option<usize>,
    },
}

/// Runs one invocation and returns the exit code and the text to print.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match report(&cli) {
        Ok(v) if cli.json => (0, serde_json::to_string_pretty(&v).expect("serializable") + "\n"),
        Ok(v) => (0, human(&v)),
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}

/// The structured report of a parsed invocation.
pub fn report(cli: &Cli) -> Result<Value, CliError> {
    let job = || commands::dispatch(&cli.command);
    let mut v = match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| CliError::Domain(e.to_string()))?
            .install(job)?,
        None => job()?,
    };
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), Value::String(SCHEMA.into()));
    }
    Ok(v)
}
