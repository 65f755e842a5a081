//! Command-line front end.
//!
//! Algebras come from JSON definition files (see [`AlgebraFile`]) or the builtin registry
//! ([`BUILTINS`]). Every command produces a [`Report`] of named checks; the process exits
//! with 0 iff all of them pass, 1 if any fails and 2 on input errors.

mod algebra;
mod commands;
mod report;
mod suites;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use algebra::{
    builtin, load_path, load_source, parse_params, parse_rep, AdactionFile, AlgebraFile, BuiltinFile, DifferenceOpFile,
    GridFile, Loaded, Params, PoissonFile, RewriteFile, BUILTINS,
};
pub use commands::{cmd_classify, cmd_detect, cmd_export, cmd_flow, cmd_jacobi, parse_t_grid, FlowArgs};
pub use report::{Check, Format, Report, Table};
pub use suites::{cmd_verify, random_quadratic_structure, Suite};

use crate::flow::FlowError;
use crate::ncrewrite::RewriteError;
use crate::poisson::PoissonError;
use crate::poly::PolyError;
use crate::reps::RepError;

/// Default tolerance for numeric checks.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),
    #[error("unknown Hamiltonian: {0}")]
    UnknownHamiltonian(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Parser)]
#[command(name = "quasilin", version, about = "Verification engine for quasi-linear Poisson and operator algebras")]
pub struct Cli {
    /// Tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks the Jacobi identity of a Poisson structure (and the curl criterion for N = 3).
    Jacobi {
        /// Algebra file or builtin name.
        source: String,
        /// Parameter override `name=value` (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Names the canonical form of a two- or three-generator Poisson structure.
    Classify {
        /// Algebra file or builtin name.
        source: String,
        /// Parameter override `name=value` (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Evolves the generators under a Hamiltonian over a grid of times.
    Flow {
        /// Algebra file or builtin name.
        source: String,
        /// Generator playing the Hamiltonian (optional when the source has only one action).
        #[arg(long)]
        hamiltonian: Option<String>,
        /// Times: `a`, `a,b,c` or `start:end:count`.
        #[arg(long = "t", default_value = "0.1", allow_hyphen_values = true)]
        t: String,
        /// Matrix representation: `qosc:D:Q`, `dg_pauli`, `krawtchouk:D:P`, `random_tridiagonal:D:SEED`.
        #[arg(long)]
        rep: Option<String>,
        /// Scalar value of the Hamiltonian for the coefficient table.
        #[arg(long = "h", default_value = "1", allow_hyphen_values = true)]
        h: String,
        /// Parameter override `name=value` (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Fits closure ansätze, tridiagonal constants and the grid type of an operator pair.
    Detect {
        /// Algebra file or builtin carrying a representation.
        source: Option<String>,
        /// Representation to use instead of (or without) a source, as for `flow --rep`.
        #[arg(long)]
        rep: Option<String>,
        /// Degree bounds `deg W1, deg W2, deg W0`.
        #[arg(long, default_value = "2,1,2")]
        deg: String,
        /// Parameter override `name=value` (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Runs a verification suite.
    Verify {
        /// Suite to run; `all` runs every suite.
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Parameter override `name=value` (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Writes the algebra files describing a source (parameters substituted).
    Export {
        /// Algebra file or builtin name.
        source: String,
        /// Directory to write `<name>-<index>.json` files to; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Parameter override `name=value` (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
}

/// Parses repeated `name=value` overrides.
pub fn parse_overrides(raw: &[String]) -> Result<Params, CliError> {
    let mut map = BTreeMap::new();
    for item in raw {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Parameter(format!("expected NAME=VALUE, got '{item}'")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    parse_params(&map)
}

/// Result of one invocation: exit status and the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_outcome(e: CliError) -> Outcome {
    Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Outcome {
    let ctx = Context { tol: cli.tol, seed: cli.seed };
    let report = match &cli.command {
        Command::Jacobi { source, params } => parse_overrides(params).and_then(|p| cmd_jacobi(&load_source(source, &p)?)),
        Command::Classify { source, params } => {
            parse_overrides(params).and_then(|p| cmd_classify(&load_source(source, &p)?))
        }
        Command::Flow { source, hamiltonian, t, rep, h, params } => parse_overrides(params).and_then(|p| {
            let loaded = load_source(source, &p)?;
            let args = FlowArgs { hamiltonian: hamiltonian.as_deref(), t: parse_t_grid(t)?, rep: rep.as_deref(), h };
            cmd_flow(&loaded, &args, &ctx)
        }),
        Command::Detect { source, rep, deg, params } => {
            parse_overrides(params).and_then(|p| cmd_detect(source.as_deref(), rep.as_deref(), deg, &p, &ctx))
        }
        Command::Verify { suite, params } => parse_overrides(params).and_then(|p| cmd_verify(*suite, &p, &ctx)),
        Command::Export { source, out, params } => {
            return match parse_overrides(params).and_then(|p| cmd_export(&load_source(source, &p)?, out.as_deref()))
            {
                Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
                Err(e) => error_outcome(e),
            };
        }
    };
    match report {
        Ok(r) => Outcome { code: r.exit_code(), stdout: r.render(cli.format), stderr: String::new() },
        Err(e) => error_outcome(e),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

/// Entry point for the `quasilin` binary; returns the process exit status.
pub fn main() -> i32 {
    let outcome = run_args(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.code
}

/// Flags shared by the numeric commands.
#[derive(Clone, Copy, Debug)]
pub struct Context {
    pub tol: f64,
    pub seed: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context { tol: DEFAULT_TOL, seed: 0 }
    }
}
