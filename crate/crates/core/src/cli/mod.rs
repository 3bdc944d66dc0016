//! The `hillgap` command line.
//!
//! ```text
//! hillgap <coeffs|spectrum|gaps|asym|identities|report> --config run.toml
//!         [--format csv|json] [--out path] [--m-range a:b] [--truncation K]
//! ```
//!
//! Exit status: 0 on success, 2 for configuration errors, 3 for numerical
//! failures, 1 when the output cannot be written.

pub mod config;
pub mod output;
pub mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub use config::{Format, Overrides, RunConfig};
pub use output::{Cell, Table};
pub use run::{run, Subcommand};

use crate::HillError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numeric(#[from] HillError),
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Band edges, gap asymptotics and identity checks for Hill's equation.
#[derive(Debug, Parser)]
#[command(name = "hillgap", version, about)]
pub struct Args {
    /// what to compute
    #[arg(value_enum)]
    pub command: Subcommand,
    /// TOML run configuration
    #[arg(long, short)]
    pub config: PathBuf,
    /// output format (overrides [output].format)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// output file; several CSV tables go to <stem>.<table>.csv
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// band range a:b, inclusive
    #[arg(long, value_parser = config::parse_m_range)]
    pub m_range: Option<(usize, usize)>,
    /// Galerkin half-width K
    #[arg(long)]
    pub truncation: Option<usize>,
}

impl Args {
    pub fn overrides(&self) -> Overrides {
        Overrides { format: self.format, out: self.out.clone(), m_range: self.m_range, truncation: self.truncation }
    }
}

/// Loads the configuration and computes the tables for `args`.
pub fn execute(args: &Args) -> Result<(RunConfig, Vec<Table>), CliError> {
    let cfg = RunConfig::from_path(&args.config, &args.overrides())?;
    let tables = run(args.command, &cfg)?;
    Ok((cfg, tables))
}

/// Full program: parse, run, write, and return the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&args).and_then(|(cfg, tables)| match &cfg.out {
        Some(path) => output::write_tables(path, &tables, cfg.format).map(|_| ()),
        None => std::io::stdout()
            .lock()
            .write_all(output::render(&tables, cfg.format).as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hillgap: {e}");
            e.exit_code()
        }
    }
}
