//! The `rpf` command-line front end.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::error::Error;
pub use args::{Cli, Command, Format, RunConfig};
pub use output::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Range(s) => CliError::Usage(s),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_NUMERIC,
        }
    }
}

/// Runs one command and returns its report and whether every check in it passed.
pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<(Report, bool), CliError> {
    let c = commands::Ctx { cfg };
    let ok = |r: Report| Ok((r, true));
    match cmd {
        Command::Zeros { a, b } => ok(commands::zeros(&c, *a, *b)?),
        Command::Saddles { d, m_index } => ok(commands::saddles(&c, *d, *m_index)?),
        Command::Qcoeff { h, k, method } => ok(commands::qcoeff(&c, *h, *k, *method)?),
        Command::Ccoeff { h, k, ell } => ok(commands::ccoeff(&c, *h, *k, *ell)?),
        Command::Sums { subset } => ok(commands::sums(&c, subset)?),
        Command::Table { which } => ok(commands::table(&c, *which)?),
        Command::Figure { which } => ok(commands::figure(&c, *which)?),
        Command::Bounds { what, big_k } => commands::bounds(&c, *what, big_k),
        Command::Verify { target } => commands::verify(&c, *target),
        Command::Sineprod { h, k, len } => ok(commands::sineprod(&c, *h, *k, *len)?),
    }
}

fn emit(text: &str, cfg: &RunConfig) -> Result<(), CliError> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::resolve(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    if let Some(t) = cfg.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let result = execute(&cli.cmd, &cfg).and_then(|(rep, ok)| {
        emit(&rep.render(cfg.format), &cfg)?;
        Ok(ok)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("verification failed");
            EXIT_VERIFY
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
