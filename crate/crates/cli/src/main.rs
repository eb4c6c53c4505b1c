//! `grandnet` command-line tool.
//!
//! Exit status: 0 on success, 1 on invalid input or I/O failure, 2 when a
//! verification suite fails.

mod args;
mod io;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Output(String),
    Compute(grandnet::GrandNetError),
}

impl From<grandnet::GrandNetError> for CliError {
    fn from(e: grandnet::GrandNetError) -> Self {
        CliError::Compute(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input: {m}"),
            CliError::Output(m) => write!(f, "output: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GRANDNET_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("GRANDNET_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Norm(r) => run::norm(&r.resolve("norm")?, r.out.as_deref()).map(|_| true),
        Command::Avg(r) => run::avg(&r.resolve("avg")?, r.out.as_deref()).map(|_| true),
        Command::Rearrange(r) => run::rearrange(&r.resolve("rearrange")?, r.out.as_deref()).map(|_| true),
        Command::Kfunc(r) => run::kfunc(&r.resolve("kfunc")?, r.out.as_deref()).map(|_| true),
        Command::InterpCheck(r) => run::interp_check(&r.resolve("interp-check")?, r.out.as_deref()).map(|_| true),
        Command::Certify(r) => run::certify_cmd(&r.resolve("certify")?, r.out.as_deref()).map(|_| true),
        Command::Verify(r) => run::verify(&r.resolve("verify")?, r.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
