//! `sigrad`: analysis, search and self-checks for `sigma(n) = rad(n)^2`.
//!
//! Exit codes: 0 success, 1 usage error, 2 internal invariant breach,
//! 3 the claim ledger contains a refuted claim.

mod analyze;
mod commands;
mod view;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Overrides the default worker count of `search`.
pub const WORKERS_ENV: &str = "SIGRAD_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "sigrad", version, about = "Divisor multigraphs and searches for sigma(n) = rad(n)^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor n and report its divisor multigraph and every necessary condition.
    Analyze(analyze::AnalyzeArgs),
    /// List every n <= limit with sigma(n) = rad(n)^2.
    Search(commands::SearchArgs),
    /// List prime pairs p < q <= bound with q | sigma(p^2) and p | sigma(q^2).
    Pairs(commands::PairsArgs),
    /// Re-verify the arithmetic claim ledger.
    Facts(commands::FactsArgs),
    /// Check the path-sum identity on seeded random acyclic multigraphs.
    Identity(commands::IdentityArgs),
    /// Evaluate the size bound for omega(n) = T and sigma(n) | Lc * rad(n)^K.
    Luca(commands::LucaArgs),
}

/// Failures that are not the user's fault.
#[derive(Debug)]
pub struct Breach(pub String);

impl std::fmt::Display for Breach {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal invariant breach: {}", self.0)
    }
}

impl std::error::Error for Breach {}

/// A run that completed but must report a non-zero status.
#[derive(Debug)]
pub struct Refuted(pub usize);

impl std::fmt::Display for Refuted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ledger claim(s) refuted", self.0)
    }
}

impl std::error::Error for Refuted {}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Analyze(a) => analyze::run(&a, &mut out),
        Command::Search(a) => commands::search(&a, &mut out),
        Command::Pairs(a) => commands::pairs(&a, &mut out),
        Command::Facts(a) => commands::facts(&a, &mut out),
        Command::Identity(a) => commands::identity(&a, &mut out),
        Command::Luca(a) => commands::luca(&a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) if e.is::<Breach>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) if e.is::<Refuted>() => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
