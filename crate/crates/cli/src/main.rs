//! `cslab`: exact enumeration, Monte Carlo, valence-bond and error-correction
//! experiments on lattice chiral spin liquid states.

mod commands;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use settings::Settings;

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: a check or comparison failed.
    Validation(String),
    /// Exit 3: enumeration budget or ambiguous bond rule.
    Infeasible(String),
    /// Exit 4: malformed arguments or configuration.
    BadArgs(String),
    /// Exit 1.
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::BadArgs(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation failed: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
            CliError::BadArgs(m) => write!(f, "bad arguments: {m}"),
            CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl From<cslab::Error> for CliError {
    fn from(e: cslab::Error) -> Self {
        use cslab::Error as E;
        let msg = e.to_string();
        match e {
            E::BudgetExceeded { .. } | E::AmbiguousBondRule { .. } | E::AmbiguousBond { .. } => CliError::Infeasible(msg),
            E::InvalidLattice { .. } | E::LatticeSyntax(_) | E::InvalidArgument(_) | E::InvalidSchedule(_) => {
                CliError::BadArgs(msg)
            }
            _ => CliError::Other(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "cslab", version, about = "Lattice chiral spin liquid toolkit")]
struct Cli {
    /// Plain-text `key = value` file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Lattice `N1xN2` (comma-separated list where a command accepts several).
    #[arg(long, global = true)]
    lattice: Option<String>,
    /// 0, 1 or both.
    #[arg(long, global = true)]
    sector: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    chains: Option<String>,
    /// Measurement sweeps per chain.
    #[arg(long, global = true)]
    sweeps: Option<String>,
    #[arg(long, global = true)]
    warmup: Option<String>,
    /// Sweeps per block.
    #[arg(long, global = true)]
    block: Option<String>,
    /// Largest configuration-space dimension for exact enumeration, or the
    /// largest number of coverings for `vb`.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Largest |dx| of a valence bond, in lattice steps (`2` or `2b`).
    #[arg(long, global = true)]
    max_dx: Option<String>,
    /// Largest minimal-image |dy| of a valence bond.
    #[arg(long, global = true)]
    max_dy: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Singlet, translation and boundary-condition checks by exact enumeration.
    Verify { lattice: Option<String> },
    /// Nearest-neighbor correlators of the reference table by Monte Carlo.
    Table1 { lattice: Option<String> },
    /// Slow-twist expectation versus 1/N1 at fixed N2.
    Fig1 {
        #[arg(long)]
        n2: Option<String>,
        /// Comma-separated even N1 values.
        #[arg(long)]
        n1: Option<String>,
    },
    /// Valence-bond coverings and their gap-parity classes.
    Vb {
        lattice: Option<String>,
        /// Only nearest-neighbor bonds.
        #[arg(long)]
        nearest_neighbor: bool,
        /// Write one row per covering instead of the class summary.
        #[arg(long)]
        coverings: bool,
    },
    /// Weight-1 Knill-Laflamme analysis of the code spanned by both sectors.
    Qec { lattice: Option<String> },
    /// Monte Carlo estimates of the origin correlators and the slow twist.
    Vmc { lattice: Option<String> },
    /// Every experiment in sequence, written to the `--out` directory.
    ReproducePaper,
}

fn settings(cli: Cli) -> Result<(Command, Settings), CliError> {
    let c = cli.common;
    let path = |p: Option<PathBuf>| p.map(|p| p.display().to_string());
    let mut flags = vec![
        ("lattice", c.lattice),
        ("sector", c.sector),
        ("seed", c.seed),
        ("chains", c.chains),
        ("sweeps", c.sweeps),
        ("warmup", c.warmup),
        ("block", c.block),
        ("budget", c.budget),
        ("max_dx", c.max_dx),
        ("max_dy", c.max_dy),
        ("out", path(c.out)),
        ("format", c.format),
    ];
    let on = |b: bool| b.then(|| "true".to_string());
    match &cli.command {
        Command::Verify { lattice }
        | Command::Table1 { lattice }
        | Command::Qec { lattice }
        | Command::Vmc { lattice } => {
            if lattice.is_some() {
                flags.push(("lattice", lattice.clone()));
            }
        }
        Command::Vb {
            lattice,
            nearest_neighbor,
            coverings,
        } => {
            if lattice.is_some() {
                flags.push(("lattice", lattice.clone()));
            }
            flags.push(("nearest_neighbor", on(*nearest_neighbor)));
            flags.push(("coverings", on(*coverings)));
        }
        Command::Fig1 { n2, n1 } => {
            flags.push(("n2", n2.clone()));
            flags.push(("n1", n1.clone()));
        }
        Command::ReproducePaper => {}
    }
    let s = Settings::from_sources(cli.config.as_deref(), flags)?;
    Ok((cli.command, s))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (command, s) = settings(cli)?;
    match command {
        Command::Verify { .. } => commands::verify(s),
        Command::Table1 { .. } => commands::table1(s),
        Command::Fig1 { .. } => commands::fig1(s),
        Command::Vb { .. } => commands::vb(s),
        Command::Qec { .. } => commands::qec(s),
        Command::Vmc { .. } => commands::vmc(s),
        Command::ReproducePaper => commands::reproduce_paper(s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cslab: {e}");
            ExitCode::from(e.code())
        }
    }
}
