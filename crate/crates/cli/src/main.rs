mod args;
mod commands;

use biharm_core::{Error, ErrorClass};
use clap::{Parser, Subcommand};
use std::process::ExitCode;

/// Biharmonic conformal immersions of surfaces: residuals, reductions and
/// the built-in verification suite.
#[derive(Debug, Parser)]
#[command(name = "biharm", version)]
struct Cli {
    /// Worker threads for grid sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the verification suite
    Verify(commands::VerifyArgs),
    /// Sample the biharmonic conformal residual over a grid (CSV)
    Residual(commands::ResidualArgs),
    /// Rotational surfaces: check, solve or constrain λ(u)
    Rotational(commands::RotationalArgs),
    /// Energy, bienergy and ∫λ^p over a region
    Energy(commands::EnergyArgs),
    /// CMC data in isothermal coordinates: sinh-Gordon residual and admissibility
    SinhGordon(commands::SinhGordonArgs),
    /// Vertical cylinders in S²×ℝ: reduced condition along the rulings
    S2xr(commands::S2xrArgs),
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Config => 2,
                ErrorClass::Math => 3,
                ErrorClass::Degenerate => 4,
            },
            CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot set up thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Residual(a) => commands::residual(a),
        Command::Rotational(a) => commands::rotational(a),
        Command::Energy(a) => commands::energy(a),
        Command::SinhGordon(a) => commands::sinh_gordon(a),
        Command::S2xr(a) => commands::s2xr(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
