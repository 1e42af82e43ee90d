use clap::{Parser, Subcommand};
use gandyn::cli::{self, CommonArgs, EXIT_CONFIG, EXIT_FAIL, EXIT_NUMERIC, EXIT_OK};
use gandyn::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gandyn",
    version,
    about = "Two-player gradient-dynamics laboratory: simulate, analyze stability, export phase-portrait grids, run the verification suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate or discrete-step a configured system; writes trajectory CSV + events JSON
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the vector field over a 2-D grid for external plotting
    Streamline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Equilibrium stability report (Jacobians, projection, bounds, certificate)
    Stability {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the verification suite (one pass/fail line per criterion)
    Acceptance {
        #[arg(long, default_value = "full")]
        suite: String,
        /// Run a single criterion (by number 1-12 or name)
        #[arg(long)]
        criterion: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Dimension(_) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate { config, out, seed } => {
            match cli::cmd_simulate(&CommonArgs {
                config_path: config,
                out_dir: out,
                seed,
            }) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            }
        }
        Command::Streamline { config, out, seed } => {
            match cli::cmd_streamline(&CommonArgs {
                config_path: config,
                out_dir: out,
                seed,
            }) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            }
        }
        Command::Stability { config, out, seed } => {
            match cli::cmd_stability(&CommonArgs {
                config_path: config,
                out_dir: out,
                seed,
            }) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            }
        }
        Command::Acceptance {
            suite,
            criterion,
            seed,
            out,
        } => match cli::cmd_acceptance(&suite, criterion.as_deref(), seed, out.as_deref()) {
            Ok(true) => EXIT_OK,
            Ok(false) => EXIT_FAIL,
            Err(e) => {
                eprintln!("error: {e}");
                exit_code_for(&e)
            }
        },
    };
    ExitCode::from(code as u8)
}
