use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toric_k_cli::commands::{self, AnalyzeOptions, Outcome, SearchOptions, TestConfigOptions};
use toric_k_cli::CliError;

/// Exact combinatorial K-stability checks for polarized toric manifolds.
///
/// POLYTOPE is a JSON file or `catalog:NAME` (see `toric-k catalog`).
/// Exit status: 0 success (positive or inconclusive analysis), 1 invalid
/// input or failed validation, 2 usage error.
#[derive(Parser)]
#[command(name = "toric-k", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Delzant condition, integrality and reflexivity.
    Validate {
        polytope: String,
        #[arg(long)]
        json: bool,
    },
    /// Moments, extremal function, the sufficient condition and the Fano criterion.
    Analyze {
        polytope: String,
        /// Interior point for the sufficient condition, e.g. `1/2,1/2`.
        #[arg(long)]
        x0: Option<String>,
        #[arg(long)]
        json: bool,
        /// Cross-check against the Ehrhart polynomial, counting up to this dilation.
        #[arg(long, value_name = "M_MAX")]
        oracle: Option<u64>,
    },
    /// Non-Archimedean functionals of the test configuration of (f, L).
    TestConfig {
        polytope: String,
        /// PL convex function file.
        #[arg(long = "f", value_name = "PATH")]
        function: String,
        /// Level L, at least max f.
        #[arg(long = "L", value_name = "VALUE", allow_hyphen_values = true)]
        level: String,
        /// Run the lattice-point oracle at the three largest powers of two up to M.
        #[arg(long = "oracle-mmax", value_name = "M")]
        oracle_mmax: Option<u64>,
        /// Number of intervals for the sampled DH cdf.
        #[arg(long, default_value_t = 16)]
        cdf_samples: usize,
        /// Also write the sampled DH cdf as CSV.
        #[arg(long, value_name = "PATH")]
        dh_csv: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Search crease functions max(0, <a, x> + b) for a destabilizer.
    SearchDestab {
        polytope: String,
        #[arg(long, default_value_t = 2)]
        grid_depth: u64,
        #[arg(long, default_value_t = 2)]
        max_slope: u64,
        /// Replace V by 0, testing plain uniform K-stability.
        #[arg(long)]
        assume_v_zero: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the built-in polytopes, or print one as a document.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<(Outcome, bool), CliError> {
    match cli.command {
        Command::Validate { polytope, json } => Ok((commands::validate(&polytope)?, json)),
        Command::Analyze {
            polytope,
            x0,
            json,
            oracle,
        } => Ok((commands::analyze(&polytope, &AnalyzeOptions { x0, oracle })?, json)),
        Command::TestConfig {
            polytope,
            function,
            level,
            oracle_mmax,
            cdf_samples,
            dh_csv,
            json,
        } => {
            let opts = TestConfigOptions {
                function,
                level,
                oracle_mmax,
                cdf_samples,
            };
            let outcome = commands::test_config(&polytope, &opts)?;
            if let Some(path) = dh_csv {
                std::fs::write(&path, commands::dh_csv(&outcome.report)).map_err(|e| CliError::Io {
                    path,
                    message: e.to_string(),
                })?;
            }
            Ok((outcome, json))
        }
        Command::SearchDestab {
            polytope,
            grid_depth,
            max_slope,
            assume_v_zero,
            json,
        } => {
            let opts = SearchOptions {
                grid_depth,
                max_slope,
                assume_v_zero,
            };
            Ok((commands::search_destab(&polytope, &opts)?, json))
        }
        Command::Catalog { name, json } => {
            let print_document = name.is_some();
            Ok((commands::catalog(name.as_deref())?, json || print_document))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, json)) => {
            print!("{}", outcome.render(json));
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
