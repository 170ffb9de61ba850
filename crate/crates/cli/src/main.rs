use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stationary_cli::commands::{self, CliError, Emit, Outcome};

/// Analysis of stationary surfaces in Lorentz 4-space from Weierstrass data.
///
/// Exit status: 0 all checks pass, 1 a check failed, 2 bad configuration or
/// arguments, 3 internal error.
#[derive(Parser)]
#[command(name = "stationary", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on a configuration and write a JSON report.
    Analyze {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Immerse a polar grid and write `<prefix>.csv` and `<prefix>.obj`.
    Mesh {
        config: PathBuf,
        #[arg(long, default_value = "32x64")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the curves where |φ| = |ψ| and write them as CSV.
    Locus {
        config: PathBuf,
        /// `r_min,r_max` or `r_min,r_max,theta_min,theta_max`.
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a named example; emit its configuration or analyze it.
    Gallery {
        family: String,
        /// `name=value`; values are reals, `re,im` or `a+bi`.
        #[arg(long, num_args = 1..)]
        param: Vec<String>,
        #[arg(long, value_enum, default_value = "config")]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witnesses of (z̄ − ā)(z − b) = z^{m+1}/z̄^m over a parameter grid.
    LemmaA1 {
        #[arg(long, default_value = "1,2,3")]
        m: String,
        #[arg(long, default_value = "0,pi/5,pi/2", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 5)]
        a_grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ray margins showing |z − a|² = z³/|z|² has no solution for real a < −1.
    LemmaA2 {
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Analyze { config, out } => commands::run_analyze(&config, out.as_deref()),
        Command::Mesh { config, grid, out } => {
            let grid = commands::parse_grid(&grid)?;
            commands::run_mesh(&config, grid, &out.unwrap_or_else(commands::default_mesh_prefix))
        }
        Command::Locus { config, region, out } => commands::run_locus(&config, region.as_deref(), out.as_deref()),
        Command::Gallery { family, param, emit, out } => commands::run_gallery(&family, &param, emit, out.as_deref()),
        Command::LemmaA1 { m, t, a_grid, out } => commands::run_lemma_a1(&m, &t, a_grid, out.as_deref()),
        Command::LemmaA2 { a, out } => commands::run_lemma_a2(a, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(outcome)) => ExitCode::from(outcome.exit_code() as u8),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
