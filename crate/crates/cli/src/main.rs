//! `quiverlab` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "quiverlab",
    version,
    about = "Roots, strata and moment maps of quiver representations"
)]
#[command(arg_required_else_help = true, propagate_version = true)]
struct Cli {
    /// Output layout.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

/// Vertex data shared by the subcommands that take `--lambda` and `--alpha`.
#[derive(Debug, clap::Args)]
struct Point {
    /// Quiver file.
    quiver: PathBuf,
    /// Dimension vector, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Weight, comma separated rationals `p/q`; zero when omitted.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive roots below a bound, in lexicographic order.
    Roots {
        quiver: PathBuf,
        #[arg(long)]
        bound: String,
    },
    /// Membership in R_λ⁺ and Σ_λ, nonemptiness and dimension.
    Sigma(Point),
    /// Representation types of α with their stratum dimensions.
    Types(Point),
    /// Local quivers of the representation types of α.
    Local {
        #[command(flatten)]
        point: Point,
        /// Only the type with this 1-based index.
        #[arg(long = "type")]
        index: Option<usize>,
    },
    /// Geometry summary of N(λ,α).
    Report(Point),
    /// Lagrangian, Darboux certificate and extracted quiver of a quadruple file.
    Darboux { file: PathBuf },
    /// Numerical point of the fibre μ⁻¹(λ) and its tangent dimension.
    Solve {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        starts: usize,
    },
    /// Conjugacy classes and their quivers.
    #[command(subcommand)]
    Kp(KpCommand),
}

#[derive(Debug, Subcommand)]
enum KpCommand {
    /// Chain data and the quiver of one class.
    Class { file: PathBuf },
    /// Star quiver of several classes of the same size.
    Star {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Legs for one class per vertex attached to a quiver.
    Legs {
        quiver: PathBuf,
        #[arg(required = true)]
        classes: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
