//! avgdist: bounds, exact LP solves, dual certificates, and exhaustive
//! checks for the minimum average distance of binary codes.
//!
//! Exit codes: 0 success, 2 usage, 3 resource guard, 4 internal.

mod commands;
mod render;

use clap::{Parser, Subcommand, ValueEnum};
use render::Sink;
use std::path::PathBuf;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<avgdist_core::Error> for Failure {
    fn from(e: avgdist_core::Error) -> Self {
        let code = match &e {
            avgdist_core::Error::SizeGuard { .. } => 3,
            avgdist_core::Error::Internal(_) => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: format!("output failed: {e}") }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Parser)]
#[command(name = "avgdist", version, about = "average-distance bounds for binary codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gap bounds (distance below n/2) over a density grid
    Bounds {
        /// density grid lo:hi:step, rationals or decimals, inside (0, 1/2]
        #[arg(long, default_value = "1/100:1/2:1/100")]
        grid: String,
        /// also emit subcube and Hamming-ball data points at this dimension
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact simplex solve of the distance or weight program
    Lp {
        #[arg(long)]
        n: usize,
        /// code size; the density is M / 2^n
        #[arg(long = "M")]
        m_size: Option<u64>,
        /// density; decimals snap to the nearest M / 2^n (snap is echoed)
        #[arg(long)]
        a: Option<String>,
        /// weight level; 1 is the average-distance program
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// solve the maximization dual instead of the primal
        #[arg(long)]
        dual: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a dual-feasible certificate and verify it
    Certificate {
        #[arg(long)]
        n: usize,
        /// two-degree certificate parameter in (1/2, 1); "star" derives it from --a
        #[arg(long, conflicts_with = "fwy")]
        beta: Option<String>,
        /// the alternating certificate with a single 1/2 entry
        #[arg(long, required_unless_present = "beta")]
        fwy: bool,
        /// weight level for --fwy
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// density for the objective value; continuous, never snapped
        #[arg(long)]
        a: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search with bound comparisons; JSON lines
    Oracle {
        #[arg(long, required_unless_present = "sweep")]
        n: Option<usize>,
        /// code (or support) size; the density is M / 2^n
        #[arg(long = "M")]
        m_size: Option<u64>,
        /// density; decimals snap to the nearest M / 2^n (snap is echoed)
        #[arg(long)]
        a: Option<String>,
        /// maximize the Fourier weight at this level instead of minimizing distance
        #[arg(long, conflicts_with = "noise")]
        weights: Option<usize>,
        /// scan agreement-probability extremes at this correlation
        #[arg(long)]
        noise: Option<String>,
        /// LP/oracle agreement sweep over every M for n up to this limit
        #[arg(long, conflicts_with_all = ["n", "m_size", "a", "weights", "noise"])]
        sweep: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-format data reproducing the gap-versus-density figure
    Figure1 {
        #[arg(long, default_value = "1/100:1/2:1/100")]
        grid: String,
        /// dimension of the Hamming-ball family
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bounds { grid, n, format, out } => {
            commands::run_bounds(&grid, n, format, &Sink::new(out))
        }
        Command::Lp { n, m_size, a, m, dual, format, out } => {
            commands::run_lp(n, m_size, a.as_deref(), m, dual, format, &Sink::new(out))
        }
        Command::Certificate { n, beta, fwy, m, a, format, out } => commands::run_certificate(
            n,
            beta.as_deref(),
            fwy,
            m,
            a.as_deref(),
            format,
            &Sink::new(out),
        ),
        Command::Oracle { n, m_size, a, weights, noise, sweep, out } => commands::run_oracle(
            n,
            m_size,
            a.as_deref(),
            weights,
            noise.as_deref(),
            sweep,
            &Sink::new(out),
        ),
        Command::Figure1 { grid, n, format, out } => {
            commands::run_figure1(&grid, n, format, &Sink::new(out))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(f) = run(cli) {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}
