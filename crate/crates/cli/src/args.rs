use std::path::PathBuf;

use acampo_core::CodimWeight;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact counts of A'Campo forest configurations.
///
/// Exit status: 0 success, 1 usage error, 2 routes disagree or a mandatory
/// check failed, 3 resource guard tripped.
#[derive(Debug, Parser)]
#[command(name = "acampo", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Largest series box, in cells, any command may solve.
    #[arg(
        long,
        global = true,
        env = "ACAMPO_MAX_CELLS",
        default_value_t = 20_000
    )]
    pub max_cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Thm19,
    Remark,
    Both,
}

impl ConventionArg {
    pub fn weights(self) -> Vec<CodimWeight> {
        match self {
            ConventionArg::Thm19 => vec![CodimWeight::thm19()],
            ConventionArg::Remark => vec![CodimWeight::remark()],
            ConventionArg::Both => CodimWeight::builtins(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct Point {
    #[arg(long, short = 'c')]
    pub codim: usize,
    #[arg(long, short = 'd')]
    pub degree: usize,
}

#[derive(Debug, Args)]
pub struct Bounds {
    #[arg(long)]
    pub cmax: usize,
    #[arg(long)]
    pub dmax: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// #N1(c, d) by every requested route.
    Count {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
    },
    /// Table of #N1 over 0..=cmax x 0..=dmax, one per route.
    Table {
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
    },
    /// Table of simple configurations, series vs closed form.
    Simple {
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Run the verification suite.
    Verify {
        /// Run a single check by name.
        #[arg(long)]
        only: Option<String>,
        /// Oracle degree (overrides the scale's).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = ScaleArg::Full)]
        scale: ScaleArg,
    },
    /// Exact simple counts against the large-degree estimate.
    Asymptotics {
        #[arg(long, short = 'd')]
        degree: u64,
        #[arg(long, default_value_t = 2)]
        cmax: u64,
    },
    /// Enumerate flat chord diagrams of one degree.
    Oracle {
        #[arg(long, short = 'd')]
        degree: usize,
        /// Include every diagram (endpoint pairs and crossings) in JSON output.
        #[arg(long)]
        dump: bool,
    },
}
