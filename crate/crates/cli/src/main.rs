mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Failure;

#[derive(Parser, Debug)]
#[command(name = "envelope", version, about = "Integrals of stable envelopes on T*Gr(k,n)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Z,
    Full,
    Closed,
    Paths,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// h^{k(n-k)}-scaled integral of one stable envelope.
    Integral {
        n: usize,
        k: usize,
        /// Fixed point as comma-separated indices, e.g. 2,3.
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Z)]
        method: MethodArg,
        /// Also print the localization sum before the limit.
        #[arg(long)]
        sum: bool,
    },
    /// Integrals for every fixed point of T*Gr(k,n).
    Table {
        n: usize,
        k: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
    },
    /// Layers 2..=n_max of the simplex of integrals.
    Simplex(SimplexArgs),
    /// Layers of the reduced simplex (layer polynomials over a+2b+c).
    ReducedSimplex {
        n_max: usize,
    },
    /// Coefficient of x^{n-1} y^{n-(i2-i1)} z^{i1} in the generating function F.
    GfCoeff {
        n: usize,
        i1: usize,
        i2: usize,
        /// Truncation order; must exceed 3n.
        #[arg(long)]
        order: Option<u32>,
    },
    /// Paths to a Young diagram and their weighted sum.
    Paths(PathsArgs),
    /// Restrictions of every stable envelope to every fixed point.
    StabMatrix {
        n: usize,
        k: usize,
        /// Chamber as a permutation of 1..n, e.g. 3,1,2.
        #[arg(long)]
        chamber: Option<String>,
    },
    /// Vertices and edges of the moment graph.
    MomentGraph {
        n: usize,
        k: usize,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SimplexArgs {
    pub n_max: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long)]
    pub reduced: bool,
    #[arg(long)]
    pub extended: bool,
}

#[derive(Args, Debug)]
pub struct PathsArgs {
    pub n: usize,
    pub k: usize,
    /// Partition as comma-separated parts, e.g. "2,1"; empty for the empty
    /// partition.
    #[arg(long, default_value = "")]
    pub partition: String,
    /// List every path.
    #[arg(long, group = "mode")]
    pub list: bool,
    /// The weighted sum and its limit (default).
    #[arg(long, group = "mode")]
    pub sum: bool,
    /// Compare path sums with localization for every partition in the box.
    #[arg(long, group = "mode")]
    pub verify44: bool,
    /// Compare path sums with the reflected sums of complements.
    #[arg(long, group = "mode")]
    pub verify45: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    pub n: Option<usize>,
    pub k: Option<usize>,
    /// Largest layer for the simplex suite.
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    /// Number of random chambers for the covariance suite.
    #[arg(long, default_value_t = 10)]
    pub taus: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Support, normalization, degree and GKM relations.
    Axioms,
    /// Chamber relabeling of localization sums.
    Covariance,
    /// Divisibility of the combined numerator by the Vandermonde.
    Vandermonde,
    /// Agreement and integrality of all integral methods.
    Integrals,
    /// Recurrences, divisibility and generating functions of the simplex.
    Simplex,
    /// Path sums against localization and under complement.
    Paths,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(Failure::Usage.code());
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.kind.code())
        }
    }
}
