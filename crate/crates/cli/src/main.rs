//! `latpack`: maximal contact numbers of lattice sphere packings.
//!
//! Exit codes: 0 success, 2 usage, 3 domain or instance error, 4 a bound
//! check failed (solver or construction bug).

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "latpack", version, about = "Maximal contact numbers of finite lattice sphere packings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the maximal contact number of n spheres on a lattice.
    Solve(SolveArgs),
    /// Print the contact-number upper bounds for n spheres in R^3.
    Bounds(BoundsArgs),
    /// Build the k-th octahedral packing on the FCC lattice.
    Octa(OctaArgs),
    /// Count bonds in an XYZ structure and compare them with the bounds.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub(crate) enum AlgorithmArg {
    Auto,
    Exhaustive,
    Bnb,
}

#[derive(Args)]
pub(crate) struct SolveArgs {
    /// Preset (sc, fcc, bcc) or path to a lattice TOML file.
    #[arg(long, required_unless_present = "compound")]
    pub(crate) lattice: Option<String>,
    /// Number of spheres.
    #[arg(long, required_unless_present = "compound", value_parser = clap::value_parser!(u64).range(1..))]
    pub(crate) n: Option<u64>,
    /// Sphere radius; defaults to 1 for presets and to the file's value otherwise.
    #[arg(long)]
    pub(crate) radius: Option<f64>,
    /// Compound TOML file (element, radius, Z, lattice); replaces --lattice/--n.
    #[arg(long, conflicts_with_all = ["lattice", "n"])]
    pub(crate) compound: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub(crate) algorithm: AlgorithmArg,
    /// Override the candidate box side (default ceil(n/d)).
    #[arg(long)]
    pub(crate) box_k: Option<usize>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    pub(crate) threads: Option<usize>,
    /// Stop after this many search nodes and report the best packing found.
    #[arg(long)]
    pub(crate) node_limit: Option<u64>,
    #[arg(long)]
    pub(crate) json: bool,
    /// Write the witness packing as XYZ.
    #[arg(long)]
    pub(crate) export_xyz: Option<PathBuf>,
    /// Element symbol used in XYZ output.
    #[arg(long, default_value = "X")]
    pub(crate) element: String,
}

#[derive(Args)]
pub(crate) struct BoundsArgs {
    #[arg(long)]
    pub(crate) n: u64,
    #[arg(long, conflicts_with = "general_only")]
    pub(crate) lattice_only: bool,
    #[arg(long)]
    pub(crate) general_only: bool,
    #[arg(long)]
    pub(crate) json: bool,
}

#[derive(Args)]
pub(crate) struct OctaArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub(crate) k: u64,
    #[arg(long, default_value_t = 1.0)]
    pub(crate) radius: f64,
    #[arg(long)]
    pub(crate) export_xyz: Option<PathBuf>,
    #[arg(long, default_value = "X")]
    pub(crate) element: String,
    #[arg(long)]
    pub(crate) json: bool,
}

#[derive(Args)]
pub(crate) struct AnalyzeArgs {
    #[arg(long)]
    pub(crate) xyz: PathBuf,
    #[arg(long)]
    pub(crate) radius: f64,
    /// Treat the structure as a crystal and include the lattice bound.
    #[arg(long, action = ArgAction::Set, default_value_t = false)]
    pub(crate) crystal: bool,
    #[arg(long)]
    pub(crate) json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Bounds(args) => commands::bounds(args),
        Command::Octa(args) => commands::octa(args),
        Command::Analyze(args) => commands::analyze(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
