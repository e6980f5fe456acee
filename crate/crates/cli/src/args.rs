use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ihara", version, about = "Ihara zeta functions, covering towers and L2-zeta limits")]
pub struct Cli {
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Where to write the run manifest (default: next to the outputs).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite zeta functions.
    #[command(subcommand)]
    Zeta(ZetaCommand),
    /// Single derived covers.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Covering towers and convergence runs.
    #[command(subcommand)]
    Tower(TowerCommand),
    /// L2-zeta functions of Z^k covers.
    #[command(subcommand)]
    L2(L2Command),
    /// The tree determinant identity.
    #[command(subcommand)]
    Deitmar(DeitmarCommand),
}

#[derive(Debug, Subcommand)]
pub enum ZetaCommand {
    /// Determinant polynomial and point values.
    Compute(ComputeArgs),
    /// Zeros of a regular graph's zeta function.
    Zeros(ZerosArgs),
    /// Compare the rational form with the Euler product.
    EulerCheck(EulerCheckArgs),
    /// Check the functional equation.
    FunctionalCheck(FunctionalCheckArgs),
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Graph file: {"vertices": n, "edges": [[a,b], ...], "name": ...}.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Write the coefficients of det(I - A u + Q u^2), ascending.
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// Points at which to evaluate Z, e.g. 0.25 or 0.1+0.2i. Write
    /// `--eval=-0.1+0.2i` for a value starting with a minus sign.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub eval: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Fail with exit code 2 unless every zero lies on C.
    #[arg(long = "check-C")]
    pub check_c: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Zeros CSV: re,im,multiplicity,dist_to_C.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Polyline CSV of the set C for plotting.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EulerCheckArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = 12)]
    pub terms: usize,
}

#[derive(Debug, Args)]
pub struct FunctionalCheckArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Explicit points (same syntax as `zeta compute --eval`).
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub at: Vec<String>,
    /// Number of seeded random points in the square |re|, |im| <= 1.2.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    /// Build the derived graph of a finite voltage assignment.
    Build(CoverBuildArgs),
}

#[derive(Debug, Args)]
pub struct CoverBuildArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Voltage file: {"group": {"finite": [n1, ...]}, "voltages": [[...], ...]}.
    #[arg(long)]
    pub voltages: PathBuf,
    /// Output graph file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum TowerCommand {
    /// Build every level of a tower and write the graphs.
    Build(TowerBuildArgs),
    /// Measure convergence of normalised zetas to a target.
    Run(TowerRunArgs),
}

#[derive(Debug, Args)]
pub struct TowerBuildArgs {
    /// Tower spec file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TowerRunArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// constant:<value> or torus:<voltage-file>.
    #[arg(long)]
    pub target: String,
    /// disk:<radius>:<resolution>:<margin>
    #[arg(long)]
    pub grid: String,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Samples per piece of the C polyline.
    #[arg(long, default_value_t = 256)]
    pub overlay_samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum L2Command {
    /// Evaluate the L2-zeta of a Z^k cover over a grid.
    Torus(L2TorusArgs),
    /// Spectral distribution function of a Z^k cover or a finite graph.
    Cdf(L2CdfArgs),
}

#[derive(Debug, Args)]
pub struct L2TorusArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Voltage file with a free group, e.g. {"group": {"free": 2}, ...}.
    #[arg(long)]
    pub voltages: PathBuf,
    #[arg(long)]
    pub grid: String,
    /// CSV: re,im,value_re,value_im.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct L2CdfArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Free voltages; without them the graph's own spectrum is used.
    #[arg(long)]
    pub voltages: Option<PathBuf>,
    /// Midpoint grid size per torus dimension.
    #[arg(long, default_value_t = 64)]
    pub points: usize,
    /// CSV: lambda,F.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DeitmarCommand {
    /// Residual of the identity on an Omega grid.
    Check(DeitmarArgs),
}

#[derive(Debug, Args)]
pub struct DeitmarArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}
