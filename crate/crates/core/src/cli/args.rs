use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::eigensolver::{Backend, SolverConfig};

#[derive(Debug, Parser)]
#[command(
    name = "spectral-gap",
    version,
    about = "Eigenvalue lower bounds and one-dimensional comparison problems"
)]
pub struct Cli {
    /// Attach run metadata (version, wall-clock time) to the output.
    #[arg(long, global = true)]
    pub meta: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form lower bounds, optionally with the numeric model eigenvalue.
    Bound(BoundArgs),
    /// Solve the comparison eigenvalue problem.
    Solve(SolveArgs),
    /// Replay the lower-bound argument on the computed eigenfunction.
    Verify(VerifyArgs),
    /// Evaluate a parameter grid described by a JSON file and write CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct KahlerArgs {
    /// Complex dimension.
    #[arg(long)]
    pub m: u32,
    /// Holomorphic sectional curvature lower bound is 4·kappa1.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa1: f64,
    /// Orthogonal Ricci lower bound is 2(m−1)·kappa2.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa2: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SolverArgs {
    /// Initial number of mesh nodes.
    #[arg(long)]
    pub mesh: Option<usize>,
    /// Target relative accuracy of the eigenvalue.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Mesh doublings allowed beyond the first comparison.
    #[arg(long)]
    pub max_refinements: Option<usize>,
}

impl SolverArgs {
    pub fn config(&self, backend: Backend) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            mesh_points: self.mesh.unwrap_or(d.mesh_points),
            rel_tol: self.tol.unwrap_or(d.rel_tol),
            max_refinements: self.max_refinements.unwrap_or(d.max_refinements),
            backend,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub kahler: KahlerArgs,
    #[arg(long)]
    pub diameter: f64,
    /// A Ricci lower bound Ric ≥ (n−1)K, enabling the Riemannian estimates.
    #[arg(long, allow_negative_numbers = true)]
    pub ricci_k: Option<f64>,
    /// Also solve the model problem.
    #[arg(long)]
    pub with_model: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Fd,
    Shoot,
    Both,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Fd => Backend::FiniteDifference,
            BackendArg::Shoot => Backend::Shooting,
            BackendArg::Both => Backend::Both,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Solve the Riemannian problem with drift (n−1)T_K instead.
    #[arg(long, requires_all = ["n", "k"], conflicts_with_all = ["m", "kappa1", "kappa2"])]
    pub riemannian: bool,
    #[arg(long, required_unless_present = "riemannian")]
    pub m: Option<u32>,
    #[arg(
        long,
        allow_negative_numbers = true,
        required_unless_present = "riemannian"
    )]
    pub kappa1: Option<f64>,
    #[arg(
        long,
        allow_negative_numbers = true,
        required_unless_present = "riemannian"
    )]
    pub kappa2: Option<f64>,
    /// Real dimension (with --riemannian).
    #[arg(long)]
    pub n: Option<u32>,
    /// Ricci lower bound per direction (with --riemannian).
    #[arg(long = "K", id = "k", allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long)]
    pub diameter: f64,
    #[arg(long, value_enum, default_value = "both")]
    pub backend: BackendArg,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub kahler: KahlerArgs,
    #[arg(long)]
    pub diameter: f64,
    /// Exponent a > 1 (repeatable); s = 1 − 1/a.
    #[arg(long = "a", allow_negative_numbers = true, default_values_t = [2.0])]
    pub a: Vec<f64>,
    /// Simpson panels for the quadrature.
    #[arg(long)]
    pub panels: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep description.
    pub config: PathBuf,
    /// CSV destination; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
