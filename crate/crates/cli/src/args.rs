use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pihier",
    version,
    about = "Painlevé I hierarchy and small-dispersion KdV laboratory"
)]
pub struct Cli {
    /// Worker threads for sweeps and parallel sub-experiments.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory for artifacts given by relative paths or default names.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symbolic hierarchy equations.
    Hierarchy {
        #[command(subcommand)]
        action: HierarchyCmd,
    },
    /// g-function data and its positivity certificate.
    Gfun(GfunArgs),
    /// Pole-free boundary-value solutions.
    Painleve {
        #[command(subcommand)]
        action: PainleveCmd,
    },
    /// Hopf critical points, KdV runs and the double-scaling comparison.
    Kdv {
        #[command(subcommand)]
        action: KdvCmd,
    },
    /// Same as `kdv compare`.
    Compare(CompareArgs),
    /// Runs the acceptance suite.
    Verify(VerifyArgs),
    /// Executes JSON run manifests.
    Run(RunArgs),
}

#[derive(Debug, Subcommand)]
pub enum HierarchyCmd {
    /// The m-th equation with its Lenard terms.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub m: u32,
    /// Leave out the `t_j L_{j-1}` terms.
    #[arg(long)]
    pub no_times: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GfunArgs {
    /// One order or a comma-separated sweep.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u32>,
    /// Sign(s) of s, +1 or -1.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "1",
        allow_hyphen_values = true
    )]
    pub sign: Vec<i32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PainleveCmd {
    /// Solves for the pole-free solution at the given times.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub m: u32,
    /// `t_1, ..., t_{m-1}`; zeros when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Vec<f64>,
    /// Half-width of the truncated domain.
    #[arg(long = "S")]
    pub s: Option<f64>,
    /// Number of grid nodes.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub stencil_order: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// CSV `s,q`; a JSON sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum KdvCmd {
    /// Critical point of the Hopf solution and the constant k.
    Critical(CriticalArgs),
    /// Evolves the initial data to time t.
    Run(KdvRunArgs),
    /// KdV against the hierarchy prediction near the critical point.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// INI file with [data], [grid] and [compare] sections.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Order of the catastrophe; 2 gives the -sech^2 profile.
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KdvRunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub courant: Option<f64>,
    /// CSV `x,u`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// At least two values.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A1-A8 only (the default).
    #[arg(long, conflicts_with = "long")]
    pub fast: bool,
    /// Adds the double-scaling criteria A9 and A10.
    #[arg(long)]
    pub long: bool,
    /// Directory of the hierarchy fixtures.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// One or more manifests; they run concurrently up to `--jobs`.
    #[arg(long, num_args = 1.., required = true)]
    pub manifest: Vec<PathBuf>,
    /// Validate only and print each manifest in canonical form.
    #[arg(long)]
    pub check: bool,
}
