use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "pottslab",
    version,
    about = "Exact Tutte/Potts polynomials, thermodynamics, zeros and Monte Carlo"
)]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graph utilities.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Tutte polynomial t(G; x, y) as JSON.
    Tutte(PolyArgs),
    /// Chromatic polynomial C(G; x) as JSON.
    Chromatic(PolyArgs),
    /// Potts partition functions.
    #[command(subcommand)]
    Potts(PottsCommand),
    /// Exact thermodynamics.
    #[command(subcommand)]
    Thermo(ThermoCommand),
    /// Complex zeros as CSV.
    Zeros(ZerosArgs),
    /// Monte Carlo simulation.
    Simulate(SimulateArgs),
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
}

#[derive(Debug, Subcommand)]
pub enum PottsCommand {
    /// Evaluate the partition function at one point.
    Eval(EvalArgs),
    /// Z(G; q, v) as JSON.
    Poly(PolyArgs),
}

#[derive(Debug, Subcommand)]
pub enum ThermoCommand {
    /// U, C, S, F, f over a temperature grid as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cycle,
    Path,
    Complete,
    Grid,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Free,
    Torus,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Vertex count for cycle, path and complete graphs.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long, value_enum, default_value = "free")]
    pub boundary: BoundaryArg,
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PolyArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianArg {
    H1,
    H2,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Tutte,
    Poly,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("temperature").required(true).args(["t", "k"])))]
pub struct EvalArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// Number of spin states; non-integer values need --method tutte or poly.
    #[arg(long)]
    pub q: f64,
    /// Uniform coupling J [default: 1].
    #[arg(long = "J")]
    pub j: Option<f64>,
    /// Temperature T.
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Reduced coupling K = J / (kappa T).
    #[arg(long = "K")]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value = "h1")]
    pub hamiltonian: HamiltonianArg,
    #[arg(long, value_enum, default_value = "poly")]
    pub method: Method,
    /// Per-edge couplings, one "e_index J_e" pair per line.
    #[arg(long, conflicts_with_all = ["j", "k"])]
    pub weights: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long)]
    pub q: u32,
    #[arg(long = "J", default_value_t = 1.0)]
    pub j: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value = "h1")]
    pub hamiltonian: HamiltonianArg,
    #[arg(long, default_value_t = 0.1)]
    pub t_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t_max: f64,
    /// Number of evenly spaced temperatures.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Q,
    V,
}

#[derive(Debug, Args, Serialize)]
pub struct ZerosArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    /// Variable to solve for. Plane q without --fixed gives chromatic zeros.
    #[arg(long, value_enum)]
    pub plane: Plane,
    /// Value of the other variable, real or complex such as "1.5+0.5i".
    #[arg(long)]
    pub fixed: Option<String>,
    /// Append each root's distance to the Fisher circles |v| = sqrt 2, |v + 2| = sqrt 2.
    #[arg(long)]
    pub fisher: bool,
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmArg {
    Metropolis,
    Heatbath,
    Wolff,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanArg {
    Sequential,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "metropolis")]
    pub algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Uniform coupling J [default: 1].
    #[arg(long = "J")]
    pub j: Option<f64>,
    #[arg(long = "T")]
    pub t: f64,
    /// Field strength, coupled to --field-spin.
    #[arg(long = "H", default_value_t = 0.0)]
    pub h: f64,
    #[arg(long, default_value_t = 0)]
    pub field_spin: u32,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value = "h1")]
    pub hamiltonian: HamiltonianArg,
    #[arg(long, default_value_t = 10_000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 1000)]
    pub equil: usize,
    #[arg(long, default_value_t = 1)]
    pub measure_every: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent chains; chain i uses RNG stream i.
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long, value_enum, default_value = "random")]
    pub scan: ScanArg,
    /// Start every spin at this value instead of a random state.
    #[arg(long)]
    pub init_spin: Option<u32>,
    /// Per-edge couplings, one "e_index J_e" pair per line.
    #[arg(long, conflicts_with = "j")]
    pub weights: Option<PathBuf>,
    /// Write the measured series of chain 0 as CSV.
    #[arg(long)]
    pub emit_series: Option<PathBuf>,
    /// Output file for the observables JSON (default: stdout).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}
