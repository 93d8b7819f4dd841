//! Command-line surface. Every parameter is optional here so that config-file values and
//! defaults can fill the gaps; see [`crate::params`] for the resolved forms.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "fqlab", version, about = "First-quantized dynamics, state preparation, shadows and cost models")]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON config file; flags override it, it overrides defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Replay a run from its manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// With --manifest: write outputs into this directory instead of their recorded paths.
    #[arg(long, requires = "manifest")]
    pub replay_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split-operator time evolution of a first-quantized state.
    Evolve(EvolveArgs),
    /// Real-time TDHF trajectory.
    Tdhf(TdhfArgs),
    /// Slater-determinant preparation through the Givens/conversion circuit.
    Prep(PrepArgs),
    /// Classical-shadow estimation of k-RDM elements.
    Shadows(ShadowsArgs),
    /// Cost formulas and regime tables.
    Cost(CostArgs),
    /// Prepare, evolve, measure and compare against the exact RDM.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct GridArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct HamiltonianArgs {
    /// Nuclei file: one `ζ x [y z]` line per nucleus.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nuclei: Option<PathBuf>,
    /// Coulomb softening shift s in 1/(r + s).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soften: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub hamiltonian: HamiltonianArgs,
    /// Electron count for the default initial state, a Slater determinant drawn from --seed (when --in is absent).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Product-formula order: 1, 2 or 4.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Input state snapshot.
    #[arg(long = "in")]
    #[serde(rename = "in", skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Output state snapshot.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Optional CSV with norm and energy before and after.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct TdhfArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub hamiltonian: HamiltonianArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<usize>,
    /// Initial orbitals CSV (N rows × 2η columns); defaults to the lowest plane waves.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// `midpoint` or `rk4`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    /// Comma list from: energy, rdm-diag, fock-norm.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observables: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct PrepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Orbital coefficients CSV: N rows × 2η columns (re, im per orbital).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Check the prepared state against the determinant oracle and the Toffoli formula.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub verify: bool,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ShadowsArgs {
    #[arg(long = "in")]
    #[serde(rename = "in", skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Sample count, or `auto` for K·b from the variance bound.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Elements file (`i1,..,ik;j1,..,jk` per line) or `all-1rdm`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Optional raw sample dump (Clifford ids and outcomes).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct CostArgs {
    /// `lo:hi:step` grid of α for the regime table.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_range: Option<String>,
    /// `N,η,t,ε[,M,L,λ,C,k]`; empty fields are skipped.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    /// Regime-table CSV output.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Query report JSON output (stdout when absent).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ExperimentArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub hamiltonian: HamiltonianArgs,
    /// Orbital coefficients CSV; identity orbitals when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// JSON report; defaults to the estimates path with a `.report.json` extension.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}
