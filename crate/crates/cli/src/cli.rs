//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(
    name = "arstat",
    version,
    about = "Verification reports for generalized A_r quantum statistics",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command. Any of them may also come from the
/// `--config` TOML file; flags given on the command line win.
#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Statistics sector. Inferred from --kind/--family when omitted.
    #[arg(long, global = true, value_enum)]
    pub sector: Option<SectorArg>,

    /// Number of modes r.
    #[arg(long, global = true)]
    pub modes: Option<usize>,

    /// Statistics order k.
    #[arg(long, global = true)]
    pub k: Option<u32>,

    /// Maximal total occupation kept in bosonic bases.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,

    /// Mode energies, comma separated (default: all 1.0).
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub energies: Option<Vec<f64>>,

    /// Pass threshold for residuals.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// TOML file with default values for any option.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for grid computations (0: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List the Fock basis in graded-lexicographic order.
    Basis,
    /// Check the triple relations and the Lie triple system axioms.
    VerifyAlgebra(AlgebraArgs),
    /// Check [H, a_i^±] = ±e_i a_i^±.
    VerifyHeisenberg,
    /// Compare the diagonal and ladder-built Hamiltonians.
    Spectrum,
    /// Check a differential realization against the ladder matrices.
    VerifyBargmann(BargmannArgs),
    /// Amplitudes of a coherent state, with an optional overlap.
    Coherent(CoherentArgs),
    /// Check that a coherent state is an eigenvector of every annihilator.
    VerifyEigenstate(EigenstateArgs),
    /// Quadrature check of a measure's moment equations.
    VerifyMeasure(MeasureArgs),
    /// Distance of a_i^±/sqrt(k) from Bose ladder entries along a k sweep.
    BoseLimit(BoseLimitArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Basis => "basis",
            Command::VerifyAlgebra(_) => "verify-algebra",
            Command::VerifyHeisenberg => "verify-heisenberg",
            Command::Spectrum => "spectrum",
            Command::VerifyBargmann(_) => "verify-bargmann",
            Command::Coherent(_) => "coherent",
            Command::VerifyEigenstate(_) => "verify-eigenstate",
            Command::VerifyMeasure(_) => "verify-measure",
            Command::BoseLimit(_) => "bose-limit",
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct AlgebraArgs {
    /// Random combinations drawn for the Lie triple axioms.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed of the ChaCha8 sampler.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BargmannArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CoherentArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Label coordinates, e.g. "0.5,0.3+0.2i".
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Second label; adds the overlap and its closed-form value.
    #[arg(long, allow_hyphen_values = true)]
    pub overlap_with: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct EigenstateArgs {
    /// State family (default gk; others are expected to fail).
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct MeasureArgs {
    #[arg(long, value_enum)]
    pub family: Option<MeasureArg>,
    /// Single moment index, comma separated; omit for the standard grid.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Gauss nodes per axis of the coarse rule.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Allowed relative change when the nodes are doubled.
    #[arg(long)]
    pub quad_tol: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BoseLimitArgs {
    /// Values of k, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k_list: Option<Vec<u32>>,
    /// Largest total occupation probed.
    #[arg(long)]
    pub probe_total: Option<usize>,
    /// Required deviation at the largest k.
    #[arg(long)]
    pub bound: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorArg {
    Bosonic,
    Fermionic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum KindArg {
    #[value(name = "I")]
    #[serde(rename = "I")]
    One,
    #[value(name = "II")]
    #[serde(rename = "II")]
    Two,
    #[value(name = "fermionic")]
    #[serde(rename = "fermionic")]
    Fermionic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Gk,
    Kp,
    Cpr,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Bessel,
    Ball,
    Simplex,
    Projective,
}

/// Contents of a `--config` file. Keys mirror the long flag names with
/// dashes replaced by underscores.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub sector: Option<SectorArg>,
    pub modes: Option<usize>,
    pub k: Option<u32>,
    pub cutoff: Option<usize>,
    pub energies: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub kind: Option<KindArg>,
    pub family: Option<String>,
    pub point: Option<String>,
    pub overlap_with: Option<String>,
    pub n: Option<Vec<u32>>,
    pub nodes: Option<usize>,
    pub quad_tol: Option<f64>,
    pub k_list: Option<Vec<u32>>,
    pub probe_total: Option<usize>,
    pub bound: Option<f64>,
}
