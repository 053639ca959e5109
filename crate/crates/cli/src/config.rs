//! The run configuration shared by the flag parser and `--config` files.

use std::path::PathBuf;

use diracosc_core::spectrum::Branch;
use diracosc_core::statmech::{ConstantConvention, SpectrumVariant};
use diracosc_core::OscillatorParams;
use serde::{Deserialize, Serialize};

/// Everything needed to reproduce one run. Identical configs give
/// byte-identical output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: OscillatorParams,
    #[serde(default)]
    pub output_format: OutputFormat,
    /// Standard output when absent. For `fig1` this is the output directory.
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(flatten)]
    pub task: Task,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// How `Z` is evaluated for `partition`, `thermo` and `fig1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact sum over the branch-1 levels below the energy cutoff.
    #[default]
    Direct,
    /// Closed Euler–Maclaurin form over the simplified spectrum.
    EmClosed,
    /// Euler–Maclaurin with the integral done by quadrature.
    EmNumeric,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    PaperLiteral,
    #[default]
    Consistent,
}

impl From<Convention> for ConstantConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::PaperLiteral => ConstantConvention::PaperLiteral,
            Convention::Consistent => ConstantConvention::Consistent,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    MaxMomentum,
    MinLengthOnly,
}

impl From<Variant> for SpectrumVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::MaxMomentum => SpectrumVariant::MaxMomentum,
            Variant::MinLengthOnly => SpectrumVariant::MinLengthOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    #[default]
    Zero,
    Nonzero,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Zero => Branch::ZeroGroundState,
            BranchArg::Nonzero => Branch::NonzeroGroundState,
        }
    }
}

/// Evenly spaced temperatures. `partition` and `thermo` read them in energy
/// units, `fig1` in units of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
}

/// Options shared by everything that evaluates `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionOptions {
    pub method: Method,
    pub convention: Convention,
    pub variant: Variant,
    /// Energy cutoff of the direct sum; `√(m² + P_b²)` when absent.
    pub e_cut: Option<f64>,
    /// Upper summation index of the numeric-integral path; the cutoff
    /// spectrum's `n_max` when absent.
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Task {
    Spectrum {
        branch: BranchArg,
        /// Fixed number of levels; overrides `e_cut`.
        n_max: Option<usize>,
        e_cut: Option<f64>,
    },
    Partition {
        #[serde(flatten)]
        options: PartitionOptions,
        #[serde(flatten)]
        temperatures: TemperatureGrid,
    },
    Thermo {
        #[serde(flatten)]
        options: PartitionOptions,
        #[serde(flatten)]
        temperatures: TemperatureGrid,
    },
    Oracle {
        grid_points: usize,
        levels: usize,
        /// `min(20, P_b)` when absent.
        p_cut: Option<f64>,
    },
    Wavefunction {
        branch: BranchArg,
        grid_points: usize,
    },
    Fig1 {
        alphas: Vec<f64>,
        #[serde(flatten)]
        options: PartitionOptions,
        #[serde(flatten)]
        temperatures: TemperatureGrid,
        /// Also write the `α = 0` reference curves.
        reference: bool,
        svg: bool,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Spectrum { .. } => "spectrum",
            Task::Partition { .. } => "partition",
            Task::Thermo { .. } => "thermo",
            Task::Oracle { .. } => "oracle",
            Task::Wavefunction { .. } => "wavefunction",
            Task::Fig1 { .. } => "fig1",
        }
    }
}
