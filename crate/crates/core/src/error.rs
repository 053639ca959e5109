use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter is outside its admissible range.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The nondeformed algebra has unbounded momentum, so no default cutoff exists.
    #[error("no finite bound: alpha = 0 has unbounded momentum, supply an explicit cutoff")]
    NoFiniteBound,

    /// The requested quantity is not defined for these parameters.
    #[error("parameter domain: {0}")]
    ParameterDomain(String),

    /// The energy cutoff lies below the lowest level.
    #[error("empty spectrum: cutoff {e_cut} lies below the lowest level {lowest}")]
    EmptySpectrum { e_cut: f64, lowest: f64 },

    /// Caller-side misuse (mismatched lengths, bad grid sizes, ...).
    #[error("usage: {0}")]
    Usage(String),

    /// An iterative numerical method did not reach its tolerance.
    #[error("no convergence: {message} (residuals: {residuals:?})")]
    NonConvergence { message: String, residuals: Vec<f64> },

    /// The partition function evaluated to a nonpositive number, so
    /// thermodynamic potentials are undefined there.
    #[error("nonpositive partition function Z = {z} at T = {temperature}")]
    NonPositivePartition { temperature: f64, z: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
