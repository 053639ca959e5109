//! Energy spectra, ground states, and canonical thermodynamics of the
//! 1+1-dimensional Dirac oscillator in a deformed algebra with a minimal
//! length and a maximal momentum, `[x, p] = i(1 − αp + 2α²p²)`.
//!
//! The crate offers two independent routes to the spectrum (closed forms and
//! the shape-invariance recurrence), a third route through a discretized
//! `b⁺b⁻` operator ([`oracle`]), and three evaluations of the partition
//! function ([`statmech`]).

pub mod algebra;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod spectrum;
pub mod statmech;
pub mod tridiag;
pub mod wavefunction;

pub use algebra::{
    default_p_bound, weight_function, weighted_inner_product, MomentumBound, OscillatorParams, QuadratureRule,
    WeightedGrid,
};
pub use error::{Error, Result};
pub use spectrum::{build_spectrum, Branch, EnergySpectrum, LadderCoefficients};
pub use statmech::{PartitionEvaluation, PartitionMethod, SimplifiedSpectrumCoeffs, ThermoPoint};
