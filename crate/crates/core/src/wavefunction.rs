//! Ground-state upper components for both spectrum branches.
//!
//! Both solve `(ξp + k + mω f(p) d/dp) ψ = 0`, i.e. `ψ'/ψ = −(ξp + k)/(mω f)`.
//! With `A(p) = arctan((4αp − 1)/√7)` the solutions are
//!
//! ```text
//! branch 1:  ln ψ = −ln f / (4mωα²) − A / (2√7 mωα²)
//! branch 2:  ln ψ = −(2mωα² − 1) ln f / (4mωα²) − A / (2√7 mωα² (2mωα² − 1))
//! ```
//!
//! The raw values can overflow for small `α`, so everything is carried in
//! log form and normalized on a [`WeightedGrid`] after subtracting the peak.
//! These are the physical (`γ = 1`) operators; `gamma` in the parameters is
//! not used here.

use serde::{Deserialize, Serialize};

use crate::algebra::{weight_function, weighted_inner_product_real, OscillatorParams, WeightedGrid};
use crate::error::{Error, Result};
use crate::spectrum::{second_branch_seed, Branch, SeedRoot};

const SQRT_7: f64 = 2.645_751_311_064_590_6;

fn arctan_term(p: f64, alpha: f64) -> f64 {
    ((4.0 * alpha * p - 1.0) / SQRT_7).atan()
}

fn require_deformed(params: &OscillatorParams) -> Result<()> {
    if params.alpha() > 0.0 {
        Ok(())
    } else {
        Err(Error::ParameterDomain(
            "ground-state closed forms need alpha > 0".into(),
        ))
    }
}

/// `ln ψ_{1(0)}(p)` with unit normalization constant.
pub fn ln_ground_state_branch1(p: f64, params: &OscillatorParams) -> Result<f64> {
    require_deformed(params)?;
    let c = params.m_omega_alpha_sq();
    Ok(-weight_function(p, params).ln() / (4.0 * c) - arctan_term(p, params.alpha()) / (2.0 * SQRT_7 * c))
}

/// `ln ψ̄_{1(0)}(p)` with unit normalization constant.
pub fn ln_ground_state_branch2(p: f64, params: &OscillatorParams) -> Result<f64> {
    if !params.admits_second_branch() {
        return Err(Error::ParameterDomain(format!(
            "the nonzero-ground-state branch needs 2mωα² > 1, got {}",
            2.0 * params.m_omega_alpha_sq()
        )));
    }
    let c = params.m_omega_alpha_sq();
    let shift = 2.0 * c - 1.0;
    Ok(-shift * weight_function(p, params).ln() / (4.0 * c)
        - arctan_term(p, params.alpha()) / (2.0 * SQRT_7 * c * shift))
}

/// `ψ_{1(0)}(p)` with `C = 1`. May overflow for very small `α`; prefer
/// [`GroundState`] for normalized values.
pub fn ground_state_branch1(p: f64, params: &OscillatorParams) -> Result<f64> {
    ln_ground_state_branch1(p, params).map(f64::exp)
}

/// `ψ̄_{1(0)}(p)` with `C̄ = 1`.
pub fn ground_state_branch2(p: f64, params: &OscillatorParams) -> Result<f64> {
    ln_ground_state_branch2(p, params).map(f64::exp)
}

/// `ln ψ` for the requested branch, `C = 1`.
pub fn ln_ground_state(branch: Branch, p: f64, params: &OscillatorParams) -> Result<f64> {
    match branch {
        Branch::ZeroGroundState => ln_ground_state_branch1(p, params),
        Branch::NonzeroGroundState => ln_ground_state_branch2(p, params),
    }
}

/// `(ξ, k)` of the lowering operator that annihilates the branch's ground state.
pub fn annihilator(branch: Branch, params: &OscillatorParams) -> Result<(f64, f64)> {
    match branch {
        Branch::ZeroGroundState => Ok((1.0, 0.0)),
        Branch::NonzeroGroundState => {
            let seed = second_branch_seed(&params.with_gamma(1.0)?, SeedRoot::Nontrivial)?;
            Ok((seed.xi, seed.k))
        }
    }
}

/// A ground state normalized to unit weighted norm on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub branch: Branch,
    pub params: OscillatorParams,
    /// `ln C`, so that `ψ(p) = exp(ln C + ln ψ_raw(p))`.
    pub ln_normalization: f64,
}

impl GroundState {
    /// Fixes `C` so that `⟨ψ|ψ⟩ = 1` under the grid's weighted quadrature.
    pub fn normalized(branch: Branch, params: &OscillatorParams, grid: &WeightedGrid) -> Result<Self> {
        let logs = grid
            .points()
            .iter()
            .map(|&p| ln_ground_state(branch, p, params))
            .collect::<Result<Vec<_>>>()?;
        let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let norm_sq: f64 = logs
            .iter()
            .zip(grid.weights())
            .map(|(l, w)| (2.0 * (l - peak)).exp() * w)
            .sum();
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(Error::NonConvergence {
                message: "ground-state norm is not finite and positive".into(),
                residuals: vec![norm_sq],
            });
        }
        Ok(Self {
            branch,
            params: *params,
            ln_normalization: -peak - 0.5 * norm_sq.ln(),
        })
    }

    /// Normalization constant `C`. Can overflow or underflow; `ln_normalization` cannot.
    pub fn normalization(&self) -> f64 {
        self.ln_normalization.exp()
    }

    pub fn value(&self, p: f64) -> Result<f64> {
        Ok((self.ln_normalization + ln_ground_state(self.branch, p, &self.params)?).exp())
    }

    pub fn samples(&self, points: &[f64]) -> Result<Vec<f64>> {
        points.iter().map(|&p| self.value(p)).collect()
    }
}

/// First derivative on a uniform grid: central differences inside,
/// second-order one-sided stencils at the two ends.
pub fn grid_derivative(values: &[f64], spacing: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "need at least three samples");
    (0..n)
        .map(|j| {
            if j == 0 {
                (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * spacing)
            } else if j == n - 1 {
                (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * spacing)
            } else {
                (values[j + 1] - values[j - 1]) / (2.0 * spacing)
            }
        })
        .collect()
}

/// `(ξp + k + mω f(p) d/dp) ψ` sampled on the grid, derivative by finite differences.
pub fn apply_annihilator(
    xi: f64,
    k: f64,
    psi: &[f64],
    grid: &WeightedGrid,
    params: &OscillatorParams,
) -> Result<Vec<f64>> {
    if psi.len() != grid.len() {
        return Err(Error::Usage(format!(
            "psi has {} samples but the grid has {}",
            psi.len(),
            grid.len()
        )));
    }
    let d = grid_derivative(psi, grid.spacing());
    Ok(grid
        .points()
        .iter()
        .zip(psi)
        .zip(&d)
        .map(|((&p, &v), &dv)| (xi * p + k) * v + params.m_omega() * weight_function(p, params) * dv)
        .collect())
}

/// `‖b⁻ψ‖_w / ‖ψ‖_w` for the branch's own annihilator; zero up to
/// discretization error.
pub fn annihilation_residual(branch: Branch, params: &OscillatorParams, grid: &WeightedGrid) -> Result<f64> {
    let state = GroundState::normalized(branch, params, grid)?;
    let psi = state.samples(grid.points())?;
    let (xi, k) = annihilator(branch, params)?;
    let image = apply_annihilator(xi, k, &psi, grid, params)?;
    let num = weighted_inner_product_real(&image, &image, grid)?;
    let den = weighted_inner_product_real(&psi, &psi, grid)?;
    Ok((num / den).sqrt())
}

/// Lower component of the zero-energy ground state, `ψ₂ = b⁻ψ₁ / (E + m)` with
/// `E = m`. Vanishes identically in the continuum.
pub fn lower_component_branch1(params: &OscillatorParams, grid: &WeightedGrid) -> Result<Vec<f64>> {
    let state = GroundState::normalized(Branch::ZeroGroundState, params, grid)?;
    let psi = state.samples(grid.points())?;
    let image = apply_annihilator(1.0, 0.0, &psi, grid, params)?;
    Ok(image.into_iter().map(|v| v / (2.0 * params.m())).collect())
}
