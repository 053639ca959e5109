//! Independent check of the spectrum: discretize `b⁻ = ξp + k + mω f(p) d/dp`
//! in the momentum representation, build `b⁺` as its adjoint under the
//! weighted inner product, and diagonalize `b⁺b⁻`, whose eigenvalues are
//! `E² − m²`. Nothing here uses the ladder recurrence.
//!
//! The grid is staggered: wavefunctions live on the interior nodes of
//! `[-p_cut, p_cut]` (Dirichlet values at both ends), and `b⁻ψ` lives on the
//! cell midpoints. The derivative `(ψⱼ − ψⱼ₋₁)/h` is centred on its midpoint,
//! so the operator is second-order accurate and has no spurious
//! zero-momentum doubler. Node and midpoint inner products both use the
//! weights `h/f(p)`.
//!
//! With `W_n`, `W_m` the node and midpoint weight matrices,
//! `b⁺ = W_n⁻¹ Lᵀ W_m` and `W_n^{1/2} b⁺b⁻ W_n^{-1/2} = MᵀM` with
//! `M = W_m^{1/2} L W_n^{-1/2}`. Because `L` is lower bidiagonal, `MᵀM` is a
//! symmetric tridiagonal matrix.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{weight_function, OscillatorParams};
use crate::error::{Error, Result};
use crate::spectrum::energy_sq_branch1;
use crate::tridiag::{EigenPairs, SymTridiagonal};

pub const MIN_GRID_POINTS: usize = 51;

/// Discretized ladder operators on a staggered momentum grid.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    params: OscillatorParams,
    p_cut: f64,
    spacing: f64,
    xi: f64,
    k: f64,
    nodes: Vec<f64>,
    midpoints: Vec<f64>,
    node_weights: Vec<f64>,
    mid_weights: Vec<f64>,
    // row r of b⁻ couples node r−1 (left) and node r (right)
    left: Vec<f64>,
    right: Vec<f64>,
    hamiltonian_sq: SymTridiagonal,
}

/// Assembles the undressed `b⁻ = p + mω f(p) d/dp` on `grid_points` points
/// spanning `[-p_cut, p_cut]` (endpoints included, held at zero).
pub fn assemble(params: &OscillatorParams, grid_points: usize, p_cut: f64) -> Result<DiscretizedOperator> {
    assemble_dressed(params, 1.0, 0.0, grid_points, p_cut)
}

/// Same as [`assemble`] for a dressed lowering operator `ξp + k + mω f d/dp`.
pub fn assemble_dressed(
    params: &OscillatorParams,
    xi: f64,
    k: f64,
    grid_points: usize,
    p_cut: f64,
) -> Result<DiscretizedOperator> {
    if grid_points < MIN_GRID_POINTS || grid_points.is_multiple_of(2) {
        return Err(Error::Usage(format!(
            "grid_points must be odd and >= {MIN_GRID_POINTS}, got {grid_points}"
        )));
    }
    if !(p_cut.is_finite() && p_cut > 0.0) {
        return Err(Error::Usage(format!("p_cut must be finite and > 0, got {p_cut}")));
    }
    if params.alpha() > 0.0 {
        let p_bound = params.p_bound()?;
        if p_cut > p_bound * (1.0 + 1e-12) {
            return Err(Error::Usage(format!(
                "p_cut = {p_cut} exceeds the boundary momentum {p_bound}"
            )));
        }
    }

    let intervals = grid_points - 1;
    let spacing = 2.0 * p_cut / intervals as f64;
    let at = |j: f64| (2.0 * j - intervals as f64) / intervals as f64 * p_cut;
    let nodes: Vec<f64> = (1..intervals).map(|j| at(j as f64)).collect();
    let midpoints: Vec<f64> = (0..intervals).map(|r| at(r as f64 + 0.5)).collect();
    let node_weights: Vec<f64> = nodes.iter().map(|&p| spacing / weight_function(p, params)).collect();
    let mid_weights: Vec<f64> = midpoints
        .iter()
        .map(|&p| spacing / weight_function(p, params))
        .collect();

    let mw = params.m_omega();
    let (left, right): (Vec<f64>, Vec<f64>) = midpoints
        .iter()
        .map(|&p| {
            let mult = 0.5 * (xi * p + k);
            let deriv = mw * weight_function(p, params) / spacing;
            (mult - deriv, mult + deriv)
        })
        .unzip();

    let n = nodes.len();
    // entries of M = W_m^{1/2} L W_n^{-1/2}
    let m_right: Vec<f64> = (0..n)
        .map(|j| mid_weights[j].sqrt() * right[j] / node_weights[j].sqrt())
        .collect();
    let m_left: Vec<f64> = (0..n)
        .map(|j| mid_weights[j + 1].sqrt() * left[j + 1] / node_weights[j].sqrt())
        .collect();
    let diag: Vec<f64> = (0..n).map(|j| m_right[j].powi(2) + m_left[j].powi(2)).collect();
    let off: Vec<f64> = (0..n - 1).map(|j| m_left[j] * m_right[j + 1]).collect();
    let hamiltonian_sq = SymTridiagonal::new(diag, off)?;

    Ok(DiscretizedOperator {
        params: *params,
        p_cut,
        spacing,
        xi,
        k,
        nodes,
        midpoints,
        node_weights,
        mid_weights,
        left,
        right,
        hamiltonian_sq,
    })
}

impl DiscretizedOperator {
    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn p_cut(&self) -> f64 {
        self.p_cut
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dressing(&self) -> (f64, f64) {
        (self.xi, self.k)
    }

    /// Interior nodes, where wavefunctions are sampled.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn midpoints(&self) -> &[f64] {
        &self.midpoints
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn mid_weights(&self) -> &[f64] {
        &self.mid_weights
    }

    /// `W_n^{1/2} (b⁺b⁻) W_n^{-1/2}`, similar to `b⁺b⁻` and symmetric.
    pub fn symmetrized_hamiltonian_sq(&self) -> &SymTridiagonal {
        &self.hamiltonian_sq
    }

    /// `b⁻ψ` on the midpoints for `ψ` on the interior nodes.
    pub fn apply_lowering(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let n = self.nodes.len();
        if psi.len() != n {
            return Err(Error::Usage(format!("expected {n} node values, got {}", psi.len())));
        }
        Ok((0..=n)
            .map(|r| {
                let from_left = if r > 0 { self.left[r] * psi[r - 1] } else { 0.0 };
                let from_right = if r < n { self.right[r] * psi[r] } else { 0.0 };
                from_left + from_right
            })
            .collect())
    }

    /// `b⁺u = W_n⁻¹ Lᵀ W_m u` on the nodes for `u` on the midpoints.
    pub fn apply_raising(&self, u: &[f64]) -> Result<Vec<f64>> {
        let n = self.nodes.len();
        if u.len() != n + 1 {
            return Err(Error::Usage(format!(
                "expected {} midpoint values, got {}",
                n + 1,
                u.len()
            )));
        }
        Ok((0..n)
            .map(|j| {
                (self.right[j] * self.mid_weights[j] * u[j] + self.left[j + 1] * self.mid_weights[j + 1] * u[j + 1])
                    / self.node_weights[j]
            })
            .collect())
    }

    /// `b⁺b⁻ψ`.
    pub fn apply_hamiltonian_sq(&self, psi: &[f64]) -> Result<Vec<f64>> {
        self.apply_raising(&self.apply_lowering(psi)?)
    }

    pub fn node_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        weighted_dot(a, b, &self.node_weights)
    }

    pub fn midpoint_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        weighted_dot(a, b, &self.mid_weights)
    }

    /// Dense `b⁻`, shape `(N+1) × N`. Meant for small grids.
    pub fn lowering_matrix(&self) -> DMatrix<f64> {
        let n = self.nodes.len();
        let mut m = DMatrix::zeros(n + 1, n);
        for r in 0..=n {
            if r > 0 {
                m[(r, r - 1)] = self.left[r];
            }
            if r < n {
                m[(r, r)] = self.right[r];
            }
        }
        m
    }

    /// Dense `b⁺ = W_n⁻¹ Lᵀ W_m`, shape `N × (N+1)`.
    pub fn raising_matrix(&self) -> DMatrix<f64> {
        let wn_inv = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.node_weights.len(),
            self.node_weights.iter().map(|w| 1.0 / w),
        ));
        let wm = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.mid_weights));
        wn_inv * self.lowering_matrix().transpose() * wm
    }

    /// Dense `b⁺b⁻`.
    pub fn hamiltonian_sq_matrix(&self) -> DMatrix<f64> {
        self.raising_matrix() * self.lowering_matrix()
    }
}

fn weighted_dot(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter().zip(b).zip(w).map(|((x, y), w)| x * y * w).sum()
}

/// Lowest `k` eigenvalues of `b⁺b⁻` (units of energy squared), increasing.
pub fn lowest_eigenvalues(op: &DiscretizedOperator, k: usize) -> Result<Vec<f64>> {
    let values = op.hamiltonian_sq.lowest_eigenvalues(k)?;
    check_semidefinite(op, &values)?;
    Ok(values)
}

/// Lowest `k` eigenpairs of `b⁺b⁻`; the vectors are sampled on the interior
/// nodes and normalized in the weighted node inner product.
pub fn lowest_eigenpairs(op: &DiscretizedOperator, k: usize) -> Result<EigenPairs> {
    let mut pairs = op.hamiltonian_sq.lowest_eigenpairs(k)?;
    check_semidefinite(op, &pairs.values)?;
    for v in &mut pairs.vectors {
        // y = W^{1/2} v
        for (x, w) in v.iter_mut().zip(&op.node_weights) {
            *x /= w.sqrt();
        }
    }
    Ok(pairs)
}

fn check_semidefinite(op: &DiscretizedOperator, values: &[f64]) -> Result<()> {
    let (_, top) = op.hamiltonian_sq.gershgorin();
    if let Some(&lowest) = values.first() {
        if lowest < -1e-8 * top {
            return Err(Error::NonConvergence {
                message: format!("b⁺b⁻ produced a negative eigenvalue {lowest}"),
                residuals: vec![lowest / top],
            });
        }
    }
    Ok(())
}

/// Discrete and closed-form `E_n² − m²` side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub grid_points: usize,
    pub p_cut: f64,
    pub analytic: Vec<f64>,
    pub numeric: Vec<f64>,
    pub rel_err: Vec<f64>,
    pub max_rel_err: f64,
}

/// Relative deviation of a discrete level from its closed form. The zero
/// ground level has no scale of its own, so differences are measured against
/// `max(|exact|, 2mω)`, the undeformed level spacing.
pub fn level_error(numeric: f64, exact: f64, params: &OscillatorParams) -> f64 {
    (numeric - exact).abs() / exact.abs().max(2.0 * params.m_omega())
}

/// Compares the lowest `levels` eigenvalues of the discretized `b⁺b⁻` with
/// `energy_sq_branch1(n) − m²` at `γ = 1`, the algebra the operator realizes.
pub fn compare_branch1(
    params: &OscillatorParams,
    grid_points: usize,
    p_cut: f64,
    levels: usize,
) -> Result<OracleReport> {
    let physical = params.with_gamma(1.0)?;
    let op = assemble(&physical, grid_points, p_cut)?;
    let numeric = lowest_eigenvalues(&op, levels)?;
    let m2 = physical.m() * physical.m();
    let analytic: Vec<f64> = (0..levels).map(|n| energy_sq_branch1(n, &physical) - m2).collect();
    let rel_err: Vec<f64> = numeric
        .iter()
        .zip(&analytic)
        .map(|(&x, &y)| level_error(x, y, &physical))
        .collect();
    let max_rel_err = rel_err.iter().copied().fold(0.0, f64::max);
    Ok(OracleReport {
        grid_points,
        p_cut,
        analytic,
        numeric,
        rel_err,
        max_rel_err,
    })
}

/// `‖b⁻ψ‖ / ‖ψ‖` for a function given on the full grid of `grid_points`
/// points over `[-p_cut, p_cut]`, boundary values included. Unlike the
/// assembled operator this imposes no boundary condition, so it measures how
/// closely `ψ` is annihilated on the truncated domain.
pub fn annihilation_residual(
    params: &OscillatorParams,
    xi: f64,
    k: f64,
    grid_points: usize,
    p_cut: f64,
    psi: impl Fn(f64) -> f64,
) -> Result<f64> {
    let op = assemble_dressed(params, xi, k, grid_points, p_cut)?;
    let intervals = grid_points - 1;
    let full: Vec<f64> = (0..grid_points)
        .map(|j| psi((2.0 * j as f64 - intervals as f64) / intervals as f64 * p_cut))
        .collect();
    let image: Vec<f64> = (0..intervals)
        .map(|r| op.left[r] * full[r] + op.right[r] * full[r + 1])
        .collect();
    let interior = &full[1..intervals];
    let psi_norm = op.node_inner(interior, interior).sqrt();
    Ok(op.midpoint_inner(&image, &image).sqrt() / psi_norm)
}
