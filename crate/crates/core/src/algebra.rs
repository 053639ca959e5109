//! The deformed algebra `[x, p] = i f(p)` with `f(p) = 1 - αp + 2α²p²`,
//! its momentum-space measure `dp / f(p)`, and the weighted quadrature used by
//! every other module.
//!
//! In the momentum representation `p` acts by multiplication and
//! `x = i f(p) d/dp`; `x` is symmetric only with respect to the weighted inner
//! product `⟨ψ|φ⟩ = ∫ ψ*(p) φ(p) dp / f(p)` over `[-P_b, P_b]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid size used when the caller does not ask for one.
pub const DEFAULT_GRID_POINTS: usize = 2001;

/// Policy for the boundary momentum `P_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentumBound {
    /// `P_b = 1/α`.
    Default,
    /// A caller-supplied bound.
    Explicit(f64),
}

/// Physical parameters of the oscillator in natural units (`ħ = c = 1`).
///
/// `gamma` interpolates between the algebra with a minimal length only
/// (`gamma = 0`) and the one that also has a maximal momentum (`gamma = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct OscillatorParams {
    m: f64,
    omega: f64,
    alpha: f64,
    gamma: f64,
    p_bound: MomentumBound,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    m: f64,
    omega: f64,
    alpha: f64,
    gamma: f64,
    #[serde(default = "default_bound")]
    p_bound: MomentumBound,
}

fn default_bound() -> MomentumBound {
    MomentumBound::Default
}

impl TryFrom<RawParams> for OscillatorParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        OscillatorParams::new(raw.m, raw.omega, raw.alpha, raw.gamma)?.with_p_bound(raw.p_bound)
    }
}

impl From<OscillatorParams> for RawParams {
    fn from(p: OscillatorParams) -> Self {
        RawParams {
            m: p.m,
            omega: p.omega,
            alpha: p.alpha,
            gamma: p.gamma,
            p_bound: p.p_bound,
        }
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}

impl OscillatorParams {
    pub fn new(m: f64, omega: f64, alpha: f64, gamma: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(invalid("m", format!("mass must be finite and > 0, got {m}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid(
                "omega",
                format!("frequency must be finite and > 0, got {omega}"),
            ));
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(invalid(
                "alpha",
                format!("deformation must be finite and >= 0, got {alpha}"),
            ));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(invalid("gamma", format!("must lie in [0, 1], got {gamma}")));
        }
        Ok(Self {
            m,
            omega,
            alpha,
            gamma,
            p_bound: MomentumBound::Default,
        })
    }

    pub fn with_p_bound(mut self, bound: MomentumBound) -> Result<Self> {
        if let MomentumBound::Explicit(p) = bound {
            if !(p.is_finite() && p > 0.0) {
                return Err(invalid("p_bound", format!("must be finite and > 0, got {p}")));
            }
        }
        self.p_bound = bound;
        Ok(self)
    }

    /// Same parameters with a different interpolation `gamma`.
    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(self.m, self.omega, self.alpha, gamma)?.with_p_bound(self.p_bound)
    }

    /// Same parameters with a different deformation `alpha`.
    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.m, self.omega, alpha, self.gamma)?.with_p_bound(self.p_bound)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p_bound_policy(&self) -> MomentumBound {
        self.p_bound
    }

    /// `mω`.
    pub fn m_omega(&self) -> f64 {
        self.m * self.omega
    }

    /// `mωα²`, the dimensionless strength of the deformation. The ladder
    /// coefficient `ξ` grows by twice this amount per step of the hierarchy.
    pub fn m_omega_alpha_sq(&self) -> f64 {
        self.m * self.omega * self.alpha * self.alpha
    }

    /// Resolved boundary momentum `P_b`.
    pub fn p_bound(&self) -> Result<f64> {
        match self.p_bound {
            MomentumBound::Explicit(p) => Ok(p),
            MomentumBound::Default => default_p_bound(self),
        }
    }

    /// True when the nonzero-ground-state branch exists (`2mωα² > 1`).
    pub fn admits_second_branch(&self) -> bool {
        2.0 * self.m_omega_alpha_sq() > 1.0
    }
}

/// `f(p) = 1 - αp + 2α²p²`. Strictly positive: its minimum is `7/8` at `p = 1/(4α)`.
pub fn weight_function(p: f64, params: &OscillatorParams) -> f64 {
    deformed_weight(p, params.alpha, 1.0)
}

/// `1 - αγp + 2α²p²`, the `gamma`-interpolated coefficient of `d/dp` in the
/// ladder operators. Equals [`weight_function`] at `gamma = 1`.
pub fn deformed_weight(p: f64, alpha: f64, gamma: f64) -> f64 {
    let ap = alpha * p;
    1.0 - gamma * ap + 2.0 * ap * ap
}

/// Planck-scale proxy for the boundary momentum: `P_b = 1/α`.
pub fn default_p_bound(params: &OscillatorParams) -> Result<f64> {
    if params.alpha == 0.0 {
        Err(Error::NoFiniteBound)
    } else {
        Ok(1.0 / params.alpha)
    }
}

/// Composite rule used to build the quadrature weights of a [`WeightedGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    /// Composite Simpson; requires an odd number of points.
    Simpson,
    /// Composite trapezoid.
    Trapezoid,
}

/// Uniform momentum grid on `[-P_b, P_b]` carrying quadrature weights that
/// already include the measure `1/f(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
    spacing: f64,
    rule: QuadratureRule,
}

impl WeightedGrid {
    /// Builds the grid for `params` on `[-p_bound, p_bound]` with `n_points` samples.
    pub fn new(params: &OscillatorParams, p_bound: f64, n_points: usize, rule: QuadratureRule) -> Result<Self> {
        if !(p_bound.is_finite() && p_bound > 0.0) {
            return Err(Error::Usage(format!(
                "grid bound must be finite and > 0, got {p_bound}"
            )));
        }
        if n_points < 3 {
            return Err(Error::Usage(format!("grid needs at least 3 points, got {n_points}")));
        }
        if rule == QuadratureRule::Simpson && n_points.is_multiple_of(2) {
            return Err(Error::Usage(format!(
                "Simpson grid needs an odd number of points, got {n_points}"
            )));
        }
        let intervals = (n_points - 1) as f64;
        let spacing = 2.0 * p_bound / intervals;
        // integer numerators keep the grid exactly antisymmetric
        let points: Vec<f64> = (0..n_points)
            .map(|j| (2.0 * j as f64 - intervals) / intervals * p_bound)
            .collect();
        let weights = points
            .iter()
            .enumerate()
            .map(|(j, &p)| rule_coefficient(rule, j, n_points) * spacing / weight_function(p, params))
            .collect();
        Ok(Self {
            points,
            weights,
            spacing,
            rule,
        })
    }

    /// Simpson grid on `[-P_b, P_b]` with the resolved default bound.
    pub fn for_params(params: &OscillatorParams, n_points: usize) -> Result<Self> {
        Self::new(params, params.p_bound()?, n_points, QuadratureRule::Simpson)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Samples `g` on the grid points.
    pub fn sample(&self, g: impl Fn(f64) -> f64) -> Vec<f64> {
        self.points.iter().map(|&p| g(p)).collect()
    }

    fn check_len(&self, len: usize, name: &str) -> Result<()> {
        if len != self.points.len() {
            return Err(Error::Usage(format!(
                "{name} has {len} samples but the grid has {}",
                self.points.len()
            )));
        }
        Ok(())
    }
}

fn rule_coefficient(rule: QuadratureRule, j: usize, n: usize) -> f64 {
    let endpoint = j == 0 || j == n - 1;
    match rule {
        QuadratureRule::Trapezoid if endpoint => 0.5,
        QuadratureRule::Trapezoid => 1.0,
        QuadratureRule::Simpson if endpoint => 1.0 / 3.0,
        QuadratureRule::Simpson if j % 2 == 1 => 4.0 / 3.0,
        QuadratureRule::Simpson => 2.0 / 3.0,
    }
}

/// `⟨ψ|φ⟩ = ∫ ψ*(p) φ(p) dp / f(p)` by the grid's composite rule.
pub fn weighted_inner_product(psi: &[Complex64], phi: &[Complex64], grid: &WeightedGrid) -> Result<Complex64> {
    grid.check_len(psi.len(), "psi")?;
    grid.check_len(phi.len(), "phi")?;
    Ok(psi
        .iter()
        .zip(phi)
        .zip(&grid.weights)
        .map(|((a, b), &w)| a.conj() * b * w)
        .sum())
}

/// Real-valued specialization of [`weighted_inner_product`].
pub fn weighted_inner_product_real(psi: &[f64], phi: &[f64], grid: &WeightedGrid) -> Result<f64> {
    grid.check_len(psi.len(), "psi")?;
    grid.check_len(phi.len(), "phi")?;
    Ok(psi
        .iter()
        .zip(phi)
        .zip(&grid.weights)
        .map(|((a, b), &w)| a * b * w)
        .sum())
}

/// Weighted norm `‖ψ‖_w = ⟨ψ|ψ⟩^{1/2}` of a real sampled function.
pub fn weighted_norm(psi: &[f64], grid: &WeightedGrid) -> Result<f64> {
    weighted_inner_product_real(psi, psi, grid).map(f64::sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(alpha: f64) -> OscillatorParams {
        OscillatorParams::new(1.0, 2.0, alpha, 1.0).unwrap()
    }

    #[test]
    fn weight_function_examples() {
        assert_eq!(weight_function(0.0, &params(0.3)), 1.0);
        assert_eq!(weight_function(123.4, &params(0.0)), 1.0);
        assert_relative_eq!(weight_function(2.5, &params(0.1)), 0.875, max_relative = 1e-15);
    }

    #[test]
    fn default_bound_policy() {
        assert_relative_eq!(default_p_bound(&params(0.1)).unwrap(), 10.0);
        assert_relative_eq!(default_p_bound(&params(0.5)).unwrap(), 2.0);
        assert_eq!(default_p_bound(&params(0.0)), Err(Error::NoFiniteBound));
        let explicit = params(0.0).with_p_bound(MomentumBound::Explicit(7.0)).unwrap();
        assert_eq!(explicit.p_bound().unwrap(), 7.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(OscillatorParams::new(0.0, 1.0, 0.1, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 0.1, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, -0.1, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 0.1, 1.5).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(params(0.1).with_p_bound(MomentumBound::Explicit(0.0)).is_err());
    }

    #[test]
    fn grid_is_symmetric_with_positive_weights() {
        let g = WeightedGrid::for_params(&params(0.1), 101).unwrap();
        assert_eq!(g.points()[50], 0.0);
        for j in 0..101 {
            assert_eq!(g.points()[j], -g.points()[100 - j]);
            assert!(g.weights()[j] > 0.0);
        }
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
        assert_relative_eq!(g.spacing(), 0.2, max_relative = 1e-14);
    }

    #[test]
    fn simpson_rejects_even_counts() {
        let p = params(0.1);
        assert!(matches!(
            WeightedGrid::new(&p, 1.0, 100, QuadratureRule::Simpson),
            Err(Error::Usage(_))
        ));
        assert!(WeightedGrid::new(&p, 1.0, 100, QuadratureRule::Trapezoid).is_ok());
    }

    #[test]
    fn unit_functions_integrate_to_interval_length() {
        let p = params(0.0);
        let g = WeightedGrid::new(&p, 1.0, 11, QuadratureRule::Simpson).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); g.len()];
        let ip = weighted_inner_product(&ones, &ones, &g).unwrap();
        assert_relative_eq!(ip.re, 2.0, max_relative = 1e-14);
        assert_eq!(ip.im, 0.0);
    }

    #[test]
    fn odd_even_parity_vanishes() {
        let p = params(0.0);
        let g = WeightedGrid::new(&p, 3.0, 201, QuadratureRule::Simpson).unwrap();
        let odd: Vec<Complex64> = g.points().iter().map(|&x| Complex64::new(x.powi(3), 0.0)).collect();
        let even: Vec<Complex64> = g
            .points()
            .iter()
            .map(|&x| Complex64::new((-x * x).exp(), 0.0))
            .collect();
        let ip = weighted_inner_product(&odd, &even, &g).unwrap();
        assert!(ip.norm() < 1e-14, "{ip}");
    }

    #[test]
    fn mismatched_lengths_are_usage_errors() {
        let g = WeightedGrid::for_params(&params(0.1), 11).unwrap();
        let a = vec![Complex64::new(1.0, 0.0); 11];
        let b = vec![Complex64::new(1.0, 0.0); 10];
        assert!(matches!(weighted_inner_product(&a, &b, &g), Err(Error::Usage(_))));
    }
}
