//! Canonical partition function and thermodynamic potentials of the
//! zero-ground-state branch.
//!
//! Three evaluations of `Z = Σ exp(−E_n/T)` are provided:
//!
//! * [`direct_partition`]: the exact finite sum over a spectrum;
//! * [`euler_maclaurin_z`]: the closed form obtained from the simplified
//!   spectrum `E_n ≈ m√(an² + bn + 1)`, the Euler–Maclaurin formula truncated
//!   after the `B₂` and `B₄` terms, and a first-order expansion in `a`;
//! * [`em_numeric_integral_z`]: the same Euler–Maclaurin decomposition with
//!   the integral done by adaptive quadrature and the derivative terms by
//!   finite differences, keeping the upper-endpoint contributions.
//!
//! Temperatures are in energy units (`k_B = 1`) and `β = m/T` is dimensionless.

use serde::{Deserialize, Serialize};

use crate::algebra::OscillatorParams;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::spectrum::EnergySpectrum;

/// Which large-`n` form of the spectrum the coefficient `a` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumVariant {
    /// Minimal length and maximal momentum: `a = 7ω²α²/4`.
    MaxMomentum,
    /// Minimal length only (`γ = 0`), where the simplified form is exact: `a = 2ω²α²`.
    MinLengthOnly,
}

/// Coefficients of `E_n ≈ m√(an² + bn + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplifiedSpectrumCoeffs {
    pub a: f64,
    pub b: f64,
    pub variant: SpectrumVariant,
}

impl SimplifiedSpectrumCoeffs {
    pub fn new(params: &OscillatorParams, variant: SpectrumVariant) -> Self {
        let w2a2 = (params.omega() * params.alpha()).powi(2);
        let a = match variant {
            SpectrumVariant::MaxMomentum => 7.0 * w2a2 / 4.0,
            SpectrumVariant::MinLengthOnly => 2.0 * w2a2,
        };
        Self {
            a,
            b: 2.0 * params.omega() / params.m(),
            variant,
        }
    }

    /// `√(an² + bn + 1)` at real `x`.
    fn root(&self, x: f64) -> f64 {
        (self.a * x * x + self.b * x + 1.0).sqrt()
    }
}

/// `m√(an² + bn + 1)`.
pub fn simplified_energy(n: usize, coeffs: &SimplifiedSpectrumCoeffs, m: f64) -> f64 {
    m * coeffs.root(n as f64)
}

/// Simplified levels `n = 0..=n_max` packaged as a spectrum.
pub fn simplified_spectrum(coeffs: &SimplifiedSpectrumCoeffs, m: f64, n_max: usize) -> EnergySpectrum {
    let levels: Vec<f64> = (0..=n_max).map(|n| simplified_energy(n, coeffs, m)).collect();
    EnergySpectrum {
        branch: crate::spectrum::Branch::ZeroGroundState,
        m,
        n_max,
        e_cut: levels[n_max],
        levels,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMethod {
    DirectSum,
    EulerMaclaurinClosedForm,
    EulerMaclaurinNumericIntegral,
}

/// How the constant endpoint term of the closed form is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantConvention {
    /// Leading constant `1/2`, as the closed form is usually quoted.
    PaperLiteral,
    /// Leading constant `e^{−β}/2`, the Euler–Maclaurin endpoint term `f(0)/2`.
    Consistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionEvaluation {
    /// Temperature in units of `m`, i.e. `1/β`.
    pub t_over_m: f64,
    pub beta: f64,
    /// May underflow to zero at very low temperature; `ln_z` does not.
    pub z: f64,
    /// `ln Z`; NaN when an approximation gives `Z ≤ 0`.
    pub ln_z: f64,
    pub method: PartitionMethod,
    pub convention: Option<ConstantConvention>,
}

impl PartitionEvaluation {
    fn from_z(beta: f64, z: f64, method: PartitionMethod, convention: Option<ConstantConvention>) -> Self {
        Self {
            t_over_m: 1.0 / beta,
            beta,
            z,
            ln_z: if z > 0.0 { z.ln() } else { f64::NAN },
            method,
            convention,
        }
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Usage(format!("temperature must be finite and > 0, got {t}")))
    }
}

/// `Z = Σ_{n ≤ n_max} exp(−E_n/T)`, summed relative to the ground level so
/// that `ln Z` stays finite at any temperature.
pub fn direct_partition(spectrum: &EnergySpectrum, t: f64) -> Result<PartitionEvaluation> {
    check_temperature(t)?;
    if spectrum.is_empty() {
        return Err(Error::Usage("empty spectrum".into()));
    }
    let e0 = spectrum.levels[0];
    // smallest terms first
    let tail: f64 = spectrum.levels.iter().rev().map(|e| (-(e - e0) / t).exp()).sum();
    let ln_z = -e0 / t + tail.ln();
    let beta = spectrum.m / t;
    Ok(PartitionEvaluation {
        t_over_m: 1.0 / beta,
        beta,
        z: ln_z.exp(),
        ln_z,
        method: PartitionMethod::DirectSum,
        convention: None,
    })
}

/// Bernoulli number `B_j` (with `B₁ = −1/2`) by the Akiyama–Tanigawa
/// algorithm in exact rational arithmetic. Valid for `j ≤ 20`.
pub fn bernoulli_number(j: usize) -> f64 {
    assert!(j <= 20, "Bernoulli numbers are tabulated up to j = 20");
    fn gcd(mut a: i128, mut b: i128) -> i128 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs().max(1)
    }
    fn reduce((n, d): (i128, i128)) -> (i128, i128) {
        let g = gcd(n, d);
        (n / g, d / g)
    }
    let mut a = vec![(0i128, 1i128); j + 1];
    for m in 0..=j {
        a[m] = (1, m as i128 + 1);
        for i in (1..=m).rev() {
            let ((n1, d1), (n2, d2)) = (a[i - 1], a[i]);
            a[i - 1] = reduce((i as i128 * (n1 * d2 - n2 * d1), d1 * d2));
        }
    }
    let (n, d) = a[0];
    // the algorithm yields B₁ = +1/2
    let sign = if j == 1 { -1.0 } else { 1.0 };
    sign * n as f64 / d as f64
}

/// The pieces of the Euler–Maclaurin representation of `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerMaclaurinTerms {
    pub integral: f64,
    pub endpoint: f64,
    /// `(B₂/2!)(f′(N) − f′(0))`.
    pub bernoulli_2: f64,
    /// `(B₄/4!)(f‴(N) − f‴(0))`.
    pub bernoulli_4: f64,
}

impl EulerMaclaurinTerms {
    pub fn total(&self) -> f64 {
        self.integral + self.endpoint + self.bernoulli_2 + self.bernoulli_4
    }
}

/// Closed-form pieces with upper-endpoint contributions dropped:
///
/// * integral `(2/βb)(1 + 1/β − (4a/βb²)(1 + 3/β + 3/β²)) e^{−β}`;
/// * `B₂` term `(βb/24) e^{−β}`;
/// * `B₄` term `(βb/1440) e^{−β} (3(1 + β)(a − b²/4) − β²b²/4)`.
pub fn euler_maclaurin_terms(
    coeffs: &SimplifiedSpectrumCoeffs,
    beta: f64,
    convention: ConstantConvention,
) -> EulerMaclaurinTerms {
    let SimplifiedSpectrumCoeffs { a, b, .. } = *coeffs;
    let decay = (-beta).exp();
    let integral = 2.0 / (beta * b)
        * (1.0 + 1.0 / beta - 4.0 * a / (beta * b * b) * (1.0 + 3.0 / beta + 3.0 / (beta * beta)))
        * decay;
    let endpoint = match convention {
        ConstantConvention::PaperLiteral => 0.5,
        ConstantConvention::Consistent => 0.5 * decay,
    };
    let bernoulli_2 = beta * b / 24.0 * decay;
    let bernoulli_4 = beta * b / 1440.0 * decay * (3.0 * (1.0 + beta) * (a - b * b / 4.0) - beta * beta * b * b / 4.0);
    EulerMaclaurinTerms {
        integral,
        endpoint,
        bernoulli_2,
        bernoulli_4,
    }
}

/// Closed-form `Z(β)` from the simplified spectrum.
pub fn euler_maclaurin_z(
    coeffs: &SimplifiedSpectrumCoeffs,
    beta: f64,
    convention: ConstantConvention,
) -> Result<PartitionEvaluation> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Usage(format!("beta must be finite and > 0, got {beta}")));
    }
    let z = euler_maclaurin_terms(coeffs, beta, convention).total();
    Ok(PartitionEvaluation::from_z(
        beta,
        z,
        PartitionMethod::EulerMaclaurinClosedForm,
        Some(convention),
    ))
}

/// `f(x) = exp(−β√(ax² + bx + 1))`.
fn summand(coeffs: &SimplifiedSpectrumCoeffs, beta: f64, x: f64) -> f64 {
    (-beta * coeffs.root(x)).exp()
}

/// Pieces of the Euler–Maclaurin representation over `[0, n_max]`, with the
/// integral by adaptive quadrature and `f′`, `f‴` by central differences.
pub fn em_numeric_terms(coeffs: &SimplifiedSpectrumCoeffs, beta: f64, n_max: usize) -> Result<EulerMaclaurinTerms> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Usage(format!("beta must be finite and > 0, got {beta}")));
    }
    let f = |x: f64| summand(coeffs, beta, x);
    let upper = n_max as f64;
    let integral = quadrature::integrate(f, 0.0, upper, 1e-300, 1e-13)?.value;
    // f varies on the scale 1/(βb) near the origin
    let h = 1e-2 * (1.0 / (beta * coeffs.b)).min(1.0);
    let d1 = |x: f64| (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    let d3 = |x: f64| {
        (f(x - 3.0 * h) - 8.0 * f(x - 2.0 * h) + 13.0 * f(x - h) - 13.0 * f(x + h) + 8.0 * f(x + 2.0 * h)
            - f(x + 3.0 * h))
            / (8.0 * h * h * h)
    };
    Ok(EulerMaclaurinTerms {
        integral,
        endpoint: 0.5 * (f(0.0) + f(upper)),
        bernoulli_2: bernoulli_number(2) / 2.0 * (d1(upper) - d1(0.0)),
        bernoulli_4: bernoulli_number(4) / 24.0 * (d3(upper) - d3(0.0)),
    })
}

/// `Z(β)` from the Euler–Maclaurin formula with a numerically integrated
/// integral term.
pub fn em_numeric_integral_z(
    coeffs: &SimplifiedSpectrumCoeffs,
    beta: f64,
    n_max: usize,
) -> Result<PartitionEvaluation> {
    let z = em_numeric_terms(coeffs, beta, n_max)?.total();
    Ok(PartitionEvaluation::from_z(
        beta,
        z,
        PartitionMethod::EulerMaclaurinNumericIntegral,
        None,
    ))
}

/// A temperature-dependent source of `Z`.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSource {
    Direct(EnergySpectrum),
    ClosedForm {
        coeffs: SimplifiedSpectrumCoeffs,
        m: f64,
        convention: ConstantConvention,
    },
    NumericIntegral {
        coeffs: SimplifiedSpectrumCoeffs,
        m: f64,
        n_max: usize,
    },
}

impl PartitionSource {
    pub fn evaluate(&self, t: f64) -> Result<PartitionEvaluation> {
        check_temperature(t)?;
        match self {
            PartitionSource::Direct(spectrum) => direct_partition(spectrum, t),
            PartitionSource::ClosedForm { coeffs, m, convention } => euler_maclaurin_z(coeffs, m / t, *convention),
            PartitionSource::NumericIntegral { coeffs, m, n_max } => em_numeric_integral_z(coeffs, m / t, *n_max),
        }
    }

    pub fn method(&self) -> PartitionMethod {
        match self {
            PartitionSource::Direct(_) => PartitionMethod::DirectSum,
            PartitionSource::ClosedForm { .. } => PartitionMethod::EulerMaclaurinClosedForm,
            PartitionSource::NumericIntegral { .. } => PartitionMethod::EulerMaclaurinNumericIntegral,
        }
    }
}

/// `(T, F, U, S, C_V)` at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub t: f64,
    pub f: f64,
    pub u: f64,
    pub s: f64,
    pub c_v: f64,
    pub method: PartitionMethod,
    /// Difference between the step-`dt` and step-`dt/2` estimates of `C_V`
    /// before extrapolation; a size indicator for the differencing error.
    pub richardson_delta: f64,
}

/// Default finite-difference step, `10⁻³ T`.
pub fn default_step(t: f64) -> f64 {
    1e-3 * t
}

/// Thermodynamic functions from `F = −T ln Z`:
/// `S = −∂F/∂T`, `U = F + TS`, `C_V = T ∂S/∂T`.
///
/// Both derivatives are central differences, evaluated at steps `dt` and
/// `dt/2` and combined by Richardson extrapolation, so `Z` is sampled on
/// `[t − 2dt, t + 2dt]`.
pub fn thermo_from_z(z_fn: impl Fn(f64) -> Result<PartitionEvaluation>, t: f64, dt: f64) -> Result<ThermoPoint> {
    check_temperature(t)?;
    if !(dt > 0.0 && t > 2.0 * dt) {
        return Err(Error::Usage(format!("need 0 < 2dt < t, got t = {t}, dt = {dt}")));
    }
    let mut method = None;
    let mut free_energy = |temp: f64| -> Result<f64> {
        let eval = z_fn(temp)?;
        method = Some(eval.method);
        if !(eval.ln_z.is_finite()) {
            return Err(Error::NonPositivePartition {
                temperature: temp,
                z: eval.z,
            });
        }
        Ok(-temp * eval.ln_z)
    };
    // F at t + j·dt/2 for j = -4..=4 (only the even and ±1 offsets are used)
    let offsets = [-4i32, -2, -1, 0, 1, 2, 4];
    let mut values = [0.0f64; 7];
    for (slot, &j) in values.iter_mut().zip(&offsets) {
        *slot = free_energy(t + j as f64 * dt / 2.0)?;
    }
    let at = |j: i32| values[offsets.iter().position(|&o| o == j).expect("stencil offset")];
    let f0 = at(0);

    // S(t) = -(F(t+h) - F(t-h)) / 2h, C_V = -T (F(t+2h) - 2F(t) + F(t-2h)) / 4h²
    let entropy = |h_half: i32, h: f64| -(at(h_half) - at(-h_half)) / (2.0 * h);
    let heat = |h_half: i32, h: f64| -t * (at(2 * h_half) - 2.0 * f0 + at(-2 * h_half)) / (4.0 * h * h);

    let s_coarse = entropy(2, dt);
    let s_fine = entropy(1, dt / 2.0);
    let c_coarse = heat(2, dt);
    let c_fine = heat(1, dt / 2.0);
    let s = (4.0 * s_fine - s_coarse) / 3.0;
    let c_v = (4.0 * c_fine - c_coarse) / 3.0;

    Ok(ThermoPoint {
        t,
        f: f0,
        u: f0 + t * s,
        s,
        c_v,
        method: method.expect("free energy evaluated"),
        richardson_delta: c_fine - c_coarse,
    })
}

/// [`thermo_from_z`] at each temperature with the default step. Failures are
/// kept per point so that breakdown regions show up as gaps.
pub fn thermo_sweep(source: &PartitionSource, temperatures: &[f64]) -> Vec<Result<ThermoPoint>> {
    temperatures
        .iter()
        .map(|&t| thermo_from_z(|x| source.evaluate(x), t, default_step(t)))
        .collect()
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
