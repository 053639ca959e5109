//! Energy spectra of the deformed Dirac oscillator.
//!
//! Two independent routes to the levels live here. The closed forms
//! ([`energy_sq_branch1`], [`energy_sq_branch2`]) are evaluated directly. The
//! shape-invariance recurrences ([`susy_recurrence_branch1`],
//! [`susy_recurrence_branch2`]) instead solve the matching conditions between
//! consecutive ladder operators
//!
//! ```text
//! b±(ξ, k) = ξ p + k ∓ mω (1 - αγp + 2α²p²) d/dp
//! b−(ξᵢ, kᵢ) b+(ξᵢ, kᵢ) = b+(ξᵢ₊₁, kᵢ₊₁) b−(ξᵢ₊₁, kᵢ₊₁) + εᵢ₊₁
//! ```
//!
//! rung by rung, and the levels are the partial sums of the gaps `εᵢ`.

use serde::{Deserialize, Serialize};

use crate::algebra::OscillatorParams;
use crate::error::{Error, Result};

/// Upper limit on the number of levels a single spectrum may hold.
pub const MAX_LEVELS: usize = 10_000_000;

/// Which factorization seed the hierarchy grows from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `E₀² = m²`; reduces to the ordinary Dirac oscillator as `α → 0`.
    #[serde(rename = "zero")]
    ZeroGroundState,
    /// `E₀² ≠ m²`; exists only for `2mωα² > 1`.
    #[serde(rename = "nonzero")]
    NonzeroGroundState,
}

/// One rung `(ξᵢ, kᵢ, εᵢ)` of the ladder-operator hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderCoefficients {
    pub index: usize,
    pub xi: f64,
    pub k: f64,
    /// Gap to the previous rung. `None` for the zero-energy seed of branch 1;
    /// for branch 2 the seed carries the ground-state shift `ε̄`.
    pub eps: Option<f64>,
}

/// A finite, increasing list of positive energies `E_n`, `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySpectrum {
    pub branch: Branch,
    /// Rest mass the levels were computed for; sets `β = m/T`.
    pub m: f64,
    pub levels: Vec<f64>,
    pub n_max: usize,
    pub e_cut: f64,
}

impl EnergySpectrum {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn ground(&self) -> f64 {
        self.levels[0]
    }
}

/// `E_n²` on the zero-ground-state branch:
/// `m² + 2mωn(1 + mωα²n) − m²ω²α²γ²n²(1 + mωα²n)²/(1 + 2mωα²n)²`.
pub fn energy_sq_branch1(n: usize, params: &OscillatorParams) -> f64 {
    let m = params.m();
    let c = params.m_omega_alpha_sq();
    let n = n as f64;
    let growth = 1.0 + c * n;
    let k_n = params.m_omega() * params.alpha() * params.gamma() * n * growth / (1.0 + 2.0 * c * n);
    m * m + 2.0 * params.m_omega() * n * growth - k_n * k_n
}

/// `E_n²` on the nonzero-ground-state branch, with `j = n + 1`:
/// `m² + 2mωj(mωα²j − 1) − m²ω²α²γ²j²(1 − mωα²j)²/(2jmωα² − 1)²`.
pub fn energy_sq_branch2(n: usize, params: &OscillatorParams) -> Result<f64> {
    require_second_branch(params)?;
    let m = params.m();
    let c = params.m_omega_alpha_sq();
    let j = n as f64 + 1.0;
    let k_n = params.m_omega() * params.alpha() * params.gamma() * j * (1.0 - c * j) / (2.0 * c * j - 1.0);
    Ok(m * m + 2.0 * params.m_omega() * j * (c * j - 1.0) - k_n * k_n)
}

/// The ground-state shift of branch 2,
/// `ε̄ = 2mω(mωα² − 1) − m²ω²α²(1 − mωα²)²/(2mωα² − 1)²`.
///
/// This form carries no `γ`; it agrees with `energy_sq_branch2(0) − m²` only
/// at `γ = 1`.
pub fn second_branch_ground_shift(params: &OscillatorParams) -> Result<f64> {
    require_second_branch(params)?;
    let c = params.m_omega_alpha_sq();
    let k = params.m_omega() * params.alpha() * (1.0 - c) / (2.0 * c - 1.0);
    Ok(2.0 * params.m_omega() * (c - 1.0) - k * k)
}

/// `E_n²` for either branch.
pub fn energy_sq(branch: Branch, n: usize, params: &OscillatorParams) -> Result<f64> {
    match branch {
        Branch::ZeroGroundState => Ok(energy_sq_branch1(n, params)),
        Branch::NonzeroGroundState => energy_sq_branch2(n, params),
    }
}

/// Closed-form rung of branch 1: `ξᵢ = 1 + 2i mωα²`,
/// `kᵢ = −i mωαγ (1 + i mωα²)/(1 + 2i mωα²)`.
pub fn ladder_closed_form_branch1(index: usize, params: &OscillatorParams) -> (f64, f64) {
    let c = params.m_omega_alpha_sq();
    let i = index as f64;
    let xi = 1.0 + 2.0 * i * c;
    let k = -i * params.m_omega() * params.alpha() * params.gamma() * (1.0 + i * c) / xi;
    (xi, k)
}

/// Closed-form rung of branch 2 with `j = i + 1`: `ξᵢ = 2j mωα² − 1`,
/// `kᵢ = j mωαγ (1 − j mωα²)/(2j mωα² − 1)`.
pub fn ladder_closed_form_branch2(index: usize, params: &OscillatorParams) -> Result<(f64, f64)> {
    require_second_branch(params)?;
    let c = params.m_omega_alpha_sq();
    let j = index as f64 + 1.0;
    let xi = 2.0 * j * c - 1.0;
    let k = j * params.m_omega() * params.alpha() * params.gamma() * (1.0 - j * c) / xi;
    Ok((xi, k))
}

fn require_second_branch(params: &OscillatorParams) -> Result<()> {
    if params.admits_second_branch() {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!(
            "the nonzero-ground-state branch needs 2mωα² > 1, got {}",
            2.0 * params.m_omega_alpha_sq()
        )))
    }
}

/// Solves the three matching conditions for the rung after `(xi, k)`.
///
/// The `p²` condition `ξ'² − 2mωα²ξ' = ξ² + 2mωα²ξ` has roots `ξ + 2mωα²`
/// and `−ξ`; the larger root is taken so that `ξ` stays on the chain that
/// starts at the seed.
fn next_rung(xi: f64, k: f64, params: &OscillatorParams) -> (f64, f64, f64) {
    let s = params.m_omega_alpha_sq();
    let mw = params.m_omega();
    let drift = mw * params.alpha() * params.gamma();
    let xi_next = s + (s * s + xi * xi + 2.0 * s * xi).sqrt();
    let k_next = (2.0 * k * xi - drift * (xi + xi_next)) / (2.0 * xi_next);
    let eps = k * k - k_next * k_next + mw * (xi + xi_next);
    (xi_next, k_next, eps)
}

fn climb(seed: LadderCoefficients, n_target: usize, params: &OscillatorParams) -> Vec<LadderCoefficients> {
    let mut rungs = Vec::with_capacity(n_target + 1);
    rungs.push(seed);
    let (mut xi, mut k) = (seed.xi, seed.k);
    for index in 1..=n_target {
        let (xi_next, k_next, eps) = next_rung(xi, k, params);
        rungs.push(LadderCoefficients {
            index,
            xi: xi_next,
            k: k_next,
            eps: Some(eps),
        });
        xi = xi_next;
        k = k_next;
    }
    rungs
}

/// Rungs `0..=n_target` of the zero-ground-state hierarchy, seeded by the
/// undressed lowering operator `b− = p + mω f d/dp` (`ξ₀ = 1`, `k₀ = 0`).
pub fn susy_recurrence_branch1(n_target: usize, params: &OscillatorParams) -> Vec<LadderCoefficients> {
    let seed = LadderCoefficients {
        index: 0,
        xi: 1.0,
        k: 0.0,
        eps: None,
    };
    climb(seed, n_target, params)
}

/// Root of `ξ'² − 2mωα²ξ' = 1 − 2mωα²` used to seed branch 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedRoot {
    /// `ξ' = 1`, which gives back the zero-ground-state hierarchy.
    Trivial,
    /// `ξ' = 2mωα² − 1`.
    Nontrivial,
}

/// Solves the conditions relating `b̄+b̄− + ε̄ = b+b−` for the chosen root.
///
/// The returned rung carries `ξ'`, `k' = mωαγ(1 − ξ')/(2ξ')` and
/// `ε̄ = mωξ' − mω − k'²` in `eps`. At `γ = 1` these are exactly the
/// parameters of the dressed operator `b̄−`.
pub fn second_branch_seed(params: &OscillatorParams, root: SeedRoot) -> Result<LadderCoefficients> {
    let s = params.m_omega_alpha_sq();
    let mw = params.m_omega();
    let disc = (s * s + 1.0 - 2.0 * s).sqrt();
    let (r_plus, r_minus) = (s + disc, s - disc);
    let xi = match root {
        SeedRoot::Trivial => {
            if (r_plus - 1.0).abs() <= (r_minus - 1.0).abs() {
                r_plus
            } else {
                r_minus
            }
        }
        SeedRoot::Nontrivial => {
            require_second_branch(params)?;
            if (r_plus - 1.0).abs() > (r_minus - 1.0).abs() {
                r_plus
            } else {
                r_minus
            }
        }
    };
    let k = mw * params.alpha() * params.gamma() * (1.0 - xi) / (2.0 * xi);
    let eps = mw * xi - mw - k * k;
    Ok(LadderCoefficients {
        index: 0,
        xi,
        k,
        eps: Some(eps),
    })
}

/// Rungs `0..=n_target` of the nonzero-ground-state hierarchy. Rung 0 is the
/// nontrivial seed `(ξ'₂, k')` and carries the ground shift in `eps`.
pub fn susy_recurrence_branch2(n_target: usize, params: &OscillatorParams) -> Result<Vec<LadderCoefficients>> {
    let seed = second_branch_seed(params, SeedRoot::Nontrivial)?;
    Ok(climb(seed, n_target, params))
}

/// `E_n² = m² + Σ_{i≤n} εᵢ` accumulated along a hierarchy.
pub fn energy_sq_from_ladder(rungs: &[LadderCoefficients], m: f64) -> Vec<f64> {
    rungs
        .iter()
        .scan(m * m, |acc, r| {
            *acc += r.eps.unwrap_or(0.0);
            Some(*acc)
        })
        .collect()
}

/// `√(m² + P_b²)`: the energy of a free particle at the boundary momentum.
pub fn default_energy_cutoff(params: &OscillatorParams) -> Result<f64> {
    let p = params.p_bound()?;
    Ok(params.m().hypot(p))
}

fn level(branch: Branch, n: usize, params: &OscillatorParams) -> Result<f64> {
    let e2 = energy_sq(branch, n, params)?;
    if e2 < 0.0 {
        return Err(Error::ParameterDomain(format!(
            "E² = {e2} < 0 at n = {n}; no real positive level"
        )));
    }
    Ok(e2.sqrt())
}

/// All levels with `E_n ≤ e_cut`, scanned upward from `n = 0`.
///
/// The scan stops at the first level above the cutoff, which is only valid
/// because the levels increase with `n`; a decreasing step is reported as an
/// error rather than skipped.
pub fn build_spectrum(branch: Branch, params: &OscillatorParams, e_cut: f64) -> Result<EnergySpectrum> {
    if !(e_cut.is_finite() && e_cut > 0.0) {
        return Err(Error::Usage(format!(
            "energy cutoff must be finite and > 0, got {e_cut}"
        )));
    }
    let mut levels: Vec<f64> = Vec::new();
    for n in 0.. {
        let e = level(branch, n, params)?;
        if e > e_cut {
            break;
        }
        if let Some(&last) = levels.last() {
            if e <= last {
                return Err(Error::ParameterDomain(format!(
                    "levels stop increasing at n = {n} ({e} <= {last})"
                )));
            }
        }
        if levels.len() == MAX_LEVELS {
            return Err(Error::Usage(format!(
                "cutoff {e_cut} admits more than {MAX_LEVELS} levels"
            )));
        }
        levels.push(e);
    }
    if levels.is_empty() {
        return Err(Error::EmptySpectrum {
            e_cut,
            lowest: level(branch, 0, params)?,
        });
    }
    Ok(EnergySpectrum {
        branch,
        m: params.m(),
        n_max: levels.len() - 1,
        levels,
        e_cut,
    })
}

/// Levels `n = 0..=n_max` regardless of any cutoff; `e_cut` is set to the top level.
pub fn first_levels(branch: Branch, params: &OscillatorParams, n_max: usize) -> Result<EnergySpectrum> {
    if n_max >= MAX_LEVELS {
        return Err(Error::Usage(format!("n_max must be below {MAX_LEVELS}")));
    }
    let levels = (0..=n_max)
        .map(|n| level(branch, n, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnergySpectrum {
        branch,
        m: params.m(),
        n_max,
        e_cut: levels[n_max],
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(m: f64, omega: f64, alpha: f64, gamma: f64) -> OscillatorParams {
        OscillatorParams::new(m, omega, alpha, gamma).unwrap()
    }

    #[test]
    fn branch1_examples() {
        let p = params(1.0, 2.0, 0.1, 1.0);
        assert_eq!(energy_sq_branch1(0, &p), 1.0);
        assert_eq!(energy_sq_branch1(3, &params(1.0, 2.0, 0.0, 1.0)), 13.0);
        // 4·1.02 − 0.04·1.02²/1.04², evaluated by hand
        let e2 = energy_sq_branch1(1, &p);
        assert_relative_eq!(e2, 5.041_523_668_639_053, max_relative = 1e-14);
        assert_relative_eq!(e2.sqrt(), 2.245_333_754_398_008, max_relative = 1e-12);
    }

    #[test]
    fn branch2_examples() {
        let p = params(1.0, 2.0, 1.0, 1.0);
        assert_relative_eq!(
            energy_sq_branch2(0, &p).unwrap(),
            1.0 + 4.0 - 4.0 / 9.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            energy_sq_branch2(0, &p).unwrap().sqrt(),
            2.134_374_745_810_95,
            max_relative = 1e-12
        );
        assert_eq!(energy_sq_branch2(1, &p.with_gamma(0.0).unwrap()).unwrap(), 25.0);
        assert!(matches!(
            energy_sq_branch2(0, &params(1.0, 2.0, 0.1, 1.0)),
            Err(Error::ParameterDomain(_))
        ));
        assert_relative_eq!(
            second_branch_ground_shift(&p).unwrap(),
            4.0 - 4.0 / 9.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn recurrence_first_rung() {
        let p = params(1.0, 2.0, 0.1, 1.0);
        let rungs = susy_recurrence_branch1(1, &p);
        assert_eq!((rungs[0].xi, rungs[0].k, rungs[0].eps), (1.0, 0.0, None));
        assert_relative_eq!(rungs[1].xi, 1.04, max_relative = 1e-14);
        assert_relative_eq!(rungs[1].k, -0.2 * 1.02 / 1.04, max_relative = 1e-14);
        assert_relative_eq!(rungs[1].k, -0.196_153_846_153_846, max_relative = 1e-12);
    }

    #[test]
    fn second_branch_seed_roots() {
        let p = params(1.0, 2.0, 1.0, 1.0);
        let seed = second_branch_seed(&p, SeedRoot::Nontrivial).unwrap();
        assert_relative_eq!(seed.xi, 3.0, max_relative = 1e-14);
        assert_relative_eq!(seed.k, -2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(seed.eps.unwrap(), 4.0 - 4.0 / 9.0, max_relative = 1e-14);

        let trivial = second_branch_seed(&p, SeedRoot::Trivial).unwrap();
        assert_relative_eq!(trivial.xi, 1.0, epsilon = 1e-15);
        assert_relative_eq!(trivial.k, 0.0, epsilon = 1e-15);
        assert_relative_eq!(trivial.eps.unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn trivial_seed_reproduces_first_branch() {
        // works even where branch 2 does not exist
        let p = params(1.0, 2.0, 0.1, 1.0);
        let seed = second_branch_seed(&p, SeedRoot::Trivial).unwrap();
        let from_trivial = energy_sq_from_ladder(&climb(seed, 10, &p), p.m());
        for (n, e2) in from_trivial.iter().enumerate() {
            assert_relative_eq!(*e2, energy_sq_branch1(n, &p), max_relative = 1e-13);
        }
    }

    #[test]
    fn spectrum_with_cutoff() {
        let p = params(1.0, 2.0, 0.0, 1.0);
        let s = build_spectrum(Branch::ZeroGroundState, &p, 5.0).unwrap();
        assert_eq!(s.n_max, 6);
        let expected = [1.0, 5f64.sqrt(), 3.0, 13f64.sqrt(), 17f64.sqrt(), 21f64.sqrt(), 5.0];
        assert_eq!(s.levels, expected);
        assert!(matches!(
            build_spectrum(Branch::ZeroGroundState, &p, 0.5),
            Err(Error::EmptySpectrum { .. })
        ));
    }

    #[test]
    fn default_cutoff_scan_matches_linear_search() {
        let p = params(1.0, 2.0, 0.1, 1.0);
        let e_cut = default_energy_cutoff(&p).unwrap();
        assert_relative_eq!(e_cut, 101f64.sqrt());
        let s = build_spectrum(Branch::ZeroGroundState, &p, e_cut).unwrap();
        let count = (0..10_000).take_while(|&n| energy_sq_branch1(n, &p) <= 101.0).count();
        assert_eq!(s.len(), count);
        assert_eq!(s.n_max, count - 1);
        assert!(default_energy_cutoff(&params(1.0, 2.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn first_levels_counts() {
        let p = params(1.0, 2.0, 0.0, 1.0);
        let s = first_levels(Branch::ZeroGroundState, &p, 3).unwrap();
        assert_eq!(s.levels, vec![1.0, 5f64.sqrt(), 3.0, 13f64.sqrt()]);
        assert_eq!(s.e_cut, 13f64.sqrt());
    }

    #[test]
    fn negative_second_branch_energies_are_rejected() {
        // 2mωα² slightly above 1: ε̄ ≈ −mω drives E₀² below zero for light m
        let p = params(0.1, 20.0, 0.55, 1.0);
        assert!(p.admits_second_branch());
        assert!(energy_sq_branch2(0, &p).unwrap() < 0.0);
        assert!(matches!(
            build_spectrum(Branch::NonzeroGroundState, &p, 100.0),
            Err(Error::ParameterDomain(_))
        ));
    }
}
