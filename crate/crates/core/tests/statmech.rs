use approx::assert_relative_eq;
use diracosc_core::quadrature::integrate;
use diracosc_core::spectrum::{build_spectrum, energy_sq_branch1, first_levels, Branch};
use diracosc_core::statmech::{
    bernoulli_number, direct_partition, em_numeric_integral_z, em_numeric_terms, euler_maclaurin_terms,
    euler_maclaurin_z, linspace, simplified_energy, simplified_spectrum, thermo_from_z, thermo_sweep,
    ConstantConvention, PartitionSource, SpectrumVariant,
};
use diracosc_core::{EnergySpectrum, OscillatorParams, SimplifiedSpectrumCoeffs};

fn coeffs(a: f64, b: f64) -> SimplifiedSpectrumCoeffs {
    SimplifiedSpectrumCoeffs {
        a,
        b,
        variant: SpectrumVariant::MaxMomentum,
    }
}

fn fig1(alpha: f64) -> OscillatorParams {
    OscillatorParams::new(1.0, 2.0, alpha, 1.0).unwrap()
}

fn fig1_spectrum(alpha: f64) -> EnergySpectrum {
    let p = fig1(alpha);
    build_spectrum(Branch::ZeroGroundState, &p, 60.0).unwrap()
}

/// Neumaier-compensated `Σ e^{−E/T}`, an independent summation path.
fn compensated_sum(levels: &[f64], t: f64) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for e in levels {
        let x = (-e / t).exp();
        let next = sum + x;
        carry += if sum.abs() >= x.abs() {
            (sum - next) + x
        } else {
            (x - next) + sum
        };
        sum = next;
    }
    sum + carry
}

#[test]
fn closed_form_example_term_by_term() {
    // a = 0, b = 4, β = 1: 1/2 + e^{-1}(1 + 1/6 − 28/360)
    let z = euler_maclaurin_z(&coeffs(0.0, 4.0), 1.0, ConstantConvention::PaperLiteral).unwrap();
    let e = (-1.0f64).exp();
    let integral = 0.5 * 2.0 * e;
    let b2 = 4.0 / 24.0 * e;
    let b4 = 4.0 / 1440.0 * e * (3.0 * 2.0 * -4.0 - 4.0);
    assert_relative_eq!(z.z, 0.5 + integral + b2 + b4, max_relative = 1e-15);
    assert_relative_eq!(z.z, 0.900_579_835_942_237_2, max_relative = 1e-13);
    let consistent = euler_maclaurin_z(&coeffs(0.0, 4.0), 1.0, ConstantConvention::Consistent).unwrap();
    assert_relative_eq!(z.z - consistent.z, 0.5 - 0.5 * e, max_relative = 1e-14);
}

#[test]
fn bernoulli_terms_come_from_derivatives_at_zero() {
    let (a, b, beta) = (0.003, 0.8, 1.7);
    let f = |x: f64| (-beta * (a * x * x + b * x + 1.0).sqrt()).exp();
    // derivatives by Richardson-extrapolated central differences
    let d1 = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    let d3 = |h: f64| (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
    let f1 = (4.0 * d1(1e-3) - d1(2e-3)) / 3.0;
    let f3 = (4.0 * d3(1e-2) - d3(2e-2)) / 3.0;
    let terms = euler_maclaurin_terms(&coeffs(a, b), beta, ConstantConvention::Consistent);
    assert_relative_eq!(terms.bernoulli_2, -bernoulli_number(2) / 2.0 * f1, max_relative = 1e-8);
    // the closed form keeps only the O(a) part of f‴(0)
    assert_relative_eq!(terms.bernoulli_4, -bernoulli_number(4) / 24.0 * f3, max_relative = 1e-2);
    let at_zero_a = euler_maclaurin_terms(&coeffs(0.0, b), beta, ConstantConvention::Consistent);
    assert_relative_eq!(
        at_zero_a.bernoulli_2,
        beta * b / 24.0 * (-beta).exp(),
        max_relative = 1e-15
    );
}

#[test]
fn integral_identities_hold_by_quadrature() {
    for (b, beta) in [(4.0, 2.0), (4.0, 1.0), (0.5, 3.0), (0.1, 5.0)] {
        let leading = integrate(
            |x| (-beta * (b * x + 1.0).sqrt()).exp(),
            0.0,
            4e4 / (beta * b),
            1e-300,
            1e-13,
        )
        .unwrap()
        .value;
        let expected = 2.0 / (beta * b) * (1.0 + 1.0 / beta) * (-beta).exp();
        assert_relative_eq!(leading, expected, max_relative = 1e-8);

        let a = 1.0;
        let correction = integrate(
            |x| {
                let u = (b * x + 1.0).sqrt();
                (-beta * u).exp() * beta * a * x * x / (2.0 * u)
            },
            0.0,
            4e4 / (beta * b),
            1e-300,
            1e-13,
        )
        .unwrap()
        .value;
        let expected =
            2.0 / (beta * b) * (4.0 * a / (beta * b * b)) * (1.0 + 3.0 / beta + 3.0 / (beta * beta)) * (-beta).exp();
        assert_relative_eq!(correction, expected, max_relative = 1e-8);
    }
    // a = 0, b = 4, β = 2: (1/4)(1.5)e^{-2}
    let terms = euler_maclaurin_terms(&coeffs(0.0, 4.0), 2.0, ConstantConvention::Consistent);
    assert_relative_eq!(terms.integral, 0.375 * (-2.0f64).exp(), max_relative = 1e-15);
    assert_relative_eq!(terms.integral, 0.050_75, epsilon = 1e-5);
}

#[test]
fn numeric_and_closed_forms_differ_at_second_order_in_a() {
    let b = 0.2;
    let n_max = 40_000;
    // below β ≈ 1 the small-a series needs much smaller a to reach its a² regime
    for beta in [1.0, 2.0, 5.0] {
        let gap = |a: f64| {
            em_numeric_integral_z(&coeffs(a, b), beta, n_max).unwrap().z
                - euler_maclaurin_z(&coeffs(a, b), beta, ConstantConvention::Consistent)
                    .unwrap()
                    .z
        };
        let base = gap(0.0);
        let d: Vec<f64> = [4e-5, 2e-5, 1e-5].iter().map(|&a| gap(a) - base).collect();
        // halving a quarters the O(a²) part
        assert!((d[0] / d[1] - 4.0).abs() < 0.4, "beta {beta}: {d:?}");
        assert!((d[1] / d[2] - 4.0).abs() < 0.4, "beta {beta}: {d:?}");
    }
}

#[test]
fn numeric_integral_path_tracks_the_direct_sum() {
    for (a, b) in [(0.0, 0.1), (1e-4, 0.1), (4e-4, 0.2)] {
        let c = coeffs(a, b);
        let n_max = (4000.0 / b) as usize;
        let s = simplified_spectrum(&c, 1.0, n_max);
        for beta in [1.0, 2.0, 5.0] {
            let direct = direct_partition(&s, 1.0 / beta).unwrap().z;
            let numeric = em_numeric_integral_z(&c, beta, n_max).unwrap().z;
            assert_relative_eq!(numeric, direct, max_relative = 1e-3);
        }
    }
}

#[test]
fn numeric_terms_keep_the_upper_endpoint() {
    let c = coeffs(0.0, 4.0);
    let terms = em_numeric_terms(&c, 0.05, 10).unwrap();
    let f_top = (-0.05 * 41.0f64.sqrt()).exp();
    assert_relative_eq!(terms.endpoint, 0.5 * ((-0.05f64).exp() + f_top), max_relative = 1e-15);
}

#[test]
fn direct_sum_matches_compensated_oracle() {
    let p = fig1(0.0);
    let s = first_levels(Branch::ZeroGroundState, &p, 1000).unwrap();
    for t in [0.1, 1.0, 10.0] {
        let reference = compensated_sum(&s.levels, t);
        assert_relative_eq!(direct_partition(&s, t).unwrap().z, reference, max_relative = 1e-13);
    }
    let explicit: Vec<f64> = (0..=1000).map(|n| (1.0 + 4.0 * n as f64).sqrt()).collect();
    assert_relative_eq!(
        direct_partition(&s, 1.0).unwrap().z,
        compensated_sum(&explicit, 1.0),
        max_relative = 1e-14
    );
}

#[test]
fn finite_differences_match_ensemble_averages() {
    for alpha in [0.05, 0.1, 0.2, 0.3] {
        let s = fig1_spectrum(alpha);
        for t in linspace(0.1, 2.0, 20) {
            let point = thermo_from_z(|x| direct_partition(&s, x), t, 1e-3 * t).unwrap();
            let eval = direct_partition(&s, t).unwrap();
            let weights: Vec<f64> = s.levels.iter().map(|e| (-(e - s.levels[0]) / t).exp()).collect();
            let norm: f64 = weights.iter().sum();
            let mean: f64 = s.levels.iter().zip(&weights).map(|(e, w)| e * w).sum::<f64>() / norm;
            let mean_sq: f64 = s.levels.iter().zip(&weights).map(|(e, w)| e * e * w).sum::<f64>() / norm;
            let entropy = eval.ln_z + mean / t;
            let heat = (mean_sq - mean * mean) / (t * t);
            assert_relative_eq!(point.s, entropy, max_relative = 1e-4);
            assert_relative_eq!(point.u, mean, max_relative = 1e-4);
            assert_relative_eq!(point.c_v, heat, max_relative = 1e-4, epsilon = 1e-12);
        }
    }
}

#[test]
fn thermodynamic_identities_on_the_fig1_sweep() {
    for alpha in [0.05, 0.1, 0.2, 0.3] {
        let source = PartitionSource::Direct(fig1_spectrum(alpha));
        for point in thermo_sweep(&source, &linspace(0.1, 2.0, 40)) {
            let point = point.unwrap();
            assert!((point.u - (point.f + point.t * point.s)).abs() <= 1e-12 * point.u.abs().max(1.0));
            assert!(point.c_v >= 0.0);
            assert!(point.s >= 0.0);
        }
    }
}

#[test]
fn ln_z_is_decreasing_and_convex_in_beta() {
    let s = fig1_spectrum(0.1);
    let betas = linspace(0.2, 10.0, 99);
    let ln_z: Vec<f64> = betas
        .iter()
        .map(|b| direct_partition(&s, 1.0 / b).unwrap().ln_z)
        .collect();
    assert!(ln_z.windows(2).all(|w| w[1] < w[0]));
    assert!(ln_z.windows(3).all(|w| w[0] - 2.0 * w[1] + w[2] >= -1e-12));
}

#[test]
fn single_level_ensemble_is_frozen() {
    let s = first_levels(Branch::ZeroGroundState, &fig1(0.1), 0).unwrap();
    for t in [0.1, 1.0, 5.0] {
        let point = thermo_from_z(|x| direct_partition(&s, x), t, 1e-3 * t).unwrap();
        assert_relative_eq!(point.f, 1.0, max_relative = 1e-12);
        assert_relative_eq!(point.u, 1.0, max_relative = 1e-9);
        assert!(point.s.abs() < 1e-9);
        assert!(point.c_v.abs() < 1e-6);
    }
}

#[test]
fn low_temperature_is_ground_dominated() {
    let s = fig1_spectrum(0.1);
    let eval = direct_partition(&s, 0.01).unwrap();
    assert_relative_eq!(eval.ln_z, -1.0 / 0.01, max_relative = 1e-12);
}

#[test]
fn minimal_length_coefficients_are_exact() {
    for (m, omega, alpha) in [(1.0, 2.0, 0.1), (0.5, 1.0, 0.3), (2.0, 0.5, 0.05)] {
        let p = OscillatorParams::new(m, omega, alpha, 0.0).unwrap();
        let c = SimplifiedSpectrumCoeffs::new(&p, SpectrumVariant::MinLengthOnly);
        for n in 0..500 {
            assert_relative_eq!(
                simplified_energy(n, &c, m),
                energy_sq_branch1(n, &p).sqrt(),
                max_relative = 1e-12
            );
        }
    }
}

#[test]
fn max_momentum_coefficient_is_the_large_n_limit() {
    let p = fig1(0.1);
    let c = SimplifiedSpectrumCoeffs::new(&p, SpectrumVariant::MaxMomentum);
    assert_relative_eq!(c.a, 0.07, max_relative = 1e-14);
    assert_relative_eq!(c.b, 4.0, max_relative = 1e-15);
    // E²/(m²n²) → 7ω²α²/4 for large n, but → ω²α² + (2ω/m)/n for small n
    let large = 1e7 as usize;
    assert_relative_eq!(
        energy_sq_branch1(large, &p) / (large as f64).powi(2),
        c.a,
        max_relative = 1e-5
    );
    let small = |n: usize| (energy_sq_branch1(n, &p) - 1.0 - 4.0 * n as f64) / (n * n) as f64;
    assert_relative_eq!(small(1), 0.04, max_relative = 0.05);
}

#[test]
fn simplified_energy_examples() {
    let c = coeffs(0.0, 4.0);
    assert_eq!(simplified_energy(0, &c, 1.0), 1.0);
    assert_eq!(simplified_energy(2, &c, 1.0), 3.0);
}

#[test]
fn closed_form_can_break_down() {
    // well outside the small-deformation regime the truncated series goes negative
    let c = coeffs(0.0, 4.0);
    let source = PartitionSource::ClosedForm {
        coeffs: c,
        m: 1.0,
        convention: ConstantConvention::Consistent,
    };
    let results = thermo_sweep(&source, &linspace(0.1, 2.0, 40));
    assert!(results.iter().any(|r| r.is_err()) || results.iter().flatten().any(|p| p.c_v < 0.0));
}
