use criterion::{criterion_group, criterion_main, Criterion};
use diracosc_core::oracle::{assemble, lowest_eigenvalues};
use diracosc_core::spectrum::{build_spectrum, default_energy_cutoff, susy_recurrence_branch1, Branch};
use diracosc_core::statmech::{
    direct_partition, em_numeric_integral_z, euler_maclaurin_z, linspace, thermo_sweep, ConstantConvention,
    PartitionSource, SimplifiedSpectrumCoeffs, SpectrumVariant,
};
use diracosc_core::OscillatorParams;
use std::hint::black_box;

fn fig1_params(alpha: f64) -> OscillatorParams {
    OscillatorParams::new(1.0, 2.0, alpha, 1.0).unwrap()
}

fn spectrum(c: &mut Criterion) {
    let p = fig1_params(0.05);
    let e_cut = default_energy_cutoff(&p).unwrap();
    c.bench_function("build_spectrum_alpha0.05", |b| {
        b.iter(|| build_spectrum(Branch::ZeroGroundState, black_box(&p), e_cut).unwrap())
    });
    c.bench_function("susy_recurrence_200", |b| {
        b.iter(|| susy_recurrence_branch1(black_box(200), &p))
    });
}

fn oracle(c: &mut Criterion) {
    let p = fig1_params(0.05);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for points in [1001usize, 2001, 4001] {
        group.bench_function(format!("assemble_solve_{points}"), |b| {
            b.iter(|| {
                let op = assemble(&p, points, 20.0).unwrap();
                lowest_eigenvalues(&op, 4).unwrap()
            })
        });
    }
    group.finish();
}

fn partition(c: &mut Criterion) {
    let p = fig1_params(0.1);
    let s = build_spectrum(Branch::ZeroGroundState, &p, default_energy_cutoff(&p).unwrap()).unwrap();
    let coeffs = SimplifiedSpectrumCoeffs::new(&p, SpectrumVariant::MaxMomentum);
    c.bench_function("direct_partition", |b| {
        b.iter(|| direct_partition(&s, black_box(0.8)).unwrap())
    });
    c.bench_function("euler_maclaurin_closed", |b| {
        b.iter(|| euler_maclaurin_z(&coeffs, black_box(1.25), ConstantConvention::Consistent).unwrap())
    });
    c.bench_function("euler_maclaurin_numeric", |b| {
        b.iter(|| em_numeric_integral_z(&coeffs, black_box(1.25), s.n_max).unwrap())
    });
    let temps = linspace(0.1, 2.0, 40);
    let source = PartitionSource::Direct(s);
    c.bench_function("thermo_sweep_direct_40", |b| b.iter(|| thermo_sweep(&source, &temps)));
}

criterion_group!(benches, spectrum, oracle, partition);
criterion_main!(benches);
