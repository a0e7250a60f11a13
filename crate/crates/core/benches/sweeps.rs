use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gmp_core::numerics::{fit_levels, gmp_levels, synthetic_levels, FitOptions, GridSpec};
use gmp_core::verify::{self, Suite};
use gmp_core::{par, Execution, GmpModel, PhysicalParams};

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn sweep_models() -> Vec<GmpModel> {
    (0..16)
        .map(|i| GmpModel::new(10.0 + 2.5 * i as f64, 3.0 + 0.5 * i as f64).unwrap())
        .collect()
}

fn oracle_sweep(c: &mut Criterion) {
    let models = sweep_models();
    let mut group = c.benchmark_group("oracle_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| {
                par::map(exec, &models, |m| {
                    let grid = GridSpec::for_model(m, 5000).unwrap();
                    gmp_levels(m, &grid, 1e-12, Execution::Sequential).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn fit_sweep(c: &mut Criterion) {
    let truths: Vec<PhysicalParams> = [
        (10.0, 1.0, 2.5),
        (30.0, 0.8, 1.7),
        (45.0, 1.4, 3.2),
        (20.0, 0.6, 2.0),
    ]
    .iter()
    .map(|&(d, a, re)| PhysicalParams::new(d, a, re).unwrap())
    .collect();
    let mut group = c.benchmark_group("fit_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| {
                par::map(exec, &truths, |t| {
                    let obs = synthetic_levels(t).unwrap();
                    let guess = PhysicalParams::new(1.2 * t.depth, 1.2 * t.a, 1.2 * t.r_e).unwrap();
                    fit_levels(&obs, &guess, &FitOptions::default())
                        .unwrap()
                        .residual_rms
                })
            })
        });
    }
    group.finish();
}

fn verify_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_all");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| black_box(verify::run(Suite::All, exec)).passed())
        });
    }
    group.finish();
}

criterion_group!(benches, oracle_sweep, fit_sweep, verify_suite);
criterion_main!(benches);
