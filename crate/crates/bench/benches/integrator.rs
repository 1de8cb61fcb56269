use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use nmrqc_bench::{y1_pulse, y2_pulse};
use nmrqc_core::experiment::canned_spec;
use nmrqc_core::integrator::propagator;
use nmrqc_core::{evolve, run_experiment, IntegratorConfig, Method, SfMode, StateVector};

fn product_formula(c: &mut Criterion) {
    let mut g = c.benchmark_group("product_formula");
    let s = StateVector::singlet();
    for (name, eo) in [
        ("Y1 k=1", y1_pulse(1, SfMode::Rotating)),
        ("Y2 k=1", y2_pulse(1, SfMode::Rotating)),
    ] {
        let cfg = IntegratorConfig::new(0.01, Method::ProductFormula);
        g.throughput(Throughput::Elements((eo.tau_over_2pi / 0.01) as u64));
        g.bench_with_input(BenchmarkId::new("state", name), &eo, |b, eo| {
            b.iter(|| evolve(black_box(&s), eo, &cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("propagator", name), &eo, |b, eo| {
            b.iter(|| propagator(black_box(eo), &cfg, 0.0).unwrap())
        });
    }
    g.finish();
}

fn dense_oracle(c: &mut Criterion) {
    let eo = y1_pulse(1, SfMode::Rotating);
    let s = StateVector::singlet();
    let cfg = IntegratorConfig::new(0.01, Method::DenseMidpointOracle);
    c.bench_function("dense_oracle/Y1 k=1", |b| {
        b.iter(|| evolve(black_box(&s), &eo, &cfg).unwrap())
    });
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("tables");
    g.sample_size(10);
    for name in ["table5", "table9"] {
        let spec = canned_spec(name).unwrap();
        g.bench_function(name, |b| {
            b.iter(|| run_experiment(black_box(&spec)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, product_formula, dense_oracle, tables);
criterion_main!(benches);
