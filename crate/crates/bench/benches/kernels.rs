use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fwx_core::engine::{coeff_w, v_n};
use fwx_core::*;

fn sets() -> Vec<(&'static str, fn() -> ParameterSet)> {
    vec![
        ("gauss", || ParameterSet::gauss(0.5, 0.7, 1.3).unwrap()),
        ("mixed", || ParameterSet::real(&[0.35, 0.6], &[0.5, 1.0], &[0.9], &[0.5]).unwrap()),
    ]
}

/// Coefficient tables are cached per parameter set, so every iteration
/// builds a fresh set to time the cold path.
fn coefficients(c: &mut Criterion) {
    let mut g = c.benchmark_group("coefficients");
    for (name, make) in sets() {
        g.bench_function(BenchmarkId::new("v_0..200", name), |b| {
            b.iter(|| {
                let ps = make();
                black_box(v_n(&ps, 1.0, 0.0, 200).unwrap())
            })
        });
        g.bench_function(BenchmarkId::new("w_0..10", name), |b| {
            b.iter(|| {
                let ps = make();
                let s = ps.expansion_sigma();
                for m in 0..=10 {
                    black_box(coeff_w(&ps, s, m, 1e-8).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let opts = EvalOptions::default();
    let points = [
        ("maclaurin", Complex64::new(0.5, 0.2)),
        ("singular", Complex64::new(0.9, 0.1)),
        ("residue", Complex64::new(-2.0, 1.0)),
    ];
    let mut g = c.benchmark_group("eval");
    for (name, make) in sets() {
        for (region, zeta) in points {
            // warm table: the common case of many points on one set
            let ps = make();
            let z = zeta * ps.rho();
            g.bench_function(BenchmarkId::new(region, name), |b| {
                b.iter(|| black_box(eval_auto(&ps, black_box(z), &opts).unwrap()))
            });
        }
        let ps = make();
        g.bench_function(BenchmarkId::new("at-rho", name), |b| {
            b.iter(|| black_box(eval_at_rho(&ps, &opts).unwrap()))
        });
        g.bench_function(BenchmarkId::new("cut", name), |b| {
            b.iter(|| black_box(cut_values(&ps, 2.0 * ps.rho(), &opts).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, coefficients, evaluation);
criterion_main!(benches);
