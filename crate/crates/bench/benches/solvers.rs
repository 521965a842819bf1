use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use upcross::experiments::{bench_experiment, problem_by_id};
use upcross::mle::{gamma_poisson_fit, weibull_fit, Sample};
use upcross::special::{riemann_zeta, std_normal_cdf, AccuracyBudget};
use upcross::SolveOptions;

fn single_solves(c: &mut Criterion) {
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("solve");
    for (id, x0) in [
        ("example1", -1.0),
        ("table2a", 0.3),
        ("table2b", 1.7),
        ("table3-p0.01-mu-2", 1.5),
    ] {
        let problem = problem_by_id(id).unwrap();
        for alg in problem.algorithms() {
            group.bench_with_input(BenchmarkId::new(id, alg.name()), &x0, |b, &x0| {
                b.iter(|| problem.run(alg, black_box(x0), &opts))
            });
        }
    }
    group.finish();
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("tables");
    group.sample_size(10);
    for name in ["table2a", "table2b", "table3"] {
        group.bench_function(name, |b| b.iter(|| bench_experiment(name, 1000, black_box(1)).unwrap()));
    }
    group.finish();
}

fn fits(c: &mut Criterion) {
    let opts = SolveOptions::default().with_max_iter(1_000_000);
    let weibull = Sample::new((1..=200).map(|i| (f64::from(i) / 40.0).powf(0.7)).collect()).unwrap();
    let counts = Sample::new((0..200).map(|i| f64::from((i * 7919) % 13)).collect()).unwrap();
    c.bench_function("fit/weibull", |b| {
        b.iter(|| weibull_fit(black_box(&weibull), None, &opts).unwrap())
    });
    c.bench_function("fit/gamma_poisson", |b| {
        b.iter(|| gamma_poisson_fit(black_box(&counts), None, &opts).unwrap())
    });
}

fn special(c: &mut Criterion) {
    c.bench_function("special/normal_cdf", |b| b.iter(|| std_normal_cdf(black_box(-2.3))));
    c.bench_function("special/zeta_1.1", |b| {
        b.iter(|| riemann_zeta(black_box(1.1), AccuracyBudget::default()))
    });
}

criterion_group!(benches, single_solves, tables, fits, special);
criterion_main!(benches);
