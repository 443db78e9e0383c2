use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use gospa::assign2d::{solve_lap, CostMatrix};
use gospa::basedist::Euclidean;
use gospa::evalrfs::{corrupt, generate_fig3_scenario, project_components, CorruptionConfig};
use gospa::gospa::gospa;
use gospa::tgospa::{tgospa_exact, tgospa_exact_curve, tgospa_lp};
use gospa::types::{GospaParams, TgospaParams};

fn bench_assignment(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_lap");
    for size in [10usize, 30, 100] {
        let mut rng = gospa_bench::rng(1);
        let matrix = CostMatrix::from_rows(&gospa_bench::cost_rows(&mut rng, size, size)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(size), &matrix, |b, m| {
            b.iter(|| solve_lap(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn bench_gospa(c: &mut Criterion) {
    let mut group = c.benchmark_group("gospa");
    let params = GospaParams::new(2.0, 2.0, 0.4).unwrap();
    for size in [5usize, 20, 50] {
        let mut rng = gospa_bench::rng(2);
        let x = gospa_bench::object_set(&mut rng, size, 20.0);
        let y = gospa_bench::object_set(&mut rng, size + 2, 20.0);
        group.bench_with_input(BenchmarkId::from_parameter(size), &(x, y), |b, (x, y)| {
            b.iter(|| gospa(black_box(x), black_box(y), &params, &Euclidean).unwrap())
        });
    }
    group.finish();
}

fn bench_tgospa(c: &mut Criterion) {
    let mut group = c.benchmark_group("tgospa");
    let params = TgospaParams::from_values(1.5, 1.0, 0.4, 0.2).unwrap();
    let mut rng = gospa_bench::rng(3);
    let x = gospa_bench::trajectory_set(&mut rng, 3, 4, 6.0);
    let y = gospa_bench::trajectory_set(&mut rng, 3, 4, 6.0);
    group.bench_function("exact_small", |b| {
        b.iter(|| tgospa_exact(black_box(&x), black_box(&y), &params, &Euclidean).unwrap())
    });
    group.bench_function("lp_small", |b| {
        b.iter(|| tgospa_lp(black_box(&x), black_box(&y), &params, &Euclidean).unwrap())
    });
    group.finish();
}

fn bench_monte_carlo_run(c: &mut Criterion) {
    let truth = project_components(&generate_fig3_scenario(7), &[0, 2]).unwrap();
    let estimate = corrupt(&truth, &CorruptionConfig::benchmark(8)).unwrap();
    let params = TgospaParams::from_values(10.0, 2.0, 0.5, 1.0).unwrap();
    c.bench_function("exact_curve_benchmark_scenario", |b| {
        b.iter(|| {
            tgospa_exact_curve(black_box(&truth), black_box(&estimate), &params, &Euclidean)
                .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_assignment,
    bench_gospa,
    bench_tgospa,
    bench_monte_carlo_run
);
criterion_main!(benches);
