use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qgraph_core::localfield::PadicNumber;
use qgraph_core::oscint::{f_kernel, j1_exact_sum, real_mu_hat, DEFAULT_TOL};

fn padic(a: i64, b: i64, p: u64) -> PadicNumber {
    PadicNumber::from_i64(a, b, p, 32).unwrap()
}

fn bench_j1(c: &mut Criterion) {
    let mut g = c.benchmark_group("j1_exact");
    for &(p, t) in &[(3u64, 2u32), (3, 5), (5, 3), (7, 4)] {
        let x = padic(2, (p * p) as i64, p);
        let y = padic(p as i64 + 1, 1, p);
        g.bench_with_input(BenchmarkId::new(format!("p{p}"), t), &t, |b, &t| {
            b.iter(|| j1_exact_sum(black_box(&x), black_box(&y), t).unwrap())
        });
    }
    g.finish();
}

fn bench_real(c: &mut Criterion) {
    let mut g = c.benchmark_group("real_mu_hat");
    g.sample_size(20);
    for &(x, y) in &[(0.3, 0.2), (2.0, 1.5), (10.0, -7.0), (45.0, 30.0)] {
        g.bench_function(format!("x{x}_y{y}"), |b| {
            b.iter(|| real_mu_hat(10.0, black_box(x), black_box(y), DEFAULT_TOL).unwrap())
        });
    }
    g.finish();
}

fn bench_kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("f_kernel");
    for &(p, r, v) in &[(3u64, 2u32, -3i64), (3, 4, -6), (5, 3, -4), (7, 2, -3)] {
        let w = PadicNumber::from_parts(p, v, &2.into(), 32).unwrap();
        g.bench_function(format!("p{p}_r{r}_v{v}"), |b| b.iter(|| f_kernel(r, black_box(&w)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_j1, bench_real, bench_kernel);
criterion_main!(benches);
