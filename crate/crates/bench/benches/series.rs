use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qgamma_core::{log_gamma_q, psi_all, psi_q, EvalConfig};

fn digamma(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let mut g = c.benchmark_group("psi_q");
    // 0.999 and 1.001 sit just outside the near-one band, where the series is longest
    for q in [0.1, 0.5, 0.999, 1.001, 4.0, 10.0] {
        let p = cfg.point(q).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(q), &p, |b, &p| {
            b.iter(|| psi_q(black_box(1.7), p, &cfg).unwrap())
        });
    }
    g.finish();

    let p = cfg.point(0.9).unwrap();
    c.bench_function("psi_all q=0.9", |b| b.iter(|| psi_all(black_box(2.3), p, &cfg).unwrap()));
}

fn log_gamma(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let mut g = c.benchmark_group("log_gamma_q");
    for q in [0.5, 0.999, 4.0] {
        let p = cfg.point(q).unwrap();
        for x in [0.01, 1.5, 100.0] {
            g.bench_function(format!("q={q} x={x}"), |b| b.iter(|| log_gamma_q(black_box(x), p, &cfg).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, digamma, log_gamma);
criterion_main!(benches);
