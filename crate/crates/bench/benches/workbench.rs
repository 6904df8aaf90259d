use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use p2mu_core::hz::{build_mu, verify_orthogonality};
use p2mu_core::{cauchy_pv, gram, plemelj_scan, point_eval_norm, ComplexMeasure, HZParams, C64};

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("cauchy_pv");
    let z = C64::new(0.3, 0.4);
    for alpha in [0u32, 5] {
        let a = ComplexMeasure::bergman(alpha);
        g.bench_with_input(BenchmarkId::new("bergman", alpha), &a, |b, a| {
            b.iter(|| cauchy_pv(a, black_box(z)).unwrap())
        });
    }
    let lens = p2mu_core::geometry::lens_harmonic_measure(0.3).unwrap();
    g.bench_function("lens", |b| b.iter(|| cauchy_pv(&lens, black_box(z)).unwrap()));
    g.finish();
}

fn scans(c: &mut Criterion) {
    let m = ComplexMeasure::arclength();
    c.bench_function("plemelj_scan/arclength", |b| {
        b.iter(|| plemelj_scan(&m, C64::new(1.0, 0.0), 0.5, &[1e-2, 1e-3, 1e-4], 1e-6).unwrap())
    });
}

fn hilbert(c: &mut Criterion) {
    let mu = build_mu(&HZParams::default()).unwrap();
    let mut g = c.benchmark_group("p2space");
    for n in [10usize, 20, 40] {
        g.bench_with_input(BenchmarkId::new("gram_hz", n), &n, |b, &n| b.iter(|| gram(&mu, n).unwrap()));
    }
    let gb = gram(&mu, 40).unwrap();
    g.bench_function("point_eval_norm/40", |b| {
        b.iter(|| point_eval_norm(&gb, black_box(C64::new(0.5, 0.5))))
    });
    g.bench_function("verify_orthogonality/20", |b| {
        b.iter(|| verify_orthogonality(&HZParams::default(), 20, 1e-8).unwrap())
    });
    g.finish();
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(20).measurement_time(Duration::from_secs(3));
    targets = transforms, scans, hilbert
);
criterion_main!(benches);
