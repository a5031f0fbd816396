use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use kerrsq::spectra::{compute_spectrum, sweep, SweepAxis};
use kerrsq::{spectrum_at, spectrum_closed, spectrum_optimal};
use kerrsq_bench::{figure_one_phases, figure_one_request};

fn closed_forms(c: &mut Criterion) {
    let phases = figure_one_phases();
    c.bench_function("spectrum_closed", |b| b.iter(|| spectrum_closed(black_box(&phases), black_box(0.7))));
    c.bench_function("spectrum_optimal", |b| b.iter(|| spectrum_optimal(black_box(&phases), black_box(0.5))));
    c.bench_function("spectrum_at", |b| {
        b.iter(|| spectrum_at(black_box(&phases), black_box(0.7), black_box(0.5)))
    });
}

fn grids(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_spectrum");
    for points in [31, 301, 3001] {
        let req = figure_one_request(points);
        group.bench_with_input(BenchmarkId::from_parameter(points), &req, |b, r| {
            b.iter(|| compute_spectrum(r).unwrap())
        });
    }
    group.finish();

    let req = figure_one_request(1);
    let values: Vec<f64> = (1..=300).map(|i| 0.01 * i as f64).collect();
    c.bench_function("sweep_phi01_300", |b| b.iter(|| sweep(&req, SweepAxis::Phi01, &values).unwrap()));
}

criterion_group!(benches, closed_forms, grids);
criterion_main!(benches);
