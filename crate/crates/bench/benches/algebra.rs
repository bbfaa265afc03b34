use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use starsdym::{chi_project, moyal_bracket, star_product, Complex64, FourierField, Hbar, ModeVector};

/// Dense field with every mode up to `band` and deterministic coefficients.
fn dense(band: i64) -> FourierField {
    FourierField::from_modes((-band..=band).flat_map(|a| {
        (-band..=band).map(move |b| {
            let t = (a * 7 + b * 13) as f64;
            (
                ModeVector::new(a, b),
                Complex64::new(t.sin(), t.cos()) / (1.0 + (a * a + b * b) as f64),
            )
        })
    }))
}

fn products(c: &mut Criterion) {
    let hbar = Hbar::for_dimension(5).unwrap();
    let mut group = c.benchmark_group("star");
    for band in [4, 8, 16] {
        let (f, g) = (dense(band), dense(band).conj());
        group.bench_with_input(BenchmarkId::new("product", band), &band, |b, _| {
            b.iter(|| star_product(black_box(&f), black_box(&g), hbar))
        });
        group.bench_with_input(BenchmarkId::new("moyal_bracket", band), &band, |b, _| {
            b.iter(|| moyal_bracket(black_box(&f), black_box(&g), hbar))
        });
    }
    group.finish();
}

fn projection(c: &mut Criterion) {
    let f = dense(24);
    let mut group = c.benchmark_group("chi_project");
    for n in [2, 8, 32] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| chi_project(black_box(&f), n))
        });
    }
    group.finish();
}

criterion_group!(benches, products, projection);
criterion_main!(benches);
