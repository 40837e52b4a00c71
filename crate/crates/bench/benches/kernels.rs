use criterion::{criterion_group, criterion_main, Criterion};
use flatnorm::cochain::Cochain;
use flatnorm::norm::{self, CompareOptions};
use flatnorm::saddle::{self, Options};
use flatnorm::{delaunay, gallery};
use std::hint::black_box;

fn kernels(c: &mut Criterion) {
    let octagon = gallery::regular_octagon();
    let opts = Options::default();
    c.bench_function("enumerate octagon L=3", |b| b.iter(|| saddle::enumerate(black_box(&octagon), 3.0, &opts).unwrap()));

    let kw = gallery::kw_surface(0.05).unwrap();
    c.bench_function("delaunayize kw 0.05", |b| b.iter(|| delaunay::delaunayize(black_box(&kw.surface)).unwrap()));

    let twist = gallery::twist_cochain(&kw, 0).unwrap();
    let copts = CompareOptions::default();
    c.bench_function("compare kw twist", |b| b.iter(|| norm::compare(black_box(&kw.surface), &twist, &copts).unwrap()));

    let q = gallery::principal_genus2();
    let conj = Cochain::conj_omega(&q);
    c.bench_function("compare principal conj omega", |b| b.iter(|| norm::compare(black_box(&q), &conj, &copts).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = kernels
}
criterion_main!(benches);
