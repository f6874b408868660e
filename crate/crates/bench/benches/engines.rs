use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use kfree::correlation::{CorrelationSpec, EulerContext};
use kfree::literal::{parse_element_list, parse_ideal};
use kfree::sieve::sieve;
use kfree::spectral::{lambda_approx, rotation_eigencheck};
use kfree::{NumberField, PrimeStream};

fn gaussian() -> Arc<PrimeStream> {
    Arc::new(PrimeStream::new(&NumberField::from_i64(&[1, 0, 1]).unwrap()).unwrap())
}

fn sieving(c: &mut Criterion) {
    let s = gaussian();
    c.bench_function("sieve gaussian radius 120", |b| b.iter(|| sieve(&s, 2, black_box(120)).unwrap()));
    let q = PrimeStream::new(&NumberField::from_i64(&[0, 1]).unwrap()).unwrap();
    c.bench_function("sieve rational cube-free radius 1e5", |b| b.iter(|| sieve(&q, 3, black_box(100_000)).unwrap()));
}

fn euler_products(c: &mut Criterion) {
    let s = gaussian();
    let ctx = EulerContext::new(s.clone(), 2, 100_000).unwrap();
    let spec = CorrelationSpec::new(2, parse_element_list(s.field(), "1;i;-1;-i").unwrap());
    ctx.analytic_correlation(&spec).unwrap();
    c.bench_function("five-point correlation, warm context", |b| b.iter(|| ctx.analytic_correlation(black_box(&spec)).unwrap()));
}

fn ideals(c: &mut Criterion) {
    let s = gaussian();
    let a = parse_ideal(s.field(), "8-6i").unwrap();
    let b2 = parse_ideal(s.field(), "3+4i").unwrap();
    c.bench_function("ideal product", |b| b.iter(|| black_box(&a).product(black_box(&b2)).unwrap()));
    c.bench_function("ideal power 5", |b| b.iter(|| black_box(&b2).power(5).unwrap()));
}

fn spectrum(c: &mut Criterion) {
    let s = gaussian();
    c.bench_function("lambda D=100", |b| b.iter(|| lambda_approx(&s, 2, black_box(100)).unwrap()));
    c.bench_function("rotation check D=25", |b| b.iter(|| rotation_eigencheck(&s, 2, black_box(25), &[1, 0]).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = sieving, euler_products, ideals, spectrum
}
criterion_main!(benches);
