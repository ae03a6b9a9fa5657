use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use vilenkin_core::operators::maximal;
use vilenkin_core::transform::naive_forward;
use vilenkin_core::{LevelFunction, OperatorFamily, RadixSequence, TransformPlan};

fn sample(radix: &Arc<RadixSequence>) -> LevelFunction {
    LevelFunction::from_fn(radix.clone(), |x| Complex64::new((x as f64 * 0.37).sin(), (x as f64 * 0.11).cos()))
}

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward");
    for radices in [vec![2; 12], vec![3; 8], vec![2, 3, 4, 5, 2, 3, 4]] {
        let radix = Arc::new(RadixSequence::new(radices).unwrap());
        let f = sample(&radix);
        let plan = TransformPlan::new(radix.clone());
        let label = format!("M={}", radix.order());
        group.bench_with_input(BenchmarkId::new("fast", &label), &f, |b, f| {
            b.iter(|| plan.forward(black_box(f)).unwrap())
        });
    }
    let radix = Arc::new(RadixSequence::dyadic(9).unwrap());
    let f = sample(&radix);
    group.bench_function("naive/M=512", |b| b.iter(|| naive_forward(black_box(&f))));
    group.finish();
}

fn maximal_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximal");
    group.sample_size(10);
    for n in [8, 10] {
        let radix = Arc::new(RadixSequence::dyadic(n).unwrap());
        let f = sample(&radix);
        let family = OperatorFamily::all_partial_sums(radix.clone());
        group.bench_with_input(BenchmarkId::new("partial-sums", radix.order()), &f, |b, f| {
            b.iter(|| maximal(black_box(f), &family).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, maximal_operator);
criterion_main!(benches);
