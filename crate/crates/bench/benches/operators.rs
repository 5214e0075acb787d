use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use genhilbert::dirichlet::test_function;
use genhilbert::measure::moments;
use genhilbert::operator::{build_conjugated, hankel_apply, op_norm, PowerOptions};
use genhilbert::specfun::gamma_ratio;
use genhilbert_bench::{boundary_measure, reference_params};

fn specfun(c: &mut Criterion) {
    c.bench_function("gamma_ratio/1e6", |b| b.iter(|| gamma_ratio(black_box(1_000_000), black_box(1.5))));
    c.bench_function("gamma_ratio/32", |b| b.iter(|| gamma_ratio(black_box(32), black_box(1.5))));
}

fn moment_batches(c: &mut Criterion) {
    let spec = boundary_measure(&reference_params());
    let mut group = c.benchmark_group("moments");
    for count in [1_024usize, 16_384] {
        group.bench_with_input(BenchmarkId::from_parameter(count), &count, |b, &count| {
            b.iter(|| moments(&spec, count).unwrap())
        });
    }
    group.finish();
}

fn norms(c: &mut Criterion) {
    let params = reference_params();
    let spec = boundary_measure(&params);
    let mut group = c.benchmark_group("conjugated_norm");
    group.sample_size(10);
    for dim in [256usize, 1024] {
        let op = build_conjugated(&spec, &params, dim).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &op, |b, op| {
            b.iter(|| op_norm(&op.entries, PowerOptions::default()))
        });
    }
    group.finish();
}

fn hankel(c: &mut Criterion) {
    let params = reference_params();
    let spec = boundary_measure(&params);
    let f = test_function(0.99, params.alpha).unwrap();
    c.bench_function("hankel_apply/f_0.99", |b| {
        b.iter(|| hankel_apply(&spec, params.gamma, &f, f.len()).unwrap())
    });
}

criterion_group!(benches, specfun, moment_batches, norms, hankel);
criterion_main!(benches);
