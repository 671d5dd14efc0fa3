use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cyclarc::conic::conic_partition;
use cyclarc::cyclo::period_spectrum;
use cyclarc::sieve::{psi_classify, sieve_range};
use cyclarc::srg::{connection_spec, spectrum_via_characters, verify_srg, VerifyOptions};
use cyclarc_bench::tower;

fn fields(c: &mut Criterion) {
    c.bench_function("tower q=7", |b| b.iter(|| tower(black_box(7))));
    let t = tower(7);
    c.bench_function("periods q=7 N=19", |b| {
        b.iter(|| period_spectrum(t.cubic(), 19, 3).unwrap())
    });
}

fn construction(c: &mut Criterion) {
    let t = tower(7);
    let part = conic_partition(t.cubic(), 3).unwrap();
    let spec = connection_spec(&part).unwrap();
    c.bench_function("partition q=7 M=3", |b| {
        b.iter(|| conic_partition(t.cubic(), 3).unwrap())
    });
    c.bench_function("spectrum q=7 M=3", |b| {
        b.iter(|| spectrum_via_characters(&t, &spec).unwrap())
    });
    let small = tower(3);
    c.bench_function("verify q=3 M=1 direct", |b| {
        b.iter(|| {
            let opts = VerifyOptions {
                direct: Some(None),
                ..Default::default()
            };
            verify_srg(&small, 1, opts).unwrap()
        })
    });
}

fn sieve(c: &mut Criterion) {
    c.bench_function("psi p=100003 M=7", |b| {
        b.iter(|| psi_classify(black_box(100_003), 7).unwrap())
    });
    c.bench_function("sieve M=7 h=4 to 10^4", |b| {
        b.iter(|| sieve_range(7, 4, 1, -1, 10_000).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = fields, construction, sieve
}
criterion_main!(benches);
