//! Benchmarks the data-parallel code paths against a single worker thread.
//!
//! With the default `parallel` feature the same workloads run twice, once
//! inside a one-thread pool and once inside a pool sized by the machine, so
//! the two timings isolate the rayon speedup. Building the bench with
//! `--no-default-features` instead measures the true sequential fallback,
//! which has no pool at all.

use criterion::{criterion_group, criterion_main, Criterion};
use equichar::{
    invariant_dimension, rat_int, relation_set, symmetrize, GroupKind, Monomial, QPoly,
    RelationCache,
};
use std::hint::black_box;

type Body<'a> = &'a (dyn Fn() + Sync);

/// A dense rank-four polynomial whose hyperoctahedral orbit sum touches all
/// 384 signed permutations.
fn seed_poly() -> QPoly {
    let mut p = QPoly::zero(4);
    p.add_term(
        Monomial { w: vec![2, 1, 0, 0], u: vec![false, false, true, false] },
        rat_int(3),
    );
    p.add_term(
        Monomial { w: vec![1, 1, 1, 0], u: vec![true, false, false, false] },
        rat_int(-2),
    );
    p.add_term(
        Monomial { w: vec![4, 0, 0, 0], u: vec![false, true, true, false] },
        rat_int(5),
    );
    p
}

fn bench_workloads(c: &mut Criterion, label: &str, run: impl Fn(Body)) {
    let p = seed_poly();

    let mut group = c.benchmark_group("relation_set_rank3");
    group.sample_size(10);
    group.bench_function(label, |b| {
        b.iter(|| {
            run(&|| {
                let set = relation_set(black_box(3), &RelationCache::disabled()).unwrap();
                black_box(set.len());
            })
        })
    });
    group.finish();

    let mut group = c.benchmark_group("invariant_dimension_b4_deg4");
    group.sample_size(10);
    group.bench_function(label, |b| {
        b.iter(|| {
            run(&|| {
                let d =
                    invariant_dimension(GroupKind::Hyperoctahedral, black_box(4), black_box(4))
                        .unwrap();
                black_box(d);
            })
        })
    });
    group.finish();

    let mut group = c.benchmark_group("symmetrize_b4");
    group.sample_size(10);
    group.bench_function(label, |b| {
        b.iter(|| {
            run(&|| {
                let s = symmetrize(black_box(&p), GroupKind::Hyperoctahedral).unwrap();
                black_box(s.num_terms());
            })
        })
    });
    group.finish();
}

#[cfg(feature = "parallel")]
fn benches(c: &mut Criterion) {
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().build().unwrap();
    let threads = wide.current_num_threads();
    bench_workloads(c, "serial_1_thread", |f| serial.install(f));
    bench_workloads(c, &format!("parallel_{threads}_threads"), |f| wide.install(f));
}

#[cfg(not(feature = "parallel"))]
fn benches(c: &mut Criterion) {
    bench_workloads(c, "sequential_fallback", |f| f());
}

criterion_group!(suite, benches);
criterion_main!(suite);
