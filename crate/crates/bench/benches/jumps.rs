use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ternjump::count::closed_j;
use ternjump::families::{scan, ScanConfig};
use ternjump::modular::validate_triple;
use ternjump::poly::{coefficients, jump_scan};
use ternjump::repr::CrtBasis;
use ternjump::zones::{classify, table_v, ZoneProfile};

const TRIPLES: [(i64, i64, i64); 3] = [(7, 11, 13), (31, 37, 41), (101, 103, 107)];

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (p, q, r) in TRIPLES {
        let t = validate_triple(p, q, r, true).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(t.n()), &t, |b, t| {
            b.iter(|| jump_scan(&coefficients(black_box(t)).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn closed_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("closed_form");
    for (p, q, r) in TRIPLES {
        let t = validate_triple(p, q, r, true).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(t.n()), &t, |b, t| {
            b.iter(|| closed_j(&ZoneProfile::new(black_box(t)).unwrap()).j)
        });
    }
    group.finish();
}

fn per_index(c: &mut Criterion) {
    let t = validate_triple(31, 37, 41, true).unwrap();
    let zp = ZoneProfile::new(&t).unwrap();
    let basis = CrtBasis::new(&t);
    c.bench_function("table_v over all k, n=47027", |b| {
        b.iter(|| {
            (0..t.n())
                .map(|k| table_v(&zp, &classify(&zp, &basis.decompose(k)).unwrap()))
                .filter(|&v| v == 1)
                .count()
        })
    });
}

fn scan_harness(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_pmax_19");
    group.sample_size(10);
    for jobs in [1, 4] {
        let mut cfg = ScanConfig::new(19);
        cfg.require_primes = true;
        cfg.jobs = jobs;
        group.bench_with_input(BenchmarkId::from_parameter(jobs), &cfg, |b, cfg| {
            b.iter(|| scan(cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, oracle, closed_form, per_index, scan_harness);
criterion_main!(benches);
