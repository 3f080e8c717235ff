use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use endogrow::endo::Endomorphism;
use endogrow::growth::{distortion_rate, km_table, KmOptions};
use endogrow::laws::{default_catalog, run_suite, LawConfig, DEFAULT_SEED};
use endogrow::oracle::{enumerate_ball, BfsOptions};
use endogrow::par::Execution;
use endogrow::products::{semidirect, SemidirectDescriptor};
use endogrow::{Group, IntMatrix};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn name(e: Execution) -> &'static str {
    match e {
        Execution::Sequential => "sequential",
        Execution::Parallel => "parallel",
    }
}

fn cat_map() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()
}

fn ball(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball");
    g.sample_size(10);
    let cases = [("F3 r7", Group::free(3), 7), ("cat-map r10", semidirect(2, vec![cat_map()]).unwrap(), 10)];
    for (label, group, radius) in &cases {
        for e in MODES {
            let opts = BfsOptions { execution: e, ..BfsOptions::default() };
            g.bench_with_input(BenchmarkId::new(name(e), label), radius, |b, &r| {
                b.iter(|| enumerate_ball(black_box(group), r, opts).unwrap())
            });
        }
    }
    g.finish();
}

fn km(c: &mut Criterion) {
    let mut g = c.benchmark_group("km_table");
    g.sample_size(10);
    let group = Group::free(4);
    let alpha = Endomorphism::words(&["abc", "bAd", "cab", "dcB"], 4).unwrap();
    for e in MODES {
        g.bench_function(BenchmarkId::new(name(e), "F4 M10"), |b| {
            b.iter(|| km_table(&alpha, black_box(&group), 10, KmOptions { execution: e, bfs: None }).unwrap())
        });
    }
    let desc = SemidirectDescriptor::new(2, vec![cat_map(), IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]).unwrap()]).unwrap();
    for e in MODES {
        g.bench_function(BenchmarkId::new(name(e), "action growth M24"), |b| {
            b.iter(|| distortion_rate(black_box(&desc), 24, e).unwrap())
        });
    }
    g.finish();
}

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("law_suite");
    g.sample_size(10);
    let checks = default_catalog(DEFAULT_SEED);
    for e in MODES {
        let config = LawConfig { execution: e, bfs: BfsOptions { execution: e, ..BfsOptions::default() }, ..LawConfig::default() };
        g.bench_function(name(e), |b| b.iter(|| run_suite(black_box(&checks), &config).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, ball, km, suite);
criterion_main!(benches);
