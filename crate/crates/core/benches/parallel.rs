use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cubekit::canon::{canonical_form_with, CanonOptions};
use cubekit::census::{enumerate, SearchOptions, SearchSpec};
use cubekit::surgery::{all_merger_gadgets, cyclic_unroll};
use cubekit::{fixtures, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census_one_cusp_n1");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    let spec = SearchSpec::new(1).orientable().with_cusps(1);
    for (name, exec) in MODES {
        let opts = SearchOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| enumerate(black_box(&spec), opts).unwrap().len())
        });
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let mut group = c.benchmark_group("canonical_form_seed_cover_x8");
    let cover = cyclic_unroll(&fixtures::seed(), 2, 8).unwrap();
    for (name, exec) in MODES {
        let opts = CanonOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| canonical_form_with(black_box(&cover), opts).unwrap())
        });
    }
    group.finish();
}

fn gadgets(c: &mut Criterion) {
    let mut group = c.benchmark_group("merger_gadget_scan");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| all_merger_gadgets(1, exec).len()));
    }
    group.finish();
}

criterion_group!(benches, census, canonical, gadgets);
criterion_main!(benches);
