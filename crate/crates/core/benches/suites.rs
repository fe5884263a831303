use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cshift::chl::family_catalog;
use cshift::gallery::{self, GalleryBudget, Params};
use cshift::par::{self, Exec};
use cshift::topology::check_convergence_with;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn apply_sweep(c: &mut Criterion) {
    let code = gallery::code_h(Params::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pts = code.domain.sample_points(20_000, 24, &mut rng);
    let mut g = c.benchmark_group("apply_h_20k");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::map(exec, black_box(&pts), |p| code.apply(p).is_ok()))
        });
    }
    g.finish();
}

fn convergence(c: &mut Criterion) {
    let shift = gallery::full_naturals();
    let fams = family_catalog(&shift, 8);
    let mut g = c.benchmark_group("convergence_catalog");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                fams.iter()
                    .map(|f| check_convergence_with(f, 16, 2_000, exec).is_ok())
                    .filter(|&ok| ok)
                    .count()
            })
        });
    }
    g.finish();
}

fn gallery_run(c: &mut Criterion) {
    let budget = GalleryBudget::default();
    let mut g = c.benchmark_group("gallery_run");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| gallery::run_all_with(&[], Params::default(), budget, 7, exec).unwrap().all_ok())
        });
    }
    g.finish();
}

criterion_group!(suites, apply_sweep, convergence, gallery_run);
criterion_main!(suites);
