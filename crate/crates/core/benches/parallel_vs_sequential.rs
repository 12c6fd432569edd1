use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use growthopt::experiment::{run_bench, Algorithm, BenchMatrix, MatrixProblem, ProblemSource, StartSpec};
use growthopt::growth::{estimate_growth_constant, Sampler};
use growthopt::problem::{catalog, ProblemDoc};
use growthopt::Execution;

fn matrix() -> BenchMatrix {
    let problems = catalog::nonsmooth_matrix()
        .unwrap()
        .into_iter()
        .map(|e| MatrixProblem {
            name: e.name.clone(),
            problem: ProblemSource::Inline(Box::new(ProblemDoc::from_instance(&e.problem).unwrap())),
            starts: [10.0, 1e3].iter().map(|&d| StartSpec::Point(e.start_at_distance(d))).collect(),
        })
        .collect();
    BenchMatrix {
        problems,
        algorithms: vec![Algorithm::SdmPolyak, Algorithm::Alg3, Algorithm::SdmNormalized],
        eps_primes: vec![0.1, 0.01],
        budget: 20_000,
        seed: 0,
    }
}

fn bench(c: &mut Criterion) {
    let m = matrix();
    let mut g = c.benchmark_group("bench_matrix");
    g.sample_size(10);
    for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        g.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| black_box(run_bench(&m, Path::new("."), exec).unwrap()))
        });
    }
    g.finish();

    let p = catalog::linf_norm(3).unwrap();
    let s = Sampler::Random {
        center: vec![0.0; 3],
        radius: 100.0,
        count: 200_000,
        seed: 1,
    };
    let mut g = c.benchmark_group("growth_sampling");
    g.sample_size(10);
    for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        g.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, &exec| {
            b.iter(|| black_box(estimate_growth_constant(&p, &s, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
