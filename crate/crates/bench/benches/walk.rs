use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use streamwalk::oracle::{random_multigraph, random_turnstile_stream, shuffled};
use streamwalk::rng::query_rng;
use streamwalk::{Algorithm, FrozenWalker, Model, VertexId, WalkerConfig};

fn walk(c: &mut Criterion) {
    let mut group = c.benchmark_group("walk");
    let n = 200;
    for algo in Algorithm::ALL {
        let g = random_multigraph(n, 2000, algo.mode(), 1);
        let updates = match algo.model() {
            Model::Insertion => shuffled(&g.to_updates(), 2),
            Model::Turnstile => random_turnstile_stream(&g, 200, 2),
        };
        let walker = FrozenWalker::build(WalkerConfig::new(algo, n, 16, 0.25, 3), updates).unwrap();
        let mut i = 0u64;
        group.bench_function(BenchmarkId::from_parameter(algo), |b| {
            b.iter(|| {
                i += 1;
                black_box(walker.walk(VertexId(0), &mut query_rng(5, i)))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, walk);
criterion_main!(benches);
