use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use streamwalk::oracle::{random_multigraph, random_turnstile_stream, shuffled};
use streamwalk::{Algorithm, Ingestor, Model, WalkerConfig};

fn ingest(c: &mut Criterion) {
    let mut group = c.benchmark_group("ingest");
    let n = 200;
    for algo in Algorithm::ALL {
        let g = random_multigraph(n, 2000, algo.mode(), 1);
        let updates = match algo.model() {
            Model::Insertion => shuffled(&g.to_updates(), 2),
            Model::Turnstile => random_turnstile_stream(&g, 200, 2),
        };
        group.throughput(Throughput::Elements(updates.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(algo), &updates, |b, ups| {
            b.iter(|| {
                let mut ing = Ingestor::new(WalkerConfig::new(algo, n, 4, 0.25, 3)).unwrap();
                ing.ingest_all(ups.iter().copied()).unwrap();
                black_box(ing.finish())
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = ingest
}
criterion_main!(benches);
