use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loopeq_core::{Execution, Monomial};
use loopeq_mc::estimate::empirical_moments;
use loopeq_mc::{DiscreteMeasure, Group, MatrixEnsembleConfig};

fn haar_sampling(c: &mut Criterion) {
    let q: Monomial = "u1* a1 u1 a2".parse().unwrap();
    let words = vec![q.clone(), q.concat(&q), q.concat(&q).concat(&q)];
    let mut group = c.benchmark_group("haar_moments");
    group.sample_size(10);
    for n in [16, 64] {
        let cfg = MatrixEnsembleConfig::new(n, Group::Unitary, 1, 1, 200)
            .unwrap()
            .with_measure(1, DiscreteMeasure::bernoulli())
            .with_measure(2, DiscreteMeasure::bernoulli());
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, format!("N={n}")), &exec, |b, &exec| {
                b.iter(|| empirical_moments(&cfg, &words, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, haar_sampling);
criterion_main!(benches);
