use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loopeq_core::corpus::potentials;
use loopeq_core::{Execution, SeriesTable, TauState};

fn free_energy_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("free_energy");
    group.sample_size(10);
    for (name, order) in [("spherical", 8), ("two-unitaries", 5), ("quadratic", 5)] {
        let v = potentials().into_iter().find(|(n, _)| *n == name).unwrap().1;
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, format!("{name}/K={order}")), &exec, |b, &exec| {
                b.iter(|| {
                    // a fresh table each time, so nothing is reused from the memo
                    let t = SeriesTable::new(v.clone(), TauState::formal());
                    t.free_energy(order, exec).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn residual_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sd_residual_suite");
    group.sample_size(10);
    for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(label, |b| {
            b.iter(|| loopeq_core::verify::sd_residual_suite(3, 2, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, free_energy_sweep, residual_sweep);
criterion_main!(benches);
