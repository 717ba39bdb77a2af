use loopeq_core::corpus::{alphabet, potentials, words};
use loopeq_core::{Execution, SeriesTable, TauState};

#[test]
fn residual_vanishes_on_corpus() {
    for (name, v) in potentials() {
        let unitaries = v.unitary_families().max(1);
        let table = SeriesTable::new(v.clone(), TauState::formal());
        let tests: Vec<_> = words(&alphabet(unitaries, 2), 3)
            .into_iter()
            .flat_map(|p| (1..=unitaries).map(move |i| (i, p.clone())))
            .collect();
        let results = Execution::Parallel.map(&tests, |(i, p)| table.sd_residual(*i, p, 5));
        for ((i, p), r) in tests.iter().zip(results) {
            for (k, r) in r.unwrap() {
                assert!(r.is_zero(), "{name}: i={i} P={p} k={k} residual {r}");
            }
        }
    }
}

#[test]
fn residual_of_identity_is_zero() {
    for (_, v) in potentials() {
        let table = SeriesTable::new(v, TauState::formal());
        for (_, r) in table.sd_residual(1, &loopeq_core::Monomial::identity(), 4).unwrap() {
            assert!(r.is_zero());
        }
    }
}

#[test]
fn residual_at_zero_potential() {
    let table = SeriesTable::new(loopeq_core::Potential::zero(), TauState::formal());
    let p = "u1 a1 u1*".parse().unwrap();
    for (_, r) in table.sd_residual(1, &p, 3).unwrap() {
        assert!(r.is_zero());
    }
}
