use loopeq_core::hciz::{hciz_potential, hciz_word};
use loopeq_core::{Execution, Monomial, Potential};
use loopeq_mc::gibbs::NumericPotential;
use loopeq_mc::{
    empirical_moment, gibbs_moment, orthogonal_universality, solver_prediction, DiscreteMeasure, GibbsOptions, Group,
    MatrixEnsembleConfig, McError, Universality,
};

fn m(s: &str) -> Monomial {
    s.parse().unwrap()
}

fn cfg(n: usize, group: Group) -> MatrixEnsembleConfig {
    MatrixEnsembleConfig::new(n, group, 1, 99, 400)
        .unwrap()
        .with_measure(1, DiscreteMeasure::bernoulli())
        .with_measure(2, DiscreteMeasure::bernoulli())
}

fn quick() -> GibbsOptions {
    GibbsOptions {
        chains: 2,
        burn_in: 300,
        steps: 3000,
        thin: 5,
        ..Default::default()
    }
}

#[test]
fn zero_potential_reduces_to_haar() {
    let c = cfg(8, Group::Unitary);
    let zero = NumericPotential::bind(&hciz_potential(), &[0.0]).unwrap();
    let w = m("u1* a1 u1 a2 u1* a1 u1 a2");
    let g = gibbs_moment(&c, &zero, &w, &quick(), Execution::Parallel).unwrap();
    let h = empirical_moment(&c, &w, Execution::Parallel).unwrap();
    let combined = (g.estimate.std_error.powi(2) + h.std_error.powi(2)).sqrt();
    assert!((g.estimate.value - h.value).abs() <= 3.0 * combined + 0.05, "{g:?} vs {h:?}");
    assert_eq!(g.acceptance, 1.0);
}

#[test]
fn hciz_chain_tracks_the_solver() {
    let c = cfg(16, Group::Unitary);
    let v = NumericPotential::bind(&hciz_potential(), &[0.1]).unwrap();
    let g = gibbs_moment(&c, &v, &hciz_word(), &quick(), Execution::Parallel).unwrap();
    let prediction = solver_prediction(&c, &hciz_potential(), &[0.1], &hciz_word(), 4).unwrap();
    assert!((prediction - 0.1).abs() < 1e-3, "{prediction}");
    assert!(g.estimate.agrees_with(prediction, 3.0, 10.0 / 256.0), "{g:?}");
    assert!((0.1..=0.9).contains(&g.acceptance));
    assert!(g.max_drift < 1e-10);
}

#[test]
fn word_and_adjoint_agree() {
    let c = cfg(8, Group::Unitary);
    let v = NumericPotential::bind(&hciz_potential(), &[0.2]).unwrap();
    let w = m("u1 a1 u1* a1 a2");
    let a = gibbs_moment(&c, &v, &w, &quick(), Execution::Sequential).unwrap();
    let b = gibbs_moment(&c, &v, &w.star(), &quick(), Execution::Sequential).unwrap();
    let combined = (a.estimate.std_error.powi(2) + b.estimate.std_error.powi(2)).sqrt();
    assert!((a.estimate.value - b.estimate.value).abs() <= 3.0 * combined + 1e-9);
}

#[test]
fn chains_are_reproducible() {
    let c = cfg(6, Group::Orthogonal);
    let v = NumericPotential::bind(&hciz_potential(), &[0.1]).unwrap();
    let opts = GibbsOptions { chains: 3, burn_in: 100, steps: 400, thin: 4, ..quick() };
    let a = gibbs_moment(&c, &v, &hciz_word(), &opts, Execution::Sequential).unwrap();
    let b = gibbs_moment(&c, &v, &hciz_word(), &opts, Execution::Workers(2)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn small_universality_run() {
    let c = cfg(12, Group::Unitary);
    let setup = Universality {
        potential: &hciz_potential(),
        t: &[0.1],
        word: &hciz_word(),
        order: 4,
        allowance_constant: 20.0,
    };
    let r = orthogonal_universality(&c, &setup, &quick(), Execution::Parallel).unwrap();
    assert!(r.all_agree(), "{r:?}");
    let zero = Universality { t: &[0.0], ..setup };
    let r = orthogonal_universality(&c, &zero, &quick(), Execution::Parallel).unwrap();
    assert_eq!(r.prediction, 0.0);
    assert!(r.all_agree(), "{r:?}");
}

#[test]
fn bad_configurations() {
    let c = cfg(4, Group::Unitary);
    assert!(matches!(
        NumericPotential::bind(&hciz_potential(), &[0.1, 0.2]),
        Err(McError::Config(_))
    ));
    let v = NumericPotential::bind(&hciz_potential(), &[0.1]).unwrap();
    let bad = GibbsOptions { thin: 0, ..quick() };
    assert!(gibbs_moment(&c, &v, &hciz_word(), &bad, Execution::Sequential).is_err());
    // a huge coupling freezes the chain and the frozen rate is reported
    let stiff = NumericPotential::bind(&Potential::new([("t", m("u1 a1 u1* a2"))]).unwrap(), &[1e6]).unwrap();
    let opts = GibbsOptions { initial_step: 4.0, burn_in: 0, steps: 200, thin: 2, chains: 1, ..quick() };
    assert!(matches!(
        gibbs_moment(&c, &stiff, &hciz_word(), &opts, Execution::Sequential),
        Err(McError::AcceptanceRateOutOfRange { .. })
    ));
}
