mod common;

use common::{det_word, m, small_rational};
use loopeq_core::corpus::bounded_moments;
use loopeq_core::cumulants::{
    cumulant_functional, cumulants_from_moments, cumulants_via_moebius, moment_functional, one_star_weight,
};
use loopeq_core::tau::ratio;
use loopeq_core::verify::{det_classes, free_cumulant_suite, joint_table, kreweras_suite};
use loopeq_core::{noncrossing_partitions, Error, MomentTable, NCPartition, TauState, Weight};
use proptest::prelude::*;

fn c(n: i64, d: i64) -> Weight {
    Weight::constant(ratio(n, d))
}

#[test]
fn kreweras_examples() {
    assert_eq!(NCPartition::full(3).kreweras().unwrap(), NCPartition::discrete(3));
    assert_eq!(NCPartition::discrete(2).kreweras().unwrap(), NCPartition::full(2));
    let pi = NCPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
    assert_eq!(pi.kreweras().unwrap(), NCPartition::new(3, vec![vec![0], vec![1, 2]]).unwrap());
    let crossing = NCPartition::normalized(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
    assert!(matches!(crossing.kreweras(), Err(Error::CrossingPartition(_))));
    assert!(NCPartition::new(4, vec![vec![0, 2], vec![1, 3]]).is_err());
}

#[test]
fn kreweras_block_counts() {
    let r = kreweras_suite(7).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.cases, [1, 2, 5, 14, 42, 132, 429].iter().sum::<usize>());
}

#[test]
fn kreweras_twice_is_a_rotation() {
    for n in 1..=7 {
        for pi in noncrossing_partitions(n) {
            let twice = pi.kreweras().unwrap().kreweras().unwrap();
            assert!((0..n).any(|r| pi.rotate(r) == twice), "{pi} -> {twice}");
        }
    }
}

#[test]
fn low_order_cumulants() {
    let table = MomentTable::new().with_marginal(1, vec![ratio(1, 2), ratio(3, 4), ratio(1, 5)]);
    let tau = TauState::free(table);
    assert_eq!(cumulants_from_moments(&tau, &m("a1")).unwrap(), c(1, 2));
    assert_eq!(cumulants_from_moments(&tau, &m("a1 a1")).unwrap(), &c(3, 4) - &c(1, 4));
    assert_eq!(cumulants_via_moebius(&tau, &m("a1 a1")).unwrap(), c(1, 2));
    let centered = TauState::free(MomentTable::new().with_marginal(1, vec![ratio(0, 1), ratio(1, 1), ratio(7, 3)]));
    for f in [cumulants_from_moments, cumulants_via_moebius] {
        assert_eq!(f(&centered, &m("a1 a1 a1")).unwrap(), c(7, 3));
    }
}

#[test]
fn one_star_node_weights() {
    let tau = TauState::formal();
    let face = tau.tau(&m("a1 a2")).unwrap();
    assert_eq!(one_star_weight(&[1], &[m("a1 a2")], &tau).unwrap(), face);
    assert_eq!(one_star_weight(&[2], &[], &tau).unwrap(), c(-1, 1));
    assert_eq!(one_star_weight(&[3], &[], &tau).unwrap(), c(2, 1));
    assert_eq!(one_star_weight(&[4, 2], &[], &tau).unwrap(), c(5, 1));
}

#[test]
fn mixed_free_cumulants_vanish() {
    let r = free_cumulant_suite(&bounded_moments(6), 6).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
}

#[test]
fn formal_routes_agree() {
    let tau = TauState::formal();
    for w in det_classes(6) {
        assert_eq!(cumulants_via_moebius(&tau, &w).unwrap(), cumulants_from_moments(&tau, &w).unwrap(), "{w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn moebius_matches_recursion(values in prop::collection::vec(small_rational(), 64), w in det_word(6, 2)) {
        prop_assume!(!w.is_empty());
        let mut it = values.into_iter().cycle();
        let tau = TauState::joint(joint_table(6, |_| it.next().unwrap()));
        prop_assert_eq!(cumulants_via_moebius(&tau, &w).unwrap(), cumulants_from_moments(&tau, &w).unwrap());
    }

    #[test]
    fn cumulants_resum_to_moments(values in prop::collection::vec(small_rational(), 64), w in det_word(6, 2)) {
        prop_assume!(!w.is_empty());
        let mut it = values.into_iter().cycle();
        let tau = TauState::joint(joint_table(6, |_| it.next().unwrap()));
        let n = w.len();
        let total = noncrossing_partitions(n).iter().fold(Weight::zero(), |acc, pi| {
            &acc + &cumulant_functional(&tau, &w, pi).unwrap()
        });
        prop_assert_eq!(total, tau.tau(&w).unwrap());
        let full = moment_functional(&tau, &w, &NCPartition::full(n)).unwrap();
        prop_assert_eq!(full, tau.tau(&w).unwrap());
    }
}
