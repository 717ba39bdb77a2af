mod common;

use common::{m, raw_word, small_rational, word};
use loopeq_core::algebra::{cyclic_derivative, derivative};
use loopeq_core::{Letter, Monomial, Polynomial, TensorPolynomial};
use proptest::prelude::*;

/// Cancels adjacent inverse pairs in an arbitrary order picked by `choices`.
fn reduce_in_order(mut w: Vec<Letter>, choices: &[usize]) -> Vec<Letter> {
    let mut c = 0;
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i].cancels(w[i + 1])).collect();
        if spots.is_empty() {
            return w;
        }
        let pick = spots[choices.get(c).copied().unwrap_or(0) % spots.len()];
        c += 1;
        w.drain(pick..pick + 2);
    }
}

fn poly(words: &[(Monomial, num_rational::BigRational)]) -> Polynomial {
    let mut p = Polynomial::zero();
    for (w, c) in words {
        p.add_term(w.clone(), c.clone());
    }
    p
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((word(5), small_rational()), 0..4).prop_map(|t| poly(&t))
}

#[test]
fn examples() {
    let one = Polynomial::one();
    assert_eq!(&Polynomial::from(m("u1")) * &Polynomial::from(m("u1*")), one);
    assert_eq!(m("a1 u1").concat(&m("u1* a2")), m("a1 a2"));
    assert_eq!(m("u1 a1").concat(&m("u1 a1")).len(), 4);
    assert_eq!(m("u1* a1 u1 a2").star(), m("a2 u1* a1 u1"));
    assert_eq!(m("a2 a1").cyclic_class(), m("a1 a2").cyclic_class());
    assert_eq!(m("a1 u1 a1 u1").cyclic_class(), m("u1 a1 u1 a1").cyclic_class());

    let mut expected = TensorPolynomial::simple(m("u1"), m("a1 u1*"));
    expected.add_term(m("u1 a1"), m("u1*"), loopeq_core::tau::ratio(-1, 1));
    assert_eq!(derivative(1, &m("u1 a1 u1*").into()), expected);
    assert!(derivative(1, &m("a1 a2").into()).is_zero());
    assert!(derivative(2, &m("u1").into()).is_zero());

    let d = cyclic_derivative(1, &m("u1* a1 u1 a2").into());
    assert_eq!(d, &Polynomial::from(m("a2 u1* a1 u1")) - &Polynomial::from(m("u1* a1 u1 a2")));
    assert!(cyclic_derivative(1, &m("a1").into()).is_zero());
    assert_eq!(cyclic_derivative(1, &m("u1").into()), m("u1").into());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_is_confluent(w in raw_word(12), choices in prop::collection::vec(0usize..8, 12)) {
        let by_stack = Monomial::from_letters(w.clone());
        let by_choice = reduce_in_order(w, &choices);
        prop_assert_eq!(by_stack.letters(), by_choice.as_slice());
    }

    #[test]
    fn product_is_associative(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn star_is_an_anti_involution(p in small_poly(), q in small_poly()) {
        prop_assert_eq!(p.star().star(), p.clone());
        prop_assert_eq!((&p * &q).star(), &q.star() * &p.star());
    }

    #[test]
    fn leibniz_rule(p in word(5), q in word(5), i in 1u16..=2) {
        let pq = Polynomial::from(p.concat(&q));
        let left = derivative(i, &pq);
        let one = Monomial::identity();
        let right = derivative(i, &p.clone().into())
            .times(&TensorPolynomial::simple(one.clone(), q.clone()))
            .add(&TensorPolynomial::simple(p.clone(), one).times(&derivative(i, &q.into())));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn cyclic_derivative_is_flipped_derivative(p in small_poly(), i in 1u16..=2) {
        prop_assert_eq!(cyclic_derivative(i, &p), derivative(i, &p).flip_multiply());
    }

    #[test]
    fn cyclic_class_is_rotation_invariant(w in word(10), by in 0usize..10) {
        let class = w.cyclic_class();
        let rotated = w.rotate_left(by);
        prop_assert_eq!(Monomial::from_letters(rotated.letters().iter().copied()).cyclic_class(), class.clone());
        prop_assert!(class.word().len() <= w.len());
    }

    #[test]
    fn parse_display_round_trip(w in word(10)) {
        prop_assert_eq!(w.to_string().parse::<Monomial>().unwrap(), w);
    }
}
