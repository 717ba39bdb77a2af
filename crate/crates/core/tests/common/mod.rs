#![allow(dead_code)]

use loopeq_core::corpus::alphabet;
use loopeq_core::tau::ratio;
use loopeq_core::{Letter, Monomial, MomentTable};
use num_rational::BigRational;
use proptest::prelude::*;

/// Raw letter sequences over `u1, u1*, u2, u2*, a1, a2`, not reduced.
pub fn raw_word(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    let letters = alphabet(2, 2);
    prop::collection::vec(prop::sample::select(letters), 0..=max_len)
}

pub fn word(max_len: usize) -> impl Strategy<Value = Monomial> {
    raw_word(max_len).prop_map(Monomial::from_letters)
}

pub fn det_word(max_len: usize, families: u16) -> impl Strategy<Value = Monomial> {
    let letters: Vec<Letter> = (1..=families).map(Letter::det).collect();
    prop::collection::vec(prop::sample::select(letters), 0..=max_len).prop_map(Monomial::from_letters)
}

pub fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

pub fn moment_table(families: u16, depth: usize) -> impl Strategy<Value = MomentTable> {
    prop::collection::vec(prop::collection::vec(small_rational(), depth), families as usize).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .fold(MomentTable::new(), |t, (i, m)| t.with_marginal(i as u16 + 1, m))
    })
}

pub fn m(s: &str) -> Monomial {
    s.parse().unwrap()
}
