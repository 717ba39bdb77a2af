//! Reference potentials and test words used by the verification suites.

use crate::algebra::{Letter, Monomial};
use crate::potential::Potential;
use crate::tau::{ratio, MomentTable};

fn pot(terms: &[(&str, &str)]) -> Potential {
    Potential::new(terms.iter().map(|&(l, w)| (l, w.parse::<Monomial>().expect("corpus word"))))
        .expect("corpus potentials are self-adjoint")
}

/// Self-adjoint potentials with at most two parameters and degree at most 4.
pub fn potentials() -> Vec<(&'static str, Potential)> {
    vec![
        ("spherical", pot(&[("z", "u1* a1 u1 a2")])),
        ("spherical-pair", pot(&[("t", "u1* a1 u1 a2"), ("t", "a2 u1* a1 u1")])),
        ("linear", pot(&[("s", "u1 a1"), ("s", "a1 u1*")])),
        ("quadratic", pot(&[("s", "u1 u1"), ("s", "u1* u1*"), ("t", "u1 a1 u1 a1"), ("t", "a1 u1* a1 u1*")])),
        ("commutator", pot(&[("s", "u1* a1 u1 a2"), ("t", "u1 u2 u1* u2*"), ("t", "u2 u1 u2* u1*")])),
        ("two-unitaries", pot(&[("s", "u1* a1 u1 a2"), ("t", "u2* a2 u2 a1")])),
    ]
}

/// Every reduced word of length at most `max_len` over the given letters.
pub fn words(alphabet: &[Letter], max_len: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::identity()];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in alphabet {
                if w.last().is_some_and(|&x| x.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| Monomial::from_letters(v.iter().copied())));
        layer = next;
    }
    out
}

/// Letters `u_i, u_i*` for `i <= unitaries` and `a_i` for `i <= dets`.
pub fn alphabet(unitaries: u16, dets: u16) -> Vec<Letter> {
    let mut v = Vec::new();
    for i in 1..=unitaries {
        v.push(Letter::u(i));
        v.push(Letter::u_star(i));
    }
    for i in 1..=dets {
        v.push(Letter::det(i));
    }
    v
}

/// Moments bounded by one for two families, deep enough for the corpus.
pub fn bounded_moments(depth: usize) -> MomentTable {
    let a: Vec<_> = (1..=depth).map(|k| if k % 2 == 0 { ratio(1, k as i64) } else { ratio(1, 3) }).collect();
    let b: Vec<_> = (1..=depth).map(|k| if k % 2 == 0 { ratio(1, 2) } else { ratio(-1, (k + 1) as i64) }).collect();
    MomentTable::new().with_marginal(1, a).with_marginal(2, b)
}
