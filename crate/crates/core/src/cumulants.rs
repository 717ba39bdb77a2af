//! Free cumulants of deterministic words: the moment-cumulant recursion
//! over `NC(n)` and the non-crossing Moebius formula, kept independent so
//! that each checks the other.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{Letter, Monomial};
use crate::error::{Error, Result};
use crate::nc::{catalan, noncrossing_partitions, NCPartition};
use crate::tau::TauState;
use crate::weight::Weight;

fn det_letters(word: &Monomial) -> Result<&[Letter]> {
    if !word.is_det() {
        return Err(Error::NotDetWord(word.to_string()));
    }
    Ok(word.letters())
}

/// `tau` of the sub-word picked by `positions`.
fn sub_moment(tau: &TauState, letters: &[Letter], positions: &[usize]) -> Result<Weight> {
    tau.tau(&Monomial::from_letters(positions.iter().map(|&p| letters[p])))
}

/// `tau_π = ∏_{B ∈ π} tau(word restricted to B)`.
pub fn moment_functional(tau: &TauState, word: &Monomial, pi: &NCPartition) -> Result<Weight> {
    let letters = det_letters(word)?;
    let mut acc = Weight::one();
    for block in pi.blocks() {
        acc = &acc * &sub_moment(tau, letters, block)?;
    }
    Ok(acc)
}

/// `K_n(X_1, .., X_n)` with `X_p` the `p`-th letter of `word`, from
/// `tau(X_1 .. X_n) = Σ_{π ∈ NC(n)} K_π`. Sub-cumulants are memoized by the
/// set of positions they act on.
pub fn cumulants_from_moments(tau: &TauState, word: &Monomial) -> Result<Weight> {
    let letters = det_letters(word)?;
    if letters.is_empty() {
        return Err(Error::Config("cumulants need a non-empty word".into()));
    }
    let mut memo = HashMap::new();
    let all: Vec<usize> = (0..letters.len()).collect();
    cumulant_of(tau, letters, &all, &mut memo)
}

fn cumulant_of(
    tau: &TauState,
    letters: &[Letter],
    positions: &[usize],
    memo: &mut HashMap<Vec<usize>, Weight>,
) -> Result<Weight> {
    if let Some(v) = memo.get(positions) {
        return Ok(v.clone());
    }
    let n = positions.len();
    let mut value = sub_moment(tau, letters, positions)?;
    for pi in noncrossing_partitions(n) {
        if pi.block_count() == 1 {
            continue;
        }
        let mut term = Weight::one();
        for block in pi.blocks() {
            let sub: Vec<usize> = block.iter().map(|&b| positions[b]).collect();
            term = &term * &cumulant_of(tau, letters, &sub, memo)?;
            if term.is_zero() {
                break;
            }
        }
        value -= &term;
    }
    memo.insert(positions.to_vec(), value.clone());
    Ok(value)
}

/// `K_π`, multiplicative along the blocks of `π`.
pub fn cumulant_functional(tau: &TauState, word: &Monomial, pi: &NCPartition) -> Result<Weight> {
    let letters = det_letters(word)?;
    let mut memo = HashMap::new();
    let mut acc = Weight::one();
    for block in pi.blocks() {
        acc = &acc * &cumulant_of(tau, letters, block, &mut memo)?;
    }
    Ok(acc)
}

/// Weight of a one-star map: `∏_nodes (-1)^{d-1} C_{d-1} · ∏_faces tau(face)`.
pub fn one_star_weight(node_degrees: &[usize], faces: &[Monomial], tau: &TauState) -> Result<Weight> {
    let mut node = BigInt::from(1);
    for &d in node_degrees {
        if d == 0 {
            return Err(Error::Config("node degrees must be positive".into()));
        }
        let c = catalan(d - 1);
        node *= if d % 2 == 1 { c } else { -c };
    }
    let mut acc = Weight::constant(BigRational::from_integer(node));
    for face in faces {
        acc = &acc * &tau.tau(face)?;
    }
    Ok(acc)
}

/// `K_n = Σ_{π ∈ NC(n)} tau_π (-1)^{n - |π^c|} ∏_{B ∈ π^c} C_{|B|-1}`: each
/// term is the one-star map whose faces are the blocks of `π` and whose
/// nodes are the blocks of the Kreweras complement.
pub fn cumulants_via_moebius(tau: &TauState, word: &Monomial) -> Result<Weight> {
    let letters = det_letters(word)?;
    let n = letters.len();
    if n == 0 {
        return Err(Error::Config("cumulants need a non-empty word".into()));
    }
    let mut acc = Weight::zero();
    for pi in noncrossing_partitions(n) {
        let complement = pi.kreweras()?;
        let degrees: Vec<usize> = complement.blocks().iter().map(Vec::len).collect();
        let faces: Vec<Monomial> = pi
            .blocks()
            .iter()
            .map(|b| Monomial::from_letters(b.iter().map(|&p| letters[p])))
            .collect();
        acc += &one_star_weight(&degrees, &faces, tau)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::{ratio, MomentTable};
    use crate::weight::Generator;

    fn w(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn gen(s: &str) -> Weight {
        Weight::generator(Generator::new(&w(s).cyclic_class()))
    }

    #[test]
    fn low_order_cumulants() {
        let tau = TauState::formal();
        assert_eq!(cumulants_from_moments(&tau, &w("a1")).unwrap(), gen("a1"));
        let k2 = &gen("a1 a1") - &(&gen("a1") * &gen("a1"));
        assert_eq!(cumulants_from_moments(&tau, &w("a1 a1")).unwrap(), k2);
        assert_eq!(cumulants_via_moebius(&tau, &w("a1 a1")).unwrap(), k2);
        assert_eq!(cumulants_via_moebius(&tau, &w("a1")).unwrap(), gen("a1"));
    }

    #[test]
    fn centered_third_cumulant_is_third_moment() {
        let c = ratio(3, 7);
        let table = MomentTable::new().with_marginal(1, vec![ratio(0, 1), ratio(1, 1), c.clone()]);
        let tau = TauState::free(table);
        let expect = Weight::constant(c);
        assert_eq!(cumulants_from_moments(&tau, &w("a1 a1 a1")).unwrap(), expect);
        assert_eq!(cumulants_via_moebius(&tau, &w("a1 a1 a1")).unwrap(), expect);
    }

    #[test]
    fn node_weights() {
        let tau = TauState::formal();
        assert_eq!(one_star_weight(&[1], &[w("a1")], &tau).unwrap(), gen("a1"));
        assert_eq!(one_star_weight(&[2], &[], &tau).unwrap(), Weight::integer(-1));
        assert_eq!(one_star_weight(&[3], &[], &tau).unwrap(), Weight::integer(2));
    }

    #[test]
    fn mixed_free_cumulant_vanishes() {
        let m = vec![ratio(1, 2), ratio(1, 3), ratio(1, 5), ratio(1, 7)];
        let tau = TauState::free(MomentTable::new().with_marginal(1, m.clone()).with_marginal(2, m));
        assert!(cumulants_from_moments(&tau, &w("a1 a2")).unwrap().is_zero());
        assert!(cumulants_from_moments(&tau, &w("a1 a2 a1 a1")).unwrap().is_zero());
        assert!(!cumulants_from_moments(&tau, &w("a1 a1 a1")).unwrap().is_zero());
    }
}
