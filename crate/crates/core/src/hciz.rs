//! The spherical integral `∫ exp(z N Tr(U* A U B)) dU` at large `N`:
//! `F(z) = Σ F_n z^n` with `F_n = f_n / n!` for the single-term potential
//! `z · u1* a1 u1 a2` (its adjoint is a rotation of itself).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{Letter, Monomial};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::multi_index::{factorial, MultiIndex};
use crate::potential::Potential;
use crate::solver::SeriesTable;
use crate::tau::{MomentTable, TauState};
use crate::weight::{GenMonomial, Generator, Weight};

pub fn hciz_word() -> Monomial {
    Monomial::from_letters([Letter::u_star(1), Letter::det(1), Letter::u(1), Letter::det(2)])
}

pub fn hciz_potential() -> Potential {
    Potential::new([("z", hciz_word())]).expect("the word is self-adjoint up to rotation")
}

/// `F_1, .., F_K` as polynomials in `tau(A^j) = tau[a1^j]`, `tau(B^j) = tau[a2^j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HciZSeries {
    /// `orders[n - 1] = F_n`.
    pub orders: Vec<Weight>,
    pub centered: bool,
}

impl HciZSeries {
    pub fn order(&self, n: usize) -> Option<&Weight> {
        n.checked_sub(1).and_then(|i| self.orders.get(i))
    }

    pub fn max_order(&self) -> usize {
        self.orders.len()
    }

    /// `F_n` with generators renamed `tauA{j}` / `tauB{j}`, sorted.
    pub fn named_terms(&self, n: usize) -> Vec<(String, BigRational)> {
        self.order(n)
            .map(|w| {
                let mut v: Vec<_> = w
                    .terms()
                    .iter()
                    .map(|(m, c)| (generator_monomial_name(m), c.clone()))
                    .collect();
                v.sort();
                v
            })
            .unwrap_or_default()
    }

    /// Evaluates every order under a numeric trace.
    pub fn evaluate(&self, tau: &TauState) -> Result<Vec<BigRational>> {
        self.orders
            .iter()
            .map(|w| {
                tau.evaluate(w)?
                    .as_constant()
                    .ok_or(Error::FormalModeUnsupported)
            })
            .collect()
    }
}

/// Name of a generator: `tauA3` for `tau(a1^3)`, `tauB2` for `tau(a2^2)`,
/// otherwise its class in brackets.
pub fn generator_name(g: &Generator) -> String {
    let letters = g.letters();
    let pure = |i: u16| {
        !letters.is_empty() && letters.iter().all(|l| *l == Letter::det(i))
    };
    if pure(1) {
        format!("tauA{}", letters.len())
    } else if pure(2) {
        format!("tauB{}", letters.len())
    } else {
        g.to_string()
    }
}

pub fn generator_monomial_name(m: &GenMonomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    m.factors()
        .iter()
        .map(|(g, e)| {
            if *e == 1 {
                generator_name(g)
            } else {
                format!("{}^{e}", generator_name(g))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Formal series through order `order`. With `centered`, `tau(A) = tau(B) = 0`.
pub fn hciz_series(order: usize, centered: bool) -> Result<HciZSeries> {
    let tau = if centered {
        TauState::formal_centered(&[1, 2])
    } else {
        TauState::formal()
    };
    hciz_series_with(order, tau, Execution::Sequential)
}

/// Series under an arbitrary trace; numeric traces give constant weights.
pub fn hciz_series_with(order: usize, tau: TauState, exec: Execution) -> Result<HciZSeries> {
    if order == 0 {
        return Err(Error::Config("hciz order must be at least 1".into()));
    }
    let centered = match &tau {
        TauState::Formal { vanishing } => !vanishing.is_empty(),
        _ => false,
    };
    let table = SeriesTable::new(hciz_potential(), tau);
    if order > table.caps().order + 1 {
        return Err(Error::OrderCapExceeded {
            requested: order,
            cap: table.caps().order + 1,
        });
    }
    let f = table.free_energy(order, exec)?;
    let orders = (1..=order)
        .map(|n| {
            let fk = &f[&MultiIndex::new(vec![n as u32])];
            fk.scale(&BigRational::from_integer(factorial(n as u32)).recip())
        })
        .collect();
    Ok(HciZSeries { orders, centered })
}

/// `n · c ∈ Z` for every coefficient `c` of `F_n`.
pub fn one_over_n_property(series: &HciZSeries, n: usize) -> bool {
    let scale = BigRational::from_integer(BigInt::from(n));
    series
        .order(n)
        .is_some_and(|w| w.terms().iter().all(|(_, c)| (c * &scale).is_integer()))
}

/// Checks `F^{a+A, b+B} = F^{A,B} + z(b tau(A) + a tau(B) + ab)` through
/// order `order`, evaluating the formal series under `base` and under the
/// binomially shifted moment tables.
pub fn shift_identity_check(base: &MomentTable, a: &BigRational, b: &BigRational, order: usize) -> Result<bool> {
    let series = hciz_series(order, false)?;
    let shifted = base.shifted(1, a)?.shifted(2, b)?;
    let lhs = series.evaluate(&TauState::joint(shifted))?;
    let mut rhs = series.evaluate(&TauState::joint(base.clone()))?;
    let ta = base.moment(1, 1)?;
    let tb = base.moment(2, 1)?;
    rhs[0] += b * ta + a * tb + a * b;
    Ok(lhs == rhs)
}

/// Swaps the roles of `a1` and `a2` in every generator.
pub fn swap_families(w: &Weight) -> Weight {
    w.substitute(|g| {
        let swapped = Monomial::from_letters(g.letters().iter().map(|l| match l.index {
            1 => Letter::det(2),
            2 => Letter::det(1),
            _ => *l,
        }));
        Some(Weight::generator(Generator::new(&swapped.cyclic_class())))
    })
}

/// `F_n` as a map from generator-monomial name to coefficient.
pub fn named_map(series: &HciZSeries, n: usize) -> BTreeMap<String, BigRational> {
    series
        .named_terms(n)
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::ratio;

    #[test]
    fn low_orders() {
        let s = hciz_series(3, true).unwrap();
        assert!(s.order(1).unwrap().is_zero());
        assert_eq!(named_map(&s, 2), [("tauA2 tauB2".to_string(), ratio(1, 2))].into());
        assert_eq!(named_map(&s, 3), [("tauA3 tauB3".to_string(), ratio(1, 3))].into());
        assert!(one_over_n_property(&s, 2) && one_over_n_property(&s, 3));
    }

    #[test]
    fn uncentered_first_order() {
        let s = hciz_series(1, false).unwrap();
        assert_eq!(named_map(&s, 1), [("tauA1 tauB1".to_string(), ratio(1, 1))].into());
    }

    #[test]
    fn trivial_shift() {
        let base = MomentTable::new()
            .with_marginal(1, vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)])
            .with_marginal(2, vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)]);
        assert!(shift_identity_check(&base, &ratio(0, 1), &ratio(0, 1), 2).unwrap());
    }
}
