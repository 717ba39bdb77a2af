//! Formal solution of the Schwinger-Dyson equation.
//!
//! `mu(k, P)` is the coefficient of `t^k / k!` in the tracial power state
//! `mu_t(P)` solving
//!
//! ```text
//! mu_t ⊗ mu_t(∂_i P) + mu_t(D_i V_t · P) = 0,   V_t = Σ_j t_j Q_j.
//! ```
//!
//! Words are rotated so that the last `U` sits at the end (or, without any
//! `U`, the first `U*` at the front). Expanding the equation at that test
//! word gives a recursion which strictly lowers `(|k|, #U, #U*)` in
//! lexicographic order, so it terminates.

use std::collections::BTreeMap;
use std::sync::Mutex;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{cyclic_derivative, cyclic_splits, derivative, CyclicClass, Letter, LetterKind, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::multi_index::MultiIndex;
use crate::nc::catalan;
use crate::potential::Potential;
use crate::tau::TauState;
use crate::weight::Weight;

/// Hard limits on the recursion. Exceeding one is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `|k|`.
    pub order: usize,
    /// Longest word the recursion may visit.
    pub degree: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { order: 16, degree: 128 }
    }
}

/// `(|k|, #U, #U*)` of a recursion node.
pub type Measure = (usize, usize, usize);

pub fn measure(k: &MultiIndex, word: &Monomial) -> Measure {
    let us = word.letters().iter().filter(|l| l.kind == LetterKind::U).count();
    let stars = word.letters().iter().filter(|l| l.kind == LetterKind::UStar).count();
    (k.total(), us, stars)
}

/// Normal form used by the recursion.
pub(crate) enum Rooted {
    /// Deterministic word.
    Det,
    /// `q U_i` with the root `U_i` last.
    EndsWithU { word: Monomial, index: u16 },
    /// `U_i* q` with no `U` in `q`.
    StartsWithUStar { word: Monomial, index: u16 },
}

/// Rotates a word to its normal form. `last_u` picks the last `U` as root,
/// otherwise the first one is used; without `U`, `last_u` picks the first
/// `U*` and the alternative picks the last.
pub(crate) fn root(word: &Monomial, last_u: bool) -> Rooted {
    let letters = word.letters();
    let us: Vec<usize> = (0..letters.len()).filter(|&p| letters[p].kind == LetterKind::U).collect();
    if let Some(&p) = if last_u { us.last() } else { us.first() } {
        return Rooted::EndsWithU {
            word: word.rotate_left(p + 1),
            index: letters[p].index,
        };
    }
    let stars: Vec<usize> = (0..letters.len())
        .filter(|&p| letters[p].kind == LetterKind::UStar)
        .collect();
    match if last_u { stars.first() } else { stars.last() } {
        Some(&p) => Rooted::StartsWithUStar {
            word: word.rotate_left(p),
            index: letters[p].index,
        },
        None => Rooted::Det,
    }
}

/// Memoized coefficients `mu^k` for one potential and one trace.
pub struct SeriesTable {
    potential: Potential,
    tau: TauState,
    caps: Caps,
    memo: DashMap<(MultiIndex, CyclicClass), Weight>,
    trace: Option<Mutex<Vec<(Measure, Measure)>>>,
}

impl SeriesTable {
    pub fn new(potential: Potential, tau: TauState) -> Self {
        SeriesTable {
            potential,
            tau,
            caps: Caps::default(),
            memo: DashMap::new(),
            trace: None,
        }
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    /// Records `(parent, child)` measures of every recursive call.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Mutex::new(Vec::new()));
        self
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn tau(&self) -> &TauState {
        &self.tau
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn trace(&self) -> Vec<(Measure, Measure)> {
        self.trace
            .as_ref()
            .map(|t| t.lock().unwrap_or_else(|e| e.into_inner()).clone())
            .unwrap_or_default()
    }

    fn check_index(&self, k: &MultiIndex) -> Result<()> {
        if k.arity() != self.potential.arity() {
            return Err(Error::ArityMismatch {
                expected: self.potential.arity(),
                got: k.arity(),
            });
        }
        if k.total() > self.caps.order {
            return Err(Error::OrderCapExceeded {
                requested: k.total(),
                cap: self.caps.order,
            });
        }
        Ok(())
    }

    /// `mu^k(P)`.
    pub fn mu(&self, k: &MultiIndex, p: &Monomial) -> Result<Weight> {
        self.check_index(k)?;
        self.mu_class(k, &p.cyclic_class())
    }

    /// `mu^k` extended linearly.
    pub fn mu_poly(&self, k: &MultiIndex, p: &Polynomial) -> Result<Weight> {
        let mut acc = Weight::zero();
        for (w, c) in p.terms() {
            acc += &self.mu(k, w)?.scale(c);
        }
        Ok(acc)
    }

    fn child(&self, parent: Measure, k: &MultiIndex, word: &Monomial) -> Result<Weight> {
        if let Some(t) = &self.trace {
            t.lock()
                .unwrap_or_else(|e| e.into_inner())
                .push((parent, measure(k, &word.cyclic_class().into_word())));
        }
        self.mu_class(k, &word.cyclic_class())
    }

    fn mu_class(&self, k: &MultiIndex, class: &CyclicClass) -> Result<Weight> {
        let word = class.word();
        if word.len() > self.caps.degree {
            return Err(Error::DegreeCapExceeded {
                length: word.len(),
                cap: self.caps.degree,
            });
        }
        let key = (k.clone(), class.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let value = self.compute(k, word)?;
        self.memo.insert(key, value.clone());
        Ok(value)
    }

    fn compute(&self, k: &MultiIndex, word: &Monomial) -> Result<Weight> {
        let here = measure(k, word);
        match root(word, true) {
            Rooted::Det => {
                if k.is_zero() {
                    self.tau.tau(word)
                } else {
                    Ok(Weight::zero())
                }
            }
            Rooted::EndsWithU { word, index } => self.ends_with_u(here, k, &word, index),
            Rooted::StartsWithUStar { word, index } => self.starts_with_ustar(here, k, &word, index),
        }
    }

    /// `Σ_{k' <= k} binom(k, k') mu^{k'}(a) mu^{k-k'}(b)`.
    fn split(&self, here: Measure, k: &MultiIndex, a: &Monomial, b: &Monomial) -> Result<Weight> {
        let mut acc = Weight::zero();
        for lower in k.below() {
            let left = self.child(here, &lower, a)?;
            if left.is_zero() {
                continue;
            }
            let right = self.child(here, &k.sub(&lower), b)?;
            if right.is_zero() {
                continue;
            }
            acc += &(&left * &right).scale_int(&k.binomial(&lower));
        }
        Ok(acc)
    }

    /// `Σ_j k_j mu^{k-1_j}(D_i Q_j · P)`.
    fn shift(&self, here: Measure, k: &MultiIndex, p: &Monomial, i: u16) -> Result<Weight> {
        let mut acc = Weight::zero();
        for j in 0..k.arity() {
            let Some(lower) = k.minus_unit(j) else { continue };
            let kj = BigRational::from_integer(BigInt::from(k.components()[j]));
            for (m, c) in self.potential.polynomial(j).terms() {
                for s in cyclic_splits(i, m) {
                    let v = self.child(here, &lower, &s.word.concat(p))?;
                    let coeff = if s.from_u { c * &kj } else { -(c * &kj) };
                    acc += &v.scale(&coeff);
                }
            }
        }
        Ok(acc)
    }

    fn ends_with_u(&self, here: Measure, k: &MultiIndex, p: &Monomial, i: u16) -> Result<Weight> {
        let w = p.letters();
        let n = w.len();
        let root = Letter::u(i);
        let mut acc = Weight::zero();
        for pos in 0..n - 1 {
            if w[pos] == root {
                let a = Monomial::join(&[&w[..=pos]]);
                let b = Monomial::join(&[&w[pos + 1..]]);
                acc -= &self.split(here, k, &a, &b)?;
            } else if w[pos] == root.star() {
                let a = Monomial::join(&[&w[..pos]]);
                let b = Monomial::join(&[&w[pos + 1..n - 1]]);
                acc += &self.split(here, k, &a, &b)?;
            }
        }
        acc -= &self.shift(here, k, p, i)?;
        Ok(acc)
    }

    fn starts_with_ustar(&self, here: Measure, k: &MultiIndex, p: &Monomial, i: u16) -> Result<Weight> {
        let w = p.letters();
        let root = Letter::u_star(i);
        let mut acc = Weight::zero();
        for pos in 1..w.len() {
            if w[pos] == root {
                let a = Monomial::join(&[&w[..pos]]);
                let b = Monomial::join(&[&w[pos..]]);
                acc -= &self.split(here, k, &a, &b)?;
            }
        }
        acc += &self.shift(here, k, p, i)?;
        Ok(acc)
    }

    /// Every `mu^k(P)` with `|k| <= order`. Each total order is swept with
    /// the given execution policy after the previous one is complete, so the
    /// lower coefficients are already memoized.
    pub fn series(&self, p: &Monomial, order: usize, exec: Execution) -> Result<BTreeMap<MultiIndex, Weight>> {
        let mut out = BTreeMap::new();
        for level in by_level(self.potential.arity(), order) {
            let values = exec.map(&level, |k| self.mu(k, p));
            for (k, v) in level.into_iter().zip(values) {
                out.insert(k, v?);
            }
        }
        Ok(out)
    }

    /// Coefficients of `t^k / k!` in `mu_t ⊗ mu_t(∂_i P) + mu_t(D_i V_t · P)`
    /// for `|k| <= order`. Identically zero for a correct solution.
    pub fn sd_residual(&self, i: u16, p: &Monomial, order: usize) -> Result<BTreeMap<MultiIndex, Weight>> {
        let dp = derivative(i, &Polynomial::from(p.clone()));
        let dv: Vec<Polynomial> = (0..self.potential.arity())
            .map(|j| cyclic_derivative(i, self.potential.polynomial(j)))
            .collect();
        let mut out = BTreeMap::new();
        for k in MultiIndex::up_to(self.potential.arity(), order) {
            self.check_index(&k)?;
            let mut acc = Weight::zero();
            for ((a, b), c) in dp.terms() {
                for lower in k.below() {
                    let left = self.mu(&lower, a)?;
                    if left.is_zero() {
                        continue;
                    }
                    let right = self.mu(&k.sub(&lower), b)?;
                    acc += &(&left * &right).scale_int(&k.binomial(&lower)).scale(c);
                }
            }
            for (j, d) in dv.iter().enumerate() {
                let Some(lower) = k.minus_unit(j) else { continue };
                let kj = BigRational::from_integer(BigInt::from(k.components()[j]));
                for (m, c) in d.terms() {
                    acc += &self.mu(&lower, &m.concat(p))?.scale(&(c * &kj));
                }
            }
            out.insert(k, acc);
        }
        Ok(out)
    }

    /// Free-energy coefficients `f_k`, `1 <= |k| <= order`, of
    /// `F(t) = Σ f_k t^k / k!`. From `d/dα F(αt) = mu_{αt}(V_t)` one gets
    /// `f_k = (1/|k|) Σ_j k_j mu^{k-1_j}(Q_j)`.
    pub fn free_energy(&self, order: usize, exec: Execution) -> Result<BTreeMap<MultiIndex, Weight>> {
        let n = self.potential.arity();
        let mut out = BTreeMap::new();
        for level in by_level(n, order).into_iter().skip(1) {
            let values = exec.map(&level, |k| self.free_energy_at(k));
            for (k, v) in level.into_iter().zip(values) {
                out.insert(k, v?);
            }
        }
        Ok(out)
    }

    fn free_energy_at(&self, k: &MultiIndex) -> Result<Weight> {
        let mut acc = Weight::zero();
        for j in 0..k.arity() {
            let Some(lower) = k.minus_unit(j) else { continue };
            let kj = BigRational::from_integer(BigInt::from(k.components()[j]));
            acc += &self.mu_poly(&lower, self.potential.polynomial(j))?.scale(&kj);
        }
        let total = BigRational::from_integer(BigInt::from(k.total()));
        Ok(acc.scale(&total.recip()))
    }

    /// Whether `|mu^k(P)| <= k! C_k B^|k| D_p` holds, where `C_k = ∏ C_{k_i}`,
    /// `D_p = A^{p-1} C_{p-1}` with `p` the length of `P`, and `D_0 = 1`.
    pub fn bound_check(&self, constants: &BoundConstants, k: &MultiIndex, p: &Monomial) -> Result<bool> {
        if self.tau.is_formal() {
            return Err(Error::FormalModeUnsupported);
        }
        let value = self.mu(k, p)?;
        let value = value.abs_constant().ok_or(Error::FormalModeUnsupported)?;
        Ok(value <= BigRational::from_integer(constants.bound(k, p.len())))
    }
}

/// Multi-indices grouped by total order `0..=order`.
fn by_level(n: usize, order: usize) -> Vec<Vec<MultiIndex>> {
    let mut levels = vec![Vec::new(); order + 1];
    for k in MultiIndex::up_to(n, order) {
        levels[k.total()].push(k);
    }
    if n == 0 {
        levels.truncate(1);
    }
    levels
}

/// Sufficient constants of the coefficient growth bound:
/// `A = 4^{n+1} + 1` and `B = 2 n D (4A)^D + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundConstants {
    pub a: BigInt,
    pub b: BigInt,
}

impl BoundConstants {
    pub fn from_potential(v: &Potential) -> Self {
        let n = v.arity() as u32;
        let d = v.max_degree() as u32;
        let a = num_traits::pow(BigInt::from(4), n as usize + 1) + 1;
        let b = BigInt::from(2 * n * d) * num_traits::pow(&a * BigInt::from(4), d as usize) + 1;
        BoundConstants { a, b }
    }

    /// `k! C_k B^|k| D_p`.
    pub fn bound(&self, k: &MultiIndex, p: usize) -> BigInt {
        let ck = k
            .components()
            .iter()
            .fold(BigInt::one(), |acc, &x| acc * catalan(x as usize));
        let dp = if p == 0 {
            BigInt::one()
        } else {
            self.a.pow(p as u32 - 1) * catalan(p - 1)
        };
        k.factorial() * ck * self.b.pow(k.total() as u32) * dp
    }
}
