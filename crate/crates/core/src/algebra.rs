//! The free *-algebra in the letters `U_i`, `U_i*` and `A_i` modulo the
//! unitarity relation `U_i U_i* = U_i* U_i = 1`.
//!
//! Words are reduced eagerly: a [`Monomial`] never contains an adjacent
//! inverse pair. Coefficients are exact rationals.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Letter species. The derived order `Det < U < UStar` fixes canonical rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    Det,
    U,
    UStar,
}

/// One letter of the alphabet, `A_i`, `U_i` or `U_i*`, with a 1-based family index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub kind: LetterKind,
    pub index: u16,
}

impl Letter {
    pub const fn det(index: u16) -> Self {
        Letter {
            kind: LetterKind::Det,
            index,
        }
    }

    pub const fn u(index: u16) -> Self {
        Letter {
            kind: LetterKind::U,
            index,
        }
    }

    pub const fn u_star(index: u16) -> Self {
        Letter {
            kind: LetterKind::UStar,
            index,
        }
    }

    /// The involution on a single letter.
    pub fn star(self) -> Self {
        let kind = match self.kind {
            LetterKind::Det => LetterKind::Det,
            LetterKind::U => LetterKind::UStar,
            LetterKind::UStar => LetterKind::U,
        };
        Letter { kind, ..self }
    }

    pub fn is_unitary(self) -> bool {
        self.kind != LetterKind::Det
    }

    /// `true` when `self · other` cancels to the identity.
    pub fn cancels(self, other: Letter) -> bool {
        self.is_unitary() && self.index == other.index && self.star() == other
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LetterKind::Det => write!(f, "a{}", self.index),
            LetterKind::U => write!(f, "u{}", self.index),
            LetterKind::UStar => write!(f, "u{}*", self.index),
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let bad = || Error::Parse(token.to_string());
        let (kind, rest) = if let Some(rest) = token.strip_prefix('a') {
            (LetterKind::Det, rest)
        } else if let Some(rest) = token.strip_prefix('u') {
            match rest.strip_suffix('*') {
                Some(inner) => (LetterKind::UStar, inner),
                None => (LetterKind::U, rest),
            }
        } else {
            return Err(bad());
        };
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: u16 = rest.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Letter { kind, index })
    }
}

/// A reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Letter>);

impl Monomial {
    pub fn identity() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a word, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Monomial(out)
    }

    pub fn letter(l: Letter) -> Self {
        Monomial(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of `U`/`U*` letters.
    pub fn u_degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_unitary()).count()
    }

    /// `true` when the word only contains deterministic letters.
    pub fn is_det(&self) -> bool {
        self.0.iter().all(|l| !l.is_unitary())
    }

    pub fn max_index(&self) -> u16 {
        self.0.iter().map(|l| l.index).max().unwrap_or(0)
    }

    /// Concatenation followed by reduction at the junction.
    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Monomial(out)
    }

    /// Reduced product of several slices, in order.
    pub fn join(parts: &[&[Letter]]) -> Monomial {
        let mut out = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for part in parts {
            for &l in *part {
                push_reduced(&mut out, l);
            }
        }
        Monomial(out)
    }

    /// Reverse the word and star each letter.
    pub fn star(&self) -> Monomial {
        Monomial(self.0.iter().rev().map(|l| l.star()).collect())
    }

    pub fn rotate_left(&self, by: usize) -> Monomial {
        if self.0.is_empty() {
            return self.clone();
        }
        let by = by % self.0.len();
        let mut v = self.0[by..].to_vec();
        v.extend_from_slice(&self.0[..by]);
        Monomial(v)
    }

    pub fn cyclic_class(&self) -> CyclicClass {
        CyclicClass::of(self)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&last) if last.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::from_letters(letters))
    }
}

/// Canonical representative of a word up to rotation.
///
/// The word is first cyclically reduced (a leading `U_i` against a trailing
/// `U_i*` cancels under any trace), then the lexicographically least rotation
/// under the letter order is kept.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclicClass(Monomial);

impl CyclicClass {
    pub fn of(word: &Monomial) -> CyclicClass {
        let letters = word.letters();
        let (mut lo, mut hi) = (0usize, letters.len());
        while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let core = &letters[lo..hi];
        let n = core.len();
        if n <= 1 {
            return CyclicClass(Monomial(core.to_vec()));
        }
        let rot = |s: usize| core[s..].iter().chain(core[..s].iter());
        let mut best = 0usize;
        for s in 1..n {
            if rot(s).cmp(rot(best)) == std::cmp::Ordering::Less {
                best = s;
            }
        }
        CyclicClass(Monomial(rot(best).copied().collect()))
    }

    pub fn word(&self) -> &Monomial {
        &self.0
    }

    pub fn into_word(self) -> Monomial {
        self.0
    }
}

impl fmt::Display for CyclicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Finite rational combination of reduced words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(Monomial::identity())
    }

    pub fn term(word: Monomial, coeff: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn add_term(&mut self, word: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &Monomial) -> BigRational {
        self.terms.get(word).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        let mut out = Polynomial::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn star(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (w, c) in &self.terms {
            out.add_term(w.star(), c.clone());
        }
        out
    }

    /// Coefficients collected per cyclic class; equal maps mean equal traces.
    pub fn cyclic_reduction(&self) -> BTreeMap<CyclicClass, BigRational> {
        let mut out: BTreeMap<CyclicClass, BigRational> = BTreeMap::new();
        for (w, c) in &self.terms {
            *out.entry(w.cyclic_class()).or_insert_with(BigRational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn max_index(&self) -> u16 {
        self.terms.keys().map(Monomial::max_index).max().unwrap_or(0)
    }
}

impl From<Monomial> for Polynomial {
    fn from(word: Monomial) -> Self {
        Polynomial::term(word, BigRational::one())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let word = if w.is_empty() { "1".to_string() } else { w.to_string() };
            write!(f, "({c})*[{word}]")?;
        }
        Ok(())
    }
}

/// Finite rational combination of `P ⊗ Q` pairs of reduced words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorPolynomial {
    terms: BTreeMap<(Monomial, Monomial), BigRational>,
}

impl TensorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn simple(left: Monomial, right: Monomial) -> Self {
        let mut t = Self::zero();
        t.add_term(left, right, BigRational::one());
        t
    }

    pub fn add_term(&mut self, left: Monomial, right: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The product `(P1 ⊗ Q1) × (P2 ⊗ Q2) = P1 P2 ⊗ Q1 Q2`, extended bilinearly.
    pub fn times(&self, rhs: &TensorPolynomial) -> TensorPolynomial {
        let mut out = TensorPolynomial::zero();
        for ((p1, q1), x) in &self.terms {
            for ((p2, q2), y) in &rhs.terms {
                out.add_term(p1.concat(p2), q1.concat(q2), x * y);
            }
        }
        out
    }

    pub fn add(&self, rhs: &TensorPolynomial) -> TensorPolynomial {
        let mut out = self.clone();
        for ((p, q), c) in &rhs.terms {
            out.add_term(p.clone(), q.clone(), c.clone());
        }
        out
    }

    /// `m(A ⊗ B) = BA`, extended linearly.
    pub fn flip_multiply(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for ((a, b), c) in &self.terms {
            out.add_term(b.concat(a), c.clone());
        }
        out
    }
}

/// Noncommutative derivative `∂_i`.
pub fn derivative(i: u16, p: &Polynomial) -> TensorPolynomial {
    let mut out = TensorPolynomial::zero();
    for (q, c) in p.terms() {
        for (left, right, sign) in derivative_splits(i, q) {
            let coeff = if sign { c.clone() } else { -c.clone() };
            out.add_term(left, right, coeff);
        }
    }
    out
}

/// Split points of `∂_i q`: `(q1 U_i, q2, +)` for every `U_i` and
/// `(q1, U_i* q2, -)` for every `U_i*`.
pub fn derivative_splits(i: u16, q: &Monomial) -> Vec<(Monomial, Monomial, bool)> {
    let w = q.letters();
    let mut out = Vec::new();
    for (pos, l) in w.iter().enumerate() {
        if l.index != i {
            continue;
        }
        match l.kind {
            LetterKind::U => out.push((
                Monomial(w[..=pos].to_vec()),
                Monomial(w[pos + 1..].to_vec()),
                true,
            )),
            LetterKind::UStar => out.push((
                Monomial(w[..pos].to_vec()),
                Monomial(w[pos..].to_vec()),
                false,
            )),
            LetterKind::Det => {}
        }
    }
    out
}

/// One term of `D_i q`: the rotated word and whether it came from a `U_i`
/// (positive sign) or a `U_i*` (negative sign).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSplit {
    pub word: Monomial,
    pub from_u: bool,
}

/// Terms of the cyclic derivative `D_i q`: `q2 q1 U_i` for `q = q1 U_i q2`
/// and `-U_i* q2 q1` for `q = q1 U_i* q2`.
pub fn cyclic_splits(i: u16, q: &Monomial) -> Vec<CyclicSplit> {
    let w = q.letters();
    let mut out = Vec::new();
    for (pos, l) in w.iter().enumerate() {
        if l.index != i {
            continue;
        }
        match l.kind {
            LetterKind::U => out.push(CyclicSplit {
                word: Monomial::join(&[&w[pos + 1..], &w[..=pos]]),
                from_u: true,
            }),
            LetterKind::UStar => out.push(CyclicSplit {
                word: Monomial::join(&[&w[pos..], &w[..pos]]),
                from_u: false,
            }),
            LetterKind::Det => {}
        }
    }
    out
}

/// Cyclic derivative `D_i = m ∘ ∂_i`.
pub fn cyclic_derivative(i: u16, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (q, c) in p.terms() {
        for s in cyclic_splits(i, q) {
            let coeff = if s.from_u { c.clone() } else { -c.clone() };
            out.add_term(s.word, coeff);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn w(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::from(w(s))
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn unitarity_cancels() {
        assert_eq!(&p("u1") * &p("u1*"), Polynomial::one());
        assert_eq!(&p("a1 u1") * &p("u1* a2"), p("a1 a2"));
        assert_eq!(&p("u1 a1") * &p("u1 a1"), p("u1 a1 u1 a1"));
        assert_eq!(w("u1 u1* u2* u2 a1"), w("a1"));
    }

    #[test]
    fn star_examples() {
        let x = Polynomial::term(w("u1 a1"), rat(3, 2));
        assert_eq!(x.star(), Polynomial::term(w("a1 u1*"), rat(3, 2)));
        assert_eq!(p("u1* a1 u1 a2").star(), p("a2 u1* a1 u1"));
        assert_eq!(Polynomial::one().star(), Polynomial::one());
    }

    #[test]
    fn derivative_examples() {
        let mut expected = TensorPolynomial::simple(w("u1"), w("a1 u1*"));
        expected.add_term(w("u1 a1"), w("u1*"), -BigRational::one());
        assert_eq!(derivative(1, &p("u1 a1 u1*")), expected);
        assert!(derivative(1, &p("a1 a2")).is_zero());
        assert!(derivative(2, &p("u1")).is_zero());
    }

    #[test]
    fn cyclic_derivative_examples() {
        let expected = &p("a2 u1* a1 u1") - &p("u1* a1 u1 a2");
        assert_eq!(cyclic_derivative(1, &p("u1* a1 u1 a2")), expected);
        assert!(cyclic_derivative(1, &p("a1")).is_zero());
        assert_eq!(cyclic_derivative(1, &p("u1")), p("u1"));
    }

    #[test]
    fn cyclic_class_examples() {
        assert_eq!(w("a2 a1").cyclic_class(), w("a1 a2").cyclic_class());
        assert_eq!(w("a2 a1").cyclic_class().word(), &w("a1 a2"));
        assert_eq!(w("u1").cyclic_class().word(), &w("u1"));
        assert_eq!(w("a1 u1 a1 u1").cyclic_class(), w("u1 a1 u1 a1").cyclic_class());
        // cyclic reduction: U* A U has the trace of A
        assert_eq!(w("u1* a1 u1").cyclic_class(), w("a1").cyclic_class());
        assert_ne!(w("a1 a1 a2").cyclic_class(), w("a1 a2 a2").cyclic_class());
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let m = w("u1* a1 u1 a2");
        assert_eq!(m.to_string(), "u1* a1 u1 a2");
        assert_eq!(w(""), Monomial::identity());
        assert!("b1".parse::<Monomial>().is_err());
        assert!("u0".parse::<Monomial>().is_err());
        assert!("u1**".parse::<Monomial>().is_err());
        assert!("a".parse::<Monomial>().is_err());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let x = &p("u1 a1") - &p("u1 a1");
        assert!(x.is_zero());
        let mut y = p("a1");
        y.add_term(w("a2"), rat(1, 3));
        y.add_term(w("a1"), rat(-1, 1));
        assert_eq!(y, Polynomial::term(w("a2"), rat(1, 3)));
    }
}
