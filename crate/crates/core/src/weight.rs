//! Face weights: the commutative ring of rational polynomials in the formal
//! trace generators `tau[q]`, one generator per cyclic class of a
//! deterministic word. Numeric states only ever produce constants.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{CyclicClass, Letter, Monomial};
use crate::error::{Error, Result};

/// Formal trace `tau(q)` of a deterministic cyclic class.
///
/// Identity is by value: two lookups of the same class always compare equal,
/// so no shared registry is needed across threads.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<[Letter]>);

impl Generator {
    pub fn new(class: &CyclicClass) -> Self {
        Generator(class.word().letters().into())
    }

    pub fn class(&self) -> CyclicClass {
        Monomial::from_letters(self.0.iter().copied()).cyclic_class()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau[{}]", self.class())
    }
}

/// Product of generator powers, kept sorted by generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenMonomial(Vec<(Generator, u32)>);

impl GenMonomial {
    pub fn one() -> Self {
        GenMonomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.0
    }

    pub fn from_factors(mut factors: Vec<(Generator, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Generator, u32)> = Vec::with_capacity(factors.len());
        for (g, e) in factors {
            match out.last_mut() {
                Some((last, acc)) if *last == g => *acc += e,
                _ => out.push((g, e)),
            }
        }
        GenMonomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &GenMonomial) -> GenMonomial {
        if self.0.is_empty() {
            return other.clone();
        }
        if other.0.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        GenMonomial(out)
    }
}

impl fmt::Display for GenMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GenMonomial {
    type Err = Error;

    /// Parses the display form, e.g. `tau[a1 a1]^2 tau[a2]`; `1` is the unit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(GenMonomial::one());
        }
        let bad = || Error::Config(format!("malformed generator monomial `{s}`"));
        let mut factors = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest.strip_prefix("tau[").ok_or_else(bad)?;
            let close = body.find(']').ok_or_else(bad)?;
            let word: Monomial = body[..close].parse()?;
            if !word.is_det() {
                return Err(bad());
            }
            rest = &body[close + 1..];
            let mut exp = 1u32;
            if let Some(after) = rest.strip_prefix('^') {
                let end = after.find(' ').unwrap_or(after.len());
                exp = after[..end].parse().map_err(|_| bad())?;
                rest = &after[end..];
            }
            rest = rest.trim_start();
            factors.push((Generator::new(&word.cyclic_class()), exp));
        }
        Ok(GenMonomial::from_factors(factors))
    }
}

/// Element of `Q[tau generators]`, stored as sorted `(monomial, coefficient)`
/// pairs with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Weight {
    terms: Vec<(GenMonomial, BigRational)>,
}

impl Weight {
    pub fn zero() -> Self {
        Weight { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Weight {
            terms: vec![(GenMonomial::one(), c)],
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn generator(g: Generator) -> Self {
        Weight {
            terms: vec![(GenMonomial(vec![(g, 1)]), BigRational::one())],
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (GenMonomial, BigRational)>>(terms: I) -> Self {
        let mut v: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        Weight { terms: merge_sorted(v) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(GenMonomial, BigRational)] {
        &self.terms
    }

    /// The rational value when the weight has no generators.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &GenMonomial) -> BigRational {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn scale(&self, c: &BigRational) -> Weight {
        if c.is_zero() {
            return Weight::zero();
        }
        Weight {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> Weight {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    /// Substitute every generator; generators mapped to `None` are kept.
    pub fn substitute<F>(&self, mut f: F) -> Weight
    where
        F: FnMut(&Generator) -> Option<Weight>,
    {
        let mut out = Weight::zero();
        for (m, c) in &self.terms {
            let mut acc = Weight::constant(c.clone());
            for (g, e) in m.factors() {
                let base = f(g).unwrap_or_else(|| Weight::generator(g.clone()));
                for _ in 0..*e {
                    acc = &acc * &base;
                }
            }
            out += &acc;
        }
        out
    }

    /// Drops every term that mentions one of the given generators.
    pub fn vanish(&self, zero: impl Fn(&Generator) -> bool) -> Weight {
        Weight {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.factors().iter().any(|(g, _)| zero(g)))
                .cloned()
                .collect(),
        }
    }

    /// Largest absolute coefficient of a constant weight.
    pub fn abs_constant(&self) -> Option<BigRational> {
        self.as_constant().map(|c| c.abs())
    }
}

fn merge_sorted(v: Vec<(GenMonomial, BigRational)>) -> Vec<(GenMonomial, BigRational)> {
    let mut out: Vec<(GenMonomial, BigRational)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((last, acc)) if *last == m => *acc += c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

fn add_sorted(
    a: &[(GenMonomial, BigRational)],
    b: &[(GenMonomial, BigRational)],
    negate_b: bool,
) -> Vec<(GenMonomial, BigRational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: &BigRational| if negate_b { -c.clone() } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0.clone(), nb(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = &a[i].1 + nb(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), nb(c))));
    out
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight {
            terms: add_sorted(&self.terms, &rhs.terms, false),
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight {
            terms: add_sorted(&self.terms, &rhs.terms, true),
        }
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        self.terms = add_sorted(&self.terms, &rhs.terms, false);
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        if rhs.is_zero() {
            return;
        }
        self.terms = add_sorted(&self.terms, &rhs.terms, true);
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Weight {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        if self.is_zero() || rhs.is_zero() {
            return Weight::zero();
        }
        if let [(m, c)] = self.terms.as_slice() {
            if m.is_one() {
                return rhs.scale(c);
            }
        }
        if let [(m, c)] = rhs.terms.as_slice() {
            if m.is_one() {
                return self.scale(c);
            }
        }
        let mut v = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                v.push((a.mul(b), x * y));
            }
        }
        v.sort_by(|a, b| a.0.cmp(&b.0));
        Weight {
            terms: merge_sorted(v),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c}) {m}")?;
            }
        }
        Ok(())
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Rational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Generator {
        Generator::new(&s.parse::<Monomial>().unwrap().cyclic_class())
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ring_identities() {
        let x = Weight::generator(g("a1 a1"));
        let y = Weight::generator(g("a2"));
        let s = &x + &y;
        let sq = &s * &s;
        let expected = &(&(&x * &x) + &(&x * &y).scale(&r(2, 1))) + &(&y * &y);
        assert_eq!(sq, expected);
        assert!((&sq - &sq).is_zero());
        assert_eq!(&Weight::one() * &x, x);
        assert_eq!(Weight::constant(r(3, 4)).as_constant(), Some(r(3, 4)));
        assert_eq!(x.as_constant(), None);
    }

    #[test]
    fn generators_are_cyclic() {
        assert_eq!(g("a1 a2 a2"), g("a2 a1 a2"));
    }

    #[test]
    fn substitution_evaluates() {
        let x = Weight::generator(g("a1 a1"));
        let y = Weight::generator(g("a2"));
        let p = &(&x * &y) + &Weight::integer(1);
        let v = p.substitute(|gen| {
            Some(if *gen == g("a1 a1") {
                Weight::constant(r(1, 2))
            } else {
                Weight::integer(3)
            })
        });
        assert_eq!(v.as_constant(), Some(r(5, 2)));
        assert!(p.vanish(|gen| *gen == g("a2")).as_constant() == Some(r(1, 1)));
    }

    #[test]
    fn display_parses_back() {
        let x = Weight::generator(g("a1 a1"));
        let y = Weight::generator(g("a2 a1"));
        let p = &(&x * &x) * &y;
        let (m, _) = &p.terms()[0];
        let parsed: GenMonomial = m.to_string().parse().unwrap();
        assert_eq!(&parsed, m);
        assert_eq!("1".parse::<GenMonomial>().unwrap(), GenMonomial::one());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), r(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&r(4, 2)), "2");
        assert_eq!(format_rational(&r(-1, 3)), "-1/3");
    }
}
