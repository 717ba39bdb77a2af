//! Planar-map records read off the recursion.
//!
//! Every summand of the recursion is one edge decision at the root star:
//! splitting terms that cut the root along a `U` (or, without `U`, along a
//! `U*`) and gluings to a new potential star through a `U_i` are dotted
//! edges and carry a minus sign; the remaining terms are oriented edges.
//! A record is one complete branch, its faces are the deterministic words
//! left at the leaves.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::{cyclic_splits, CyclicClass, Letter, Monomial};
use crate::error::{Error, Result};
use crate::json::weight_to_json;
use crate::multi_index::MultiIndex;
use crate::potential::Potential;
use crate::solver::{root, Rooted};
use crate::tau::TauState;
use crate::weight::Weight;

/// Which `U` roots each recursion step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootPolicy {
    /// The last `U` (for `U*`-only words, the first `U*`), as in the solver.
    #[default]
    LastU,
    /// The first `U` (for `U*`-only words, the last `U*`).
    FirstU,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapRecord {
    /// Star types, the root included.
    pub stars: Vec<Monomial>,
    pub faces: Vec<CyclicClass>,
    pub dotted_count: u32,
    pub multiplicity: BigUint,
    /// `(-1)^dotted · multiplicity · ∏ tau(face)`.
    pub weight: Weight,
}

// the weight is a function of the other fields, so it is left out
impl Ord for MapRecord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.stars, &self.faces, self.dotted_count, &self.multiplicity).cmp(&(
            &other.stars,
            &other.faces,
            other.dotted_count,
            &other.multiplicity,
        ))
    }
}

impl PartialOrd for MapRecord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Serialize)]
struct RecordLine {
    faces: Vec<String>,
    stars: Vec<String>,
    dotted: u32,
    multiplicity: serde_json::Value,
    weight: serde_json::Value,
}

impl MapRecord {
    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        let mult = match u64::try_from(&self.multiplicity) {
            Ok(m) => serde_json::Value::from(m),
            Err(_) => serde_json::Value::String(self.multiplicity.to_string()),
        };
        let line = RecordLine {
            faces: self.faces.iter().map(ToString::to_string).collect(),
            stars: self.stars.iter().map(ToString::to_string).collect(),
            dotted: self.dotted_count,
            multiplicity: mult,
            weight: weight_to_json(&self.weight),
        };
        serde_json::to_string(&line).expect("records serialize")
    }

    /// Genus-zero Euler relation for stars with one `U` and one `U*` each:
    /// such stars carry as many oriented edges as there are stars, so
    /// `V - E + F = 2` reads `#faces = 2 + #dotted`.
    pub fn euler_consistent(&self) -> bool {
        self.stars.iter().all(|s| {
            let l = s.letters();
            l.iter().filter(|x| x.kind == crate::LetterKind::U).count() == 1
                && l.iter().filter(|x| x.kind == crate::LetterKind::UStar).count() == 1
        }) && self.faces.len() == 2 + self.dotted_count as usize
    }
}

/// A partial branch: everything but the root star of the current call.
#[derive(Clone, Debug)]
struct Branch {
    stars: Vec<Monomial>,
    faces: Vec<CyclicClass>,
    dotted: u32,
    multiplicity: BigUint,
    faces_weight: Weight,
}

impl Branch {
    fn leaf() -> Self {
        Branch {
            stars: Vec::new(),
            faces: Vec::new(),
            dotted: 0,
            multiplicity: BigUint::one(),
            faces_weight: Weight::one(),
        }
    }

    fn join(&self, other: &Branch) -> Branch {
        let mut stars = self.stars.clone();
        stars.extend(other.stars.iter().cloned());
        stars.sort();
        let mut faces = self.faces.clone();
        faces.extend(other.faces.iter().cloned());
        faces.sort();
        Branch {
            stars,
            faces,
            dotted: self.dotted + other.dotted,
            multiplicity: &self.multiplicity * &other.multiplicity,
            faces_weight: &self.faces_weight * &other.faces_weight,
        }
    }

    fn edge(mut self, dotted: bool, factor: &BigUint) -> Branch {
        self.dotted += u32::from(dotted);
        self.multiplicity *= factor;
        self
    }

    fn record(self, root: &Monomial) -> MapRecord {
        let mut stars = self.stars;
        stars.push(root.clone());
        stars.sort();
        let mut w = self.faces_weight.scale_int(&BigInt::from(self.multiplicity.clone()));
        if self.dotted % 2 == 1 {
            w = -&w;
        }
        MapRecord {
            stars,
            faces: self.faces,
            dotted_count: self.dotted,
            multiplicity: self.multiplicity,
            weight: w,
        }
    }
}

/// Strips letter pairs that cancel around the cycle.
fn cyclically_reduced(word: &Monomial) -> Monomial {
    let l = word.letters();
    let (mut lo, mut hi) = (0, l.len());
    while hi - lo >= 2 && l[lo].cancels(l[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    Monomial::join(&[&l[lo..hi]])
}

struct Enumerator<'a> {
    potential: &'a Potential,
    tau: &'a TauState,
    policy: RootPolicy,
    memo: HashMap<(MultiIndex, Monomial), Vec<Branch>>,
}

impl Enumerator<'_> {
    fn branches(&mut self, k: &MultiIndex, word: &Monomial) -> Result<Vec<Branch>> {
        let word = cyclically_reduced(word);
        let key = (k.clone(), word.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let out = match root(&word, self.policy == RootPolicy::LastU) {
            Rooted::Det => self.leaf(k, &word)?,
            Rooted::EndsWithU { word, index } => self.ends_with_u(k, &word, index)?,
            Rooted::StartsWithUStar { word, index } => self.starts_with_ustar(k, &word, index)?,
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn leaf(&self, k: &MultiIndex, word: &Monomial) -> Result<Vec<Branch>> {
        if !k.is_zero() {
            return Ok(Vec::new());
        }
        if word.is_empty() {
            return Ok(vec![Branch::leaf()]);
        }
        let w = self.tau.tau(word)?;
        if w.is_zero() {
            // a face of vanishing trace kills the whole map
            return Ok(Vec::new());
        }
        Ok(vec![Branch {
            faces: vec![word.cyclic_class()],
            faces_weight: w,
            ..Branch::leaf()
        }])
    }

    /// Branch products for `Σ binom(k, k') mu^{k'}(a) mu^{k-k'}(b)`.
    fn split(&mut self, k: &MultiIndex, a: &Monomial, b: &Monomial, dotted: bool, out: &mut Vec<Branch>) -> Result<()> {
        for lower in k.below() {
            let left = self.branches(&lower, a)?;
            if left.is_empty() {
                continue;
            }
            let right = self.branches(&k.sub(&lower), b)?;
            let binom = k.binomial(&lower).to_biguint().expect("binomials are positive");
            for x in &left {
                for y in &right {
                    out.push(x.join(y).edge(dotted, &binom));
                }
            }
        }
        Ok(())
    }

    /// Gluings to a potential star. `dotted_via_u` tells whether gluing
    /// through a `U_i` of the new star is the dotted (negative) case.
    fn shift(&mut self, k: &MultiIndex, p: &Monomial, i: u16, dotted_via_u: bool, out: &mut Vec<Branch>) -> Result<()> {
        for j in 0..k.arity() {
            let Some(lower) = k.minus_unit(j) else { continue };
            for (m, c) in self.potential.polynomial(j).terms() {
                if !c.is_integer() || !c.is_positive() {
                    return Err(Error::Config(format!(
                        "map enumeration needs positive integer term counts, got {c} for `{m}`"
                    )));
                }
                let factor = (c.to_integer() * BigInt::from(k.components()[j]))
                    .to_biguint()
                    .expect("positive");
                for s in cyclic_splits(i, m) {
                    let dotted = s.from_u == dotted_via_u;
                    for b in self.branches(&lower, &s.word.concat(p))? {
                        let mut b = b.edge(dotted, &factor);
                        b.stars.push(m.clone());
                        b.stars.sort();
                        out.push(b);
                    }
                }
            }
        }
        Ok(())
    }

    fn ends_with_u(&mut self, k: &MultiIndex, p: &Monomial, i: u16) -> Result<Vec<Branch>> {
        let w = p.letters();
        let n = w.len();
        let root = Letter::u(i);
        let mut out = Vec::new();
        for pos in 0..n - 1 {
            if w[pos] == root {
                let (a, b) = (Monomial::join(&[&w[..=pos]]), Monomial::join(&[&w[pos + 1..]]));
                self.split(k, &a, &b, true, &mut out)?;
            } else if w[pos] == root.star() {
                let (a, b) = (Monomial::join(&[&w[..pos]]), Monomial::join(&[&w[pos + 1..n - 1]]));
                self.split(k, &a, &b, false, &mut out)?;
            }
        }
        self.shift(k, p, i, true, &mut out)?;
        Ok(out)
    }

    fn starts_with_ustar(&mut self, k: &MultiIndex, p: &Monomial, i: u16) -> Result<Vec<Branch>> {
        let w = p.letters();
        let root = Letter::u_star(i);
        let mut out = Vec::new();
        for pos in 1..w.len() {
            if w[pos] == root {
                let (a, b) = (Monomial::join(&[&w[..pos]]), Monomial::join(&[&w[pos..]]));
                self.split(k, &a, &b, true, &mut out)?;
            }
        }
        self.shift(k, p, i, false, &mut out)?;
        Ok(out)
    }
}

/// All map records for `mu^k(root)`, sorted. Their weights add up to
/// `mu^k(root)`, the `k`-th derivative at `t = 0`.
pub fn enumerate_maps(
    potential: &Potential,
    tau: &TauState,
    k: &MultiIndex,
    root_word: &Monomial,
    policy: RootPolicy,
) -> Result<Vec<MapRecord>> {
    if k.arity() != potential.arity() {
        return Err(Error::ArityMismatch {
            expected: potential.arity(),
            got: k.arity(),
        });
    }
    let mut e = Enumerator {
        potential,
        tau,
        policy,
        memo: HashMap::new(),
    };
    let mut records: Vec<MapRecord> = e
        .branches(k, root_word)?
        .into_iter()
        .map(|b| b.record(root_word))
        .collect();
    records.sort();
    Ok(records)
}

pub fn total_weight(records: &[MapRecord]) -> Weight {
    records.iter().fold(Weight::zero(), |mut acc, r| {
        acc += &r.weight;
        acc
    })
}

/// JSON lines, sorted by line text.
pub fn to_json_lines(records: &[MapRecord]) -> String {
    let mut lines: Vec<String> = records.iter().map(MapRecord::to_json_line).collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hciz::{hciz_potential, hciz_word};

    fn w(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_and_empty_cases() {
        let v = Potential::zero();
        let tau = TauState::formal();
        let k = MultiIndex::zero(0);
        let r = enumerate_maps(&v, &tau, &k, &w("a1 a2"), RootPolicy::LastU).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].faces, vec![w("a1 a2").cyclic_class()]);
        assert_eq!(r[0].dotted_count, 0);
        assert!(enumerate_maps(&v, &tau, &k, &w("u1"), RootPolicy::LastU).unwrap().is_empty());
    }

    #[test]
    fn hciz_two_star_map() {
        let tau = TauState::formal_centered(&[1, 2]);
        let k = MultiIndex::new(vec![1]);
        let r = enumerate_maps(&hciz_potential(), &tau, &k, &hciz_word(), RootPolicy::LastU).unwrap();
        assert_eq!(r.len(), 1, "{}", to_json_lines(&r));
        assert_eq!(r[0].faces, vec![w("a1 a1").cyclic_class(), w("a2 a2").cyclic_class()]);
        assert_eq!(r[0].dotted_count, 0);
        assert!(r[0].euler_consistent());
        let line = r[0].to_json_line();
        assert!(line.starts_with(r#"{"faces":["a1 a1","a2 a2"]"#), "{line}");
    }
}
