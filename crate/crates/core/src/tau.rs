//! The trace `tau` on deterministic words: numeric moment tables (free
//! product or explicit joint table) or formal generators.

use std::collections::{BTreeMap, BTreeSet};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{CyclicClass, Monomial};
use crate::error::{Error, Result};
use crate::weight::{format_rational, parse_rational, Generator, Weight};

/// Marginal moments `tau(A_i^k)` for `k = 1..=K` per family, plus optional
/// joint values keyed by cyclic class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MomentTable {
    marginals: BTreeMap<u16, Vec<BigRational>>,
    joint: BTreeMap<CyclicClass, BigRational>,
}

impl MomentTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `(m_1, .., m_K)` for family `index`; `m_0 = 1` is implicit.
    pub fn with_marginal(mut self, index: u16, moments: Vec<BigRational>) -> Self {
        self.marginals.insert(index, moments);
        self
    }

    pub fn with_joint(mut self, word: &Monomial, value: BigRational) -> Self {
        self.joint.insert(word.cyclic_class(), value);
        self
    }

    pub fn marginal(&self, index: u16) -> Option<&[BigRational]> {
        self.marginals.get(&index).map(Vec::as_slice)
    }

    pub fn families(&self) -> impl Iterator<Item = u16> + '_ {
        self.marginals.keys().copied()
    }

    /// `tau(A_i^k)`, with `k = 0` giving one.
    pub fn moment(&self, index: u16, k: usize) -> Result<BigRational> {
        if k == 0 {
            return Ok(BigRational::one());
        }
        let table = self.marginals.get(&index).ok_or(Error::MomentDepthExceeded {
            index,
            needed: k,
            available: 0,
        })?;
        table.get(k - 1).cloned().ok_or(Error::MomentDepthExceeded {
            index,
            needed: k,
            available: table.len(),
        })
    }

    /// `true` when some stored moment exceeds one in absolute value, outside
    /// the regime where the coefficient growth bound is proven.
    pub fn exceeds_unit_bound(&self) -> bool {
        let one = BigRational::one();
        self.marginals
            .values()
            .flatten()
            .chain(self.joint.values())
            .any(|m| m.abs() > one)
    }

    /// Free cumulants `k_1..k_depth` of family `index` derived from its moments.
    pub fn free_cumulants(&self, index: u16, depth: usize) -> Result<Vec<BigRational>> {
        let moments: Vec<BigRational> = (0..=depth)
            .map(|k| self.moment(index, k))
            .collect::<Result<_>>()?;
        Ok(free_cumulants_from_moments(&moments))
    }

    /// Moments of `a + A_i` given the moments of `A_i`, for the same depth.
    pub fn shifted(&self, index: u16, a: &BigRational) -> Result<MomentTable> {
        let depth = self.marginals.get(&index).map_or(0, Vec::len);
        let mut shifted = Vec::with_capacity(depth);
        for k in 1..=depth {
            let mut acc = BigRational::zero();
            for j in 0..=k {
                let binom = crate::multi_index::binomial(k as u32, j as u32);
                let mut pow = BigRational::one();
                for _ in 0..(k - j) {
                    pow *= a;
                }
                acc += BigRational::from_integer(binom) * pow * self.moment(index, j)?;
            }
            shifted.push(acc);
        }
        let mut out = self.clone();
        out.marginals.insert(index, shifted);
        Ok(out)
    }
}

/// Inverts `m_n = Σ_s k_s [z^{n-s}] M(z)^s` where `moments[0] = 1`.
pub fn free_cumulants_from_moments(moments: &[BigRational]) -> Vec<BigRational> {
    let depth = moments.len().saturating_sub(1);
    // powers[s][r] = [z^r] M(z)^s
    let mut powers: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); depth + 1]; depth + 1];
    powers[0][0] = BigRational::one();
    for s in 1..=depth {
        for r in 0..=depth {
            let mut acc = BigRational::zero();
            for j in 0..=r {
                acc += &powers[s - 1][r - j] * &moments[j];
            }
            powers[s][r] = acc;
        }
    }
    let mut cumulants = vec![BigRational::zero(); depth + 1];
    for n in 1..=depth {
        let mut acc = moments[n].clone();
        for s in 1..n {
            acc -= &cumulants[s] * &powers[s][n - s];
        }
        cumulants[n] = acc;
    }
    cumulants.remove(0);
    cumulants
}

/// Free-product moment of a deterministic word whose families are free with
/// the given marginals.
///
/// Sums `∏ k_|B|` over non-crossing partitions of the letter positions whose
/// blocks stay within one family (mixed free cumulants vanish). The sum is
/// evaluated by interval recursion on the block containing the first letter.
pub fn moments_free(marginals: &MomentTable, q: &Monomial) -> Result<BigRational> {
    if !q.is_det() {
        return Err(Error::NotDetWord(q.to_string()));
    }
    let families: Vec<u16> = q.letters().iter().map(|l| l.index).collect();
    let n = families.len();
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut counts: BTreeMap<u16, usize> = BTreeMap::new();
    for &f in &families {
        *counts.entry(f).or_default() += 1;
    }
    let mut kappa: BTreeMap<u16, Vec<BigRational>> = BTreeMap::new();
    for (&f, &c) in &counts {
        kappa.insert(f, marginals.free_cumulants(f, c)?);
    }
    let mut dp = IntervalSum {
        families: &families,
        kappa: &kappa,
        memo: vec![vec![None; n + 1]; n + 1],
    };
    Ok(dp.interval(0, n))
}

struct IntervalSum<'a> {
    families: &'a [u16],
    kappa: &'a BTreeMap<u16, Vec<BigRational>>,
    memo: Vec<Vec<Option<BigRational>>>,
}

impl IntervalSum<'_> {
    fn interval(&mut self, a: usize, b: usize) -> BigRational {
        if a >= b {
            return BigRational::one();
        }
        if let Some(v) = &self.memo[a][b] {
            return v.clone();
        }
        let v = self.grow(a, a, 1, b);
        self.memo[a][b] = Some(v.clone());
        v
    }

    /// Sum over completions of a block that starts at `first`, currently ends
    /// at `last` and has `size` elements, inside `[first, end)`.
    fn grow(&mut self, first: usize, last: usize, size: usize, end: usize) -> BigRational {
        let fam = self.families[first];
        let closed = &self.kappa[&fam][size - 1] * self.interval(last + 1, end);
        let mut acc = closed;
        for next in last + 1..end {
            if self.families[next] != fam {
                continue;
            }
            let gap = self.interval(last + 1, next);
            if gap.is_zero() {
                continue;
            }
            acc += gap * self.grow(first, next, size + 1, end);
        }
        acc
    }
}

/// The trace on deterministic words.
#[derive(Debug)]
pub enum TauState {
    /// Families free with the given marginals.
    NumericFree {
        table: MomentTable,
        cache: DashMap<CyclicClass, BigRational>,
    },
    /// Marginals for single-family words, explicit joint values otherwise.
    NumericJoint(MomentTable),
    /// Opaque generators; classes listed in `vanishing` evaluate to zero.
    Formal { vanishing: BTreeSet<CyclicClass> },
}

impl Clone for TauState {
    fn clone(&self) -> Self {
        match self {
            TauState::NumericFree { table, .. } => TauState::free(table.clone()),
            TauState::NumericJoint(t) => TauState::NumericJoint(t.clone()),
            TauState::Formal { vanishing } => TauState::Formal {
                vanishing: vanishing.clone(),
            },
        }
    }
}

impl TauState {
    pub fn free(table: MomentTable) -> Self {
        TauState::NumericFree {
            table,
            cache: DashMap::new(),
        }
    }

    pub fn joint(table: MomentTable) -> Self {
        TauState::NumericJoint(table)
    }

    pub fn formal() -> Self {
        TauState::Formal {
            vanishing: BTreeSet::new(),
        }
    }

    /// Formal state in which `tau(A_i) = 0` for the listed families.
    pub fn formal_centered(families: &[u16]) -> Self {
        TauState::Formal {
            vanishing: families
                .iter()
                .map(|&i| Monomial::letter(crate::algebra::Letter::det(i)).cyclic_class())
                .collect(),
        }
    }

    pub fn is_formal(&self) -> bool {
        matches!(self, TauState::Formal { .. })
    }

    pub fn table(&self) -> Option<&MomentTable> {
        match self {
            TauState::NumericFree { table, .. } | TauState::NumericJoint(table) => Some(table),
            TauState::Formal { .. } => None,
        }
    }

    /// `tau(q)` for a deterministic word.
    pub fn tau(&self, q: &Monomial) -> Result<Weight> {
        if !q.is_det() {
            return Err(Error::NotDetWord(q.to_string()));
        }
        if q.is_empty() {
            return Ok(Weight::one());
        }
        let class = q.cyclic_class();
        match self {
            TauState::NumericFree { table, cache } => {
                if let Some(v) = cache.get(&class) {
                    return Ok(Weight::constant(v.clone()));
                }
                let v = moments_free(table, class.word())?;
                cache.insert(class, v.clone());
                Ok(Weight::constant(v))
            }
            TauState::NumericJoint(table) => {
                let word = class.word();
                let first = word.letters()[0].index;
                if word.letters().iter().all(|l| l.index == first) {
                    return Ok(Weight::constant(table.moment(first, word.len())?));
                }
                table
                    .joint
                    .get(&class)
                    .cloned()
                    .map(Weight::constant)
                    .ok_or_else(|| Error::MissingJointMoment(word.to_string()))
            }
            TauState::Formal { vanishing } => {
                if vanishing.contains(&class) {
                    Ok(Weight::zero())
                } else {
                    Ok(Weight::generator(Generator::new(&class)))
                }
            }
        }
    }

    /// Evaluates a formal weight under this (numeric) state.
    pub fn evaluate(&self, w: &Weight) -> Result<Weight> {
        let mut err = None;
        let out = w.substitute(|g| match self.tau(g.class().word()) {
            Ok(v) => Some(v),
            Err(e) => {
                err.get_or_insert(e);
                None
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

/// JSON form of a tau configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauConfig {
    #[serde(default)]
    pub marginals: BTreeMap<String, Vec<String>>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub joint: BTreeMap<String, String>,
    /// Formal mode only: words whose trace is set to zero, e.g. `["a1", "a2"]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vanishing: Vec<String>,
}

impl TauConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("tau config: {e}")))
    }

    pub fn table(&self) -> Result<MomentTable> {
        let mut table = MomentTable::new();
        for (key, values) in &self.marginals {
            let index: u16 = key
                .parse()
                .ok()
                .filter(|&i| i > 0)
                .ok_or_else(|| Error::Config(format!("bad family index `{key}`")))?;
            let moments = values
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            table = table.with_marginal(index, moments);
        }
        for (word, value) in &self.joint {
            let w: Monomial = word.parse()?;
            if !w.is_det() {
                return Err(Error::NotDetWord(word.clone()));
            }
            table = table.with_joint(&w, parse_rational(value)?);
        }
        Ok(table)
    }

    pub fn build(&self) -> Result<TauState> {
        match self.mode.as_str() {
            "free" => Ok(TauState::free(self.table()?)),
            "joint" => Ok(TauState::joint(self.table()?)),
            "formal" => {
                let mut vanishing = BTreeSet::new();
                for w in &self.vanishing {
                    let m: Monomial = w.parse()?;
                    if !m.is_det() {
                        return Err(Error::NotDetWord(w.clone()));
                    }
                    vanishing.insert(m.cyclic_class());
                }
                Ok(TauState::Formal { vanishing })
            }
            other => Err(Error::Config(format!(
                "unknown tau mode `{other}` (expected free, joint or formal)"
            ))),
        }
    }

    pub fn from_table(table: &MomentTable, mode: &str) -> Self {
        TauConfig {
            marginals: table
                .marginals
                .iter()
                .map(|(i, v)| (i.to_string(), v.iter().map(format_rational).collect()))
                .collect(),
            mode: mode.to_string(),
            joint: table
                .joint
                .iter()
                .map(|(c, v)| (c.to_string(), format_rational(v)))
                .collect(),
            vanishing: Vec::new(),
        }
    }
}

/// Convenience: rationals from small integer pairs.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
