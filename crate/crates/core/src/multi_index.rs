use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// Exponent vector `k = (k_1, ..., k_n)` over the potential parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(k: Vec<u32>) -> Self {
        MultiIndex(k)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `k - 1_j`, or `None` when `k_j = 0`.
    pub fn minus_unit(&self, j: usize) -> Option<MultiIndex> {
        let mut v = self.0.clone();
        if v[j] == 0 {
            return None;
        }
        v[j] -= 1;
        Some(MultiIndex(v))
    }

    pub fn plus_unit(&self, j: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[j] += 1;
        MultiIndex(v)
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `k! = ∏ k_i!`.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &k| acc * factorial(k))
    }

    /// `∏ binom(k_i, l_i)` for `l <= k` componentwise.
    pub fn binomial(&self, lower: &MultiIndex) -> BigInt {
        self.0
            .iter()
            .zip(&lower.0)
            .fold(BigInt::one(), |acc, (&k, &l)| acc * binomial(k, l))
    }

    /// Every `l` with `0 <= l <= k` componentwise, in lexicographic order.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &k in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=k).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices of arity `n` with `|k| <= order`, ordered by total
    /// then lexicographically.
    pub fn up_to(n: usize, order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for total in 0..=order {
            compositions(n, total as u32, &mut Vec::new(), &mut out);
        }
        out
    }
}

fn compositions(n: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == n {
        prefix.push(total);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    if n == 0 {
        if total == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    for x in (0..=total).rev() {
        prefix.push(x);
        compositions(n, total - x, prefix, out);
        prefix.pop();
    }
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, x| acc * x)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Config(format!("bad multi-index `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        // number of k in N^n with |k| <= K is binom(n + K, n)
        assert_eq!(MultiIndex::up_to(2, 5).len(), 21);
        assert_eq!(MultiIndex::up_to(1, 4).len(), 5);
        assert_eq!(MultiIndex::up_to(3, 2).len(), 10);
        assert_eq!(MultiIndex::new(vec![2, 1]).below().len(), 6);
    }

    #[test]
    fn factorials_and_binomials() {
        let k = MultiIndex::new(vec![3, 2]);
        assert_eq!(k.factorial(), BigInt::from(12));
        assert_eq!(k.binomial(&MultiIndex::new(vec![1, 1])), BigInt::from(6));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(k.minus_unit(1), Some(MultiIndex::new(vec![3, 1])));
        assert_eq!(MultiIndex::zero(2).minus_unit(0), None);
    }

    #[test]
    fn text_form() {
        let k: MultiIndex = "1,0,2".parse().unwrap();
        assert_eq!(k, MultiIndex::new(vec![1, 0, 2]));
        assert_eq!(k.to_string(), "1,0,2");
        assert!("1,x".parse::<MultiIndex>().is_err());
    }
}
