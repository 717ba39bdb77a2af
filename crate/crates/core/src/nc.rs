//! Non-crossing partitions, Kreweras complements and Catalan numbers.

use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Set partition of `{0, .., n-1}`; blocks and their elements are sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NCPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    /// Normalizes and validates a partition. Must cover `0..n` exactly.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::normalized(n, blocks)?;
        if p.is_crossing() {
            return Err(Error::CrossingPartition(p.to_string()));
        }
        Ok(p)
    }

    /// Like [`NCPartition::new`] without the non-crossing requirement.
    pub fn normalized(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let mut seen = vec![false; n];
        for &x in blocks.iter().flatten() {
            if x >= n || seen[x] {
                return Err(Error::Config(format!("not a partition of {n} points")));
            }
            seen[x] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Config(format!("not a partition of {n} points")));
        }
        Ok(NCPartition { n, blocks })
    }

    pub fn full(n: usize) -> Self {
        NCPartition {
            n,
            blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    pub fn discrete(n: usize) -> Self {
        NCPartition {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_crossing(&self) -> bool {
        let mut label = vec![0usize; self.n];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &x in b {
                label[x] = bi;
            }
        }
        // a < b < c < d with a, c in one block and b, d in another
        for a in 0..self.n {
            for b in a + 1..self.n {
                if label[b] == label[a] {
                    continue;
                }
                for c in b + 1..self.n {
                    if label[c] != label[a] {
                        continue;
                    }
                    for d in c + 1..self.n {
                        if label[d] == label[b] {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Kreweras complement: the cycles of `π^{-1} γ` with `γ = (0 1 .. n-1)`,
    /// which places each complement point right after the point it labels.
    pub fn kreweras(&self) -> Result<NCPartition> {
        if self.is_crossing() {
            return Err(Error::CrossingPartition(self.to_string()));
        }
        let n = self.n;
        // π^{-1}: each element maps to its predecessor inside its block
        let mut inv = vec![0usize; n];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                let prev = b[(i + b.len() - 1) % b.len()];
                inv[x] = prev;
            }
        }
        let sigma: Vec<usize> = (0..n).map(|x| inv[(x + 1) % n]).collect();
        let mut visited = vec![false; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                cycle.push(x);
                x = sigma[x];
            }
            blocks.push(cycle);
        }
        NCPartition::normalized(n, blocks)
    }

    /// Rotation `x -> x + by (mod n)`.
    pub fn rotate(&self, by: usize) -> NCPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| (x + by) % self.n).collect())
            .collect();
        NCPartition::normalized(self.n, blocks).expect("rotation preserves partitions")
    }
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let inner: Vec<String> = b.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        f.write_str("}")
    }
}

/// All of `NC(n)`, built by choosing the block of the first point and
/// partitioning each gap independently.
pub fn noncrossing_partitions(n: usize) -> Vec<NCPartition> {
    let mut out: Vec<NCPartition> = nc_range(0, n)
        .into_iter()
        .map(|blocks| NCPartition::normalized(n, blocks).expect("valid by construction"))
        .collect();
    out.sort();
    out
}

fn nc_range(a: usize, b: usize) -> Vec<Vec<Vec<usize>>> {
    if a >= b {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    extend_block(vec![a], b, &mut Vec::new(), &mut out);
    out
}

/// Extends the block whose last element is `block.last()`, collecting the
/// partitions of the gaps seen so far in `gaps`.
fn extend_block(
    block: Vec<usize>,
    end: usize,
    gaps: &mut Vec<Vec<Vec<Vec<usize>>>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    let last = *block.last().expect("block is never empty");
    // close the block: the tail after `last` is partitioned freely
    gaps.push(nc_range(last + 1, end));
    let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![block.clone()]];
    for options in gaps.iter() {
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for base in &acc {
            for opt in options {
                let mut p = base.clone();
                p.extend(opt.iter().cloned());
                next.push(p);
            }
        }
        acc = next;
    }
    out.extend(acc);
    gaps.pop();
    for nxt in last + 1..end {
        gaps.push(nc_range(last + 1, nxt));
        let mut grown = block.clone();
        grown.push(nxt);
        extend_block(grown, end, gaps, out);
        gaps.pop();
    }
}

static CATALAN: Mutex<Vec<BigInt>> = Mutex::new(Vec::new());

/// Catalan numbers from `C_0 = 1`, `C_{k+1} = Σ_{p<=k} C_p C_{k-p}`, memoized.
pub fn catalan(k: usize) -> BigInt {
    let mut cache = CATALAN.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(BigInt::one());
    }
    while cache.len() <= k {
        let m = cache.len() - 1;
        let mut next = BigInt::zero();
        for p in 0..=m {
            next += &cache[p] * &cache[m - p];
        }
        cache.push(next);
    }
    cache[k].clone()
}
