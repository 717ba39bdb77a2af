//! Ensemble configuration and the deterministic diagonal matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use loopeq_core::tau::MomentTable;
use loopeq_core::weight::parse_rational;

use crate::error::{McError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    #[default]
    Unitary,
    Orthogonal,
}

/// A finitely supported probability measure with rational atoms and masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: Vec<BigRational>,
    masses: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub atoms: Vec<String>,
    pub masses: Vec<String>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<BigRational>, masses: Vec<BigRational>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != masses.len() {
            return Err(McError::Config("a measure needs as many masses as atoms, at least one".into()));
        }
        if masses.iter().any(|m| !m.is_positive()) {
            return Err(McError::Config("masses must be positive".into()));
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(McError::Config(format!("masses sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { atoms, masses })
    }

    /// Symmetric Bernoulli `(δ_{-1} + δ_{+1}) / 2`.
    pub fn bernoulli() -> Self {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        DiscreteMeasure::new(
            vec![BigRational::from_integer((-1).into()), BigRational::one()],
            vec![half.clone(), half],
        )
        .expect("valid")
    }

    pub fn from_spec(spec: &MeasureSpec) -> Result<Self> {
        let parse = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<std::result::Result<Vec<_>, _>>();
        DiscreteMeasure::new(parse(&spec.atoms)?, parse(&spec.masses)?)
    }

    pub fn to_spec(&self) -> MeasureSpec {
        let fmt = |v: &[BigRational]| v.iter().map(loopeq_core::weight::format_rational).collect();
        MeasureSpec {
            atoms: fmt(&self.atoms),
            masses: fmt(&self.masses),
        }
    }

    /// Exact moments `m_1..m_depth`.
    pub fn moments(&self, depth: usize) -> Vec<BigRational> {
        (1..=depth)
            .map(|k| {
                self.atoms
                    .iter()
                    .zip(&self.masses)
                    .map(|(a, m)| num_traits::pow(a.clone(), k) * m)
                    .sum()
            })
            .collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Diagonal of the `n x n` quantile embedding, ascending. Atom `a` gets
    /// `floor(n · mass)` entries; the rounding remainder goes to the largest
    /// atom.
    pub fn diagonal(&self, n: usize) -> Vec<f64> {
        let mut order: Vec<usize> = (0..self.atoms.len()).collect();
        order.sort_by(|&i, &j| self.atoms[i].cmp(&self.atoms[j]));
        let nn = BigRational::from_integer(BigInt::from(n));
        let mut counts: Vec<usize> = order
            .iter()
            .map(|&i| (&self.masses[i] * &nn).floor().to_integer().to_usize().unwrap_or(0))
            .collect();
        let used: usize = counts.iter().sum();
        *counts.last_mut().expect("non-empty") += n - used;
        let mut out = Vec::with_capacity(n);
        for (&i, &c) in order.iter().zip(&counts) {
            let v = self.atoms[i].to_f64().unwrap_or(0.0);
            out.extend(std::iter::repeat_n(v, c));
        }
        out
    }
}

/// JSON form of an ensemble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n: usize,
    #[serde(default)]
    pub group: Group,
    /// Number of unitary (or orthogonal) families.
    pub m: usize,
    pub deterministic: BTreeMap<String, MeasureSpec>,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixEnsembleConfig {
    pub n: usize,
    pub group: Group,
    pub m: usize,
    pub deterministic: BTreeMap<u16, DiscreteMeasure>,
    pub seed: u64,
    pub samples: usize,
}

impl MatrixEnsembleConfig {
    pub fn new(n: usize, group: Group, m: usize, seed: u64, samples: usize) -> Result<Self> {
        if n < 2 {
            return Err(McError::Config(format!("matrix size must be at least 2, got {n}")));
        }
        Ok(MatrixEnsembleConfig {
            n,
            group,
            m,
            deterministic: BTreeMap::new(),
            seed,
            samples,
        })
    }

    pub fn with_measure(mut self, index: u16, measure: DiscreteMeasure) -> Self {
        self.deterministic.insert(index, measure);
        self
    }

    pub fn from_spec(spec: &EnsembleSpec) -> Result<Self> {
        let mut cfg = MatrixEnsembleConfig::new(spec.n, spec.group, spec.m, spec.seed, spec.samples)?;
        for (key, m) in &spec.deterministic {
            let index: u16 = key
                .parse()
                .ok()
                .filter(|&i| i > 0)
                .ok_or_else(|| McError::Config(format!("bad family index `{key}`")))?;
            cfg = cfg.with_measure(index, DiscreteMeasure::from_spec(m)?);
        }
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: EnsembleSpec =
            serde_json::from_str(text).map_err(|e| McError::Config(format!("ensemble config: {e}")))?;
        MatrixEnsembleConfig::from_spec(&spec)
    }

    pub fn to_spec(&self) -> EnsembleSpec {
        EnsembleSpec {
            n: self.n,
            group: self.group,
            m: self.m,
            deterministic: self
                .deterministic
                .iter()
                .map(|(i, m)| (i.to_string(), m.to_spec()))
                .collect(),
            seed: self.seed,
            samples: self.samples,
        }
    }

    /// Exact limiting moments of the declared measures, for the solver.
    pub fn moment_table(&self, depth: usize) -> MomentTable {
        self.deterministic
            .iter()
            .fold(MomentTable::new(), |t, (&i, m)| t.with_marginal(i, m.moments(depth)))
    }

    /// Largest spectral radius over the deterministic matrices.
    pub fn spectral_radius(&self) -> f64 {
        self.deterministic
            .values()
            .map(DiscreteMeasure::spectral_radius)
            .fold(0.0, f64::max)
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        let mut c = MatrixEnsembleConfig::new(n, self.group, self.m, self.seed, self.samples)?;
        c.deterministic = self.deterministic.clone();
        Ok(c)
    }

    pub fn with_group(&self, group: Group) -> Self {
        MatrixEnsembleConfig {
            group,
            ..self.clone()
        }
    }
}
