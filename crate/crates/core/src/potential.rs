//! Potentials `V = Σ_j t_j Q_j` where each label `j` collects the monomials
//! sharing one formal parameter.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Polynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialTerm {
    pub label: String,
    pub word: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub terms: Vec<PotentialTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    labels: Vec<String>,
    /// Monomials of each label, in declaration order.
    terms: Vec<Vec<Monomial>>,
    polys: Vec<Polynomial>,
    max_degree: usize,
}

impl Potential {
    /// The zero potential (no parameters).
    pub fn zero() -> Self {
        Potential::unchecked(Vec::<(String, Monomial)>::new())
    }

    /// Builds and validates a potential: every label's polynomial must be
    /// fixed by `*` up to cyclic equivalence.
    pub fn new<S: Into<String>>(terms: impl IntoIterator<Item = (S, Monomial)>) -> Result<Self> {
        let p = Potential::unchecked(terms);
        p.validate()?;
        Ok(p)
    }

    /// Skips the self-adjointness check. The recursion is well defined for
    /// any potential; only real-valued traces need the check.
    pub fn unchecked<S: Into<String>>(terms: impl IntoIterator<Item = (S, Monomial)>) -> Self {
        let mut labels: Vec<String> = Vec::new();
        let mut grouped: Vec<Vec<Monomial>> = Vec::new();
        for (label, word) in terms {
            let label = label.into();
            let j = match labels.iter().position(|l| *l == label) {
                Some(j) => j,
                None => {
                    labels.push(label);
                    grouped.push(Vec::new());
                    labels.len() - 1
                }
            };
            grouped[j].push(word);
        }
        let polys = grouped
            .iter()
            .map(|words| {
                let mut p = Polynomial::zero();
                for w in words {
                    p.add_term(w.clone(), BigRational::one());
                }
                p
            })
            .collect();
        let max_degree = grouped.iter().flatten().map(Monomial::len).max().unwrap_or(0);
        Potential {
            labels,
            terms: grouped,
            polys,
            max_degree,
        }
    }

    pub fn from_config(cfg: &PotentialConfig) -> Result<Self> {
        let terms = cfg
            .terms
            .iter()
            .map(|t| Ok((t.label.clone(), t.word.parse::<Monomial>()?)))
            .collect::<Result<Vec<_>>>()?;
        Potential::new(terms)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: PotentialConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("potential config: {e}")))?;
        Potential::from_config(&cfg)
    }

    pub fn to_config(&self) -> PotentialConfig {
        PotentialConfig {
            terms: self
                .labels
                .iter()
                .zip(&self.terms)
                .flat_map(|(l, ws)| {
                    ws.iter().map(move |w| PotentialTerm {
                        label: l.clone(),
                        word: w.to_string(),
                    })
                })
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        for (label, q) in self.labels.iter().zip(&self.polys) {
            if q.cyclic_reduction() != q.star().cyclic_reduction() {
                let missing = q
                    .terms()
                    .map(|(w, _)| w)
                    .find(|w| {
                        !q.terms()
                            .any(|(v, _)| v.cyclic_class() == w.star().cyclic_class())
                    })
                    .map(|w| format!("the adjoint of `{w}` under label `{label}` is missing"))
                    .unwrap_or_else(|| format!("label `{label}` is unbalanced"));
                return Err(Error::NotSelfAdjoint(missing));
            }
        }
        Ok(())
    }

    /// Number of formal parameters.
    pub fn arity(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `Q_j`, the sum of the monomials with label `j`.
    pub fn polynomial(&self, j: usize) -> &Polynomial {
        &self.polys[j]
    }

    pub fn monomials(&self, j: usize) -> &[Monomial] {
        &self.terms[j]
    }

    /// `D`, the largest monomial length.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Largest index of a unitary letter.
    pub fn unitary_families(&self) -> u16 {
        self.terms
            .iter()
            .flatten()
            .flat_map(|w| w.letters())
            .filter(|l| l.is_unitary())
            .map(|l| l.index)
            .max()
            .unwrap_or(0)
    }

    /// Largest family index mentioned by the potential.
    pub fn max_index(&self) -> u16 {
        self.polys.iter().map(Polynomial::max_index).max().unwrap_or(0)
    }
}
