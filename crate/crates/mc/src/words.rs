//! Normalized traces of words in sampled matrices.

use num_complex::Complex64;

use loopeq_core::{Letter, LetterKind, Monomial};

use crate::ensemble::MatrixEnsembleConfig;
use crate::error::{McError, Result};
use crate::haar::CMatrix;

/// One draw of the letters: unitaries with their adjoints, and the fixed
/// diagonals of the deterministic matrices.
pub struct Letters<'a> {
    pub unitaries: &'a [CMatrix],
    pub adjoints: &'a [CMatrix],
    pub diagonals: &'a [Option<Vec<f64>>],
}

/// Diagonals indexed by `family - 1`.
pub fn diagonals(cfg: &MatrixEnsembleConfig) -> Vec<Option<Vec<f64>>> {
    let top = cfg.deterministic.keys().copied().max().unwrap_or(0) as usize;
    (1..=top)
        .map(|i| cfg.deterministic.get(&(i as u16)).map(|m| m.diagonal(cfg.n)))
        .collect()
}

/// Checks that every letter of `word` exists in the ensemble.
pub fn check_word(cfg: &MatrixEnsembleConfig, word: &Monomial) -> Result<()> {
    for l in word.letters() {
        match l.kind {
            LetterKind::Det if !cfg.deterministic.contains_key(&l.index) => {
                return Err(McError::DimensionMismatch {
                    what: "deterministic matrix",
                    index: l.index,
                    available: cfg.deterministic.len(),
                })
            }
            LetterKind::U | LetterKind::UStar if l.index as usize > cfg.m => {
                return Err(McError::DimensionMismatch {
                    what: "unitary family",
                    index: l.index,
                    available: cfg.m,
                })
            }
            _ => {}
        }
    }
    Ok(())
}

/// Ordered product of `letters`; `None` for the empty product.
fn product(letters: &Letters<'_>, n: usize, word: &[Letter]) -> Option<CMatrix> {
    let mut acc: Option<CMatrix> = None;
    for l in word {
        let i = l.index as usize - 1;
        acc = Some(match (l.kind, acc) {
            (LetterKind::Det, None) => CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                letters.diagonals[i].as_ref().expect("checked").iter().map(|&d| Complex64::new(d, 0.0)),
            )),
            (LetterKind::Det, Some(mut m)) => {
                let d = letters.diagonals[i].as_ref().expect("checked");
                for (j, &x) in d.iter().enumerate() {
                    for v in m.column_mut(j).iter_mut() {
                        *v *= x;
                    }
                }
                m
            }
            (LetterKind::U, None) => letters.unitaries[i].clone(),
            (LetterKind::U, Some(m)) => m * &letters.unitaries[i],
            (LetterKind::UStar, None) => letters.adjoints[i].clone(),
            (LetterKind::UStar, Some(m)) => m * &letters.adjoints[i],
        });
    }
    acc
}

/// `(1/N) Tr(word)`; the word must have passed [`check_word`]. The word is
/// cut before its last unitary letter and `Tr(L R) = Σ L_ij R_ji` saves the
/// final matrix product.
pub fn normalized_trace(letters: &Letters<'_>, n: usize, word: &Monomial) -> Complex64 {
    let w = word.letters();
    let Some(cut) = w.iter().rposition(|l| l.is_unitary()) else {
        let mut diag = vec![1.0; n];
        for l in w {
            let d = letters.diagonals[l.index as usize - 1].as_ref().expect("checked");
            diag.iter_mut().zip(d).for_each(|(x, y)| *x *= y);
        }
        return Complex64::new(diag.iter().sum::<f64>() / n as f64, 0.0);
    };
    let right = product(letters, n, &w[cut..]).expect("non-empty");
    let trace = match product(letters, n, &w[..cut]) {
        None => right.trace(),
        Some(left) => left.iter().zip(right.transpose().iter()).map(|(a, b)| a * b).sum(),
    };
    trace / n as f64
}
