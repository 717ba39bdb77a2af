//! Solver predictions for an ensemble. The solver runs with formal tau and
//! each face generator is then evaluated on the ensemble's own diagonal
//! matrices, so commuting deterministic matrices are handled exactly.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use loopeq_core::{Execution, Monomial, MultiIndex, Potential, SeriesTable, TauState, Weight};

use crate::ensemble::MatrixEnsembleConfig;
use crate::error::{McError, Result};
use crate::words::{check_word, diagonals};

/// `(1/N) Tr` of a deterministic word on the ensemble's diagonals.
pub fn det_trace(cfg: &MatrixEnsembleConfig, word: &Monomial) -> Result<f64> {
    if !word.is_det() {
        return Err(McError::Core(loopeq_core::Error::NotDetWord(word.to_string())));
    }
    check_word(cfg, word)?;
    let diag = diagonals(cfg);
    let mut acc = vec![1.0; cfg.n];
    for l in word.letters() {
        let d = diag[l.index as usize - 1].as_ref().expect("checked");
        acc.iter_mut().zip(d).for_each(|(x, y)| *x *= y);
    }
    Ok(acc.iter().sum::<f64>() / cfg.n as f64)
}

/// A formal weight with every generator replaced by its [`det_trace`].
pub fn evaluate(cfg: &MatrixEnsembleConfig, w: &Weight) -> Result<f64> {
    let mut total = 0.0;
    for (m, c) in w.terms() {
        let mut term = c.to_f64().unwrap_or(f64::NAN);
        for (g, e) in m.factors() {
            let word = Monomial::from_letters(g.letters().iter().copied());
            term *= det_trace(cfg, &word)?.powi(*e as i32);
        }
        total += term;
    }
    Ok(total)
}

/// Formal coefficients `mu^k(P)`, `|k| <= order`.
pub fn formal_series(v: &Potential, word: &Monomial, order: usize) -> Result<BTreeMap<MultiIndex, Weight>> {
    let table = SeriesTable::new(v.clone(), TauState::formal());
    Ok(table.series(word, order, Execution::Sequential)?)
}

/// `Σ_{|k| <= order} t^k / k! · mu^k(P)` on this ensemble.
pub fn solver_prediction(cfg: &MatrixEnsembleConfig, v: &Potential, t: &[f64], word: &Monomial, order: usize) -> Result<f64> {
    if t.len() != v.arity() {
        return Err(McError::Config(format!("{} parameter values for {} labels", t.len(), v.arity())));
    }
    let mut total = 0.0;
    for (k, w) in formal_series(v, word, order)? {
        let mono: f64 = k.components().iter().zip(t).map(|(&kj, &tj)| tj.powi(kj as i32)).product();
        total += evaluate(cfg, &w)? * mono / k.factorial().to_f64().unwrap_or(f64::INFINITY);
    }
    Ok(total)
}

/// Haar limit `mu^0(P)` at `V = 0`.
pub fn free_limit(cfg: &MatrixEnsembleConfig, word: &Monomial) -> Result<f64> {
    solver_prediction(cfg, &Potential::zero(), &[], word, 0)
}
