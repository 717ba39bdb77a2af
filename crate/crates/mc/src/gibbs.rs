//! Metropolis sampling of `exp(c · N Tr V) dU` and the orthogonal/unitary
//! comparison.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use loopeq_core::{Execution, Monomial, Potential};

use crate::ensemble::{Group, MatrixEnsembleConfig};
use crate::error::{McError, Result};
use crate::estimate::{draw, mean_and_error, stream, MCEstimate};
use crate::haar::{ginibre, orthonormalize, unitarity_defect, CMatrix};
use crate::predict::solver_prediction;
use crate::words::{check_word, diagonals, normalized_trace, Letters};

/// A potential with numeric coefficients: `V = Σ c · word`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericPotential {
    terms: Vec<(f64, Monomial)>,
}

impl NumericPotential {
    /// Binds the formal parameters of `v` to `t` (one value per label).
    pub fn bind(v: &Potential, t: &[f64]) -> Result<Self> {
        if t.len() != v.arity() {
            return Err(McError::Config(format!(
                "{} parameter values for {} labels",
                t.len(),
                v.arity()
            )));
        }
        let mut terms = Vec::new();
        for (j, &tj) in t.iter().enumerate() {
            for (m, c) in v.polynomial(j).terms() {
                terms.push((tj * c.to_f64().unwrap_or(0.0), m.clone()));
            }
        }
        Ok(NumericPotential { terms })
    }

    pub fn terms(&self) -> &[(f64, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == 0.0)
    }

    /// `(1/N) Tr V`, real part.
    fn normalized_trace(&self, letters: &Letters<'_>, n: usize) -> f64 {
        self.terms
            .iter()
            .map(|(c, w)| c * normalized_trace(letters, n, w).re)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsOptions {
    pub chains: usize,
    pub burn_in: usize,
    /// Metropolis steps per chain after burn-in.
    pub steps: usize,
    /// Record the observable every `thin` steps.
    pub thin: usize,
    pub target_acceptance: f64,
    pub initial_step: f64,
    pub reorthonormalize_every: usize,
    /// Batches per chain for the standard error.
    pub batches: usize,
    /// The density is `exp(coupling · N Tr V)`.
    pub coupling: f64,
}

impl Default for GibbsOptions {
    fn default() -> Self {
        GibbsOptions {
            chains: 8,
            burn_in: 2000,
            steps: 20000,
            thin: 10,
            target_acceptance: 0.4,
            initial_step: 0.5,
            reorthonormalize_every: 200,
            batches: 10,
            coupling: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsEstimate {
    pub estimate: MCEstimate,
    pub acceptance: f64,
    pub step: f64,
    /// Largest `|U U* - I|` entry seen before a re-orthonormalization.
    pub max_drift: f64,
}

struct ChainResult {
    values: Vec<Complex64>,
    accepted: usize,
    proposed: usize,
    step: f64,
    drift: f64,
}

/// Gibbs expectation of `(1/N) Tr P` by Metropolis chains. Each proposal
/// multiplies one `U_i` by `exp(ε H)` with `H` random anti-Hermitian (real
/// antisymmetric on the orthogonal group); `ε` is tuned during burn-in.
pub fn gibbs_moment(
    cfg: &MatrixEnsembleConfig,
    v: &NumericPotential,
    word: &Monomial,
    opts: &GibbsOptions,
    exec: Execution,
) -> Result<GibbsEstimate> {
    check_word(cfg, word)?;
    for (_, w) in v.terms() {
        check_word(cfg, w)?;
    }
    if opts.chains == 0 || opts.thin == 0 || opts.steps < opts.thin * opts.batches.max(1) {
        return Err(McError::Config("need chains > 0, thin > 0 and steps >= thin · batches".into()));
    }
    if cfg.m == 0 {
        return Err(McError::Config("the Gibbs sampler needs at least one unitary family".into()));
    }
    let ids: Vec<u64> = (0..opts.chains as u64).collect();
    let runs = exec.map(&ids, |&c| run_chain(cfg, v, word, opts, c));

    let mut batch_means = Vec::new();
    let mut all = Vec::new();
    let (mut accepted, mut proposed) = (0usize, 0usize);
    let mut step = 0.0;
    let mut drift: f64 = 0.0;
    for r in &runs {
        let per = (r.values.len() / opts.batches.max(1)).max(1);
        for chunk in r.values.chunks(per) {
            if chunk.len() == per {
                batch_means.push(chunk.iter().map(|z| z.re).sum::<f64>() / per as f64);
            }
        }
        all.extend_from_slice(&r.values);
        accepted += r.accepted;
        proposed += r.proposed;
        step += r.step / runs.len() as f64;
        drift = drift.max(r.drift);
    }
    let acceptance = accepted as f64 / proposed.max(1) as f64;
    // with V = 0 every proposal is accepted whatever the step size
    if !v.is_zero() && !(0.1..=0.9).contains(&acceptance) {
        return Err(McError::AcceptanceRateOutOfRange { rate: acceptance });
    }
    let mut estimate = MCEstimate::from_samples(&all);
    estimate.std_error = mean_and_error(&batch_means).1;
    Ok(GibbsEstimate {
        estimate,
        acceptance,
        step,
        max_drift: drift,
    })
}

fn run_chain(cfg: &MatrixEnsembleConfig, v: &NumericPotential, word: &Monomial, opts: &GibbsOptions, chain: u64) -> ChainResult {
    let n = cfg.n;
    let beta = opts.coupling * (n * n) as f64;
    let diag = diagonals(cfg);
    // chains draw their start from a stream disjoint from the sample streams
    let mut us = draw(cfg, (1 << 40) + chain);
    let mut rng = stream(cfg.seed ^ 0x9e37_79b9_7f4a_7c15, chain);
    let mut adj: Vec<CMatrix> = us.iter().map(|u| u.adjoint()).collect();
    let action = |us: &[CMatrix], adj: &[CMatrix]| {
        let letters = Letters {
            unitaries: us,
            adjoints: adj,
            diagonals: &diag,
        };
        beta * v.normalized_trace(&letters, n)
    };
    let mut s = action(&us, &adj);
    let mut eps = opts.initial_step;
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = ChainResult {
        values: Vec::with_capacity(opts.steps / opts.thin),
        accepted: 0,
        proposed: 0,
        step: 0.0,
        drift: 0.0,
    };
    let (mut window_acc, mut window) = (0usize, 0usize);
    for it in 0..opts.burn_in + opts.steps {
        let i = rng.random_range(0..cfg.m);
        let g = ginibre(n, cfg.group, &mut rng);
        let h = (&g - g.adjoint()) * Complex64::new(0.5 * scale * eps, 0.0);
        let proposal = &us[i] * h.exp();
        let old = std::mem::replace(&mut us[i], proposal);
        let old_adj = std::mem::replace(&mut adj[i], us[i].adjoint());
        let s_new = action(&us, &adj);
        let accept = s_new >= s || rng.random::<f64>().ln() < s_new - s;
        if accept {
            s = s_new;
        } else {
            us[i] = old;
            adj[i] = old_adj;
        }
        if it < opts.burn_in {
            window += 1;
            window_acc += usize::from(accept);
            if window == 50 {
                let rate = window_acc as f64 / window as f64;
                eps = (eps * (2.0 * (rate - opts.target_acceptance)).exp()).clamp(1e-4, 4.0);
                window = 0;
                window_acc = 0;
            }
        } else {
            out.proposed += 1;
            out.accepted += usize::from(accept);
            if (it - opts.burn_in + 1).is_multiple_of(opts.thin) {
                let letters = Letters {
                    unitaries: &us,
                    adjoints: &adj,
                    diagonals: &diag,
                };
                out.values.push(normalized_trace(&letters, n, word));
            }
        }
        if opts.reorthonormalize_every > 0 && (it + 1) % opts.reorthonormalize_every == 0 {
            for j in 0..us.len() {
                out.drift = out.drift.max(unitarity_defect(&us[j]));
                us[j] = orthonormalize(us[j].clone());
                adj[j] = us[j].adjoint();
            }
            s = action(&us, &adj);
        }
    }
    out.step = eps;
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub n: usize,
    pub unitary: GibbsEstimate,
    pub orthogonal: GibbsEstimate,
    pub prediction: f64,
    /// Additive finite-size allowance `c / N`; a calibration constant.
    pub allowance: f64,
    pub unitary_vs_orthogonal: bool,
    pub unitary_vs_prediction: bool,
    pub orthogonal_vs_prediction: bool,
}

impl UniversalityReport {
    pub fn all_agree(&self) -> bool {
        self.unitary_vs_orthogonal && self.unitary_vs_prediction && self.orthogonal_vs_prediction
    }
}

/// What to compare in [`orthogonal_universality`].
#[derive(Clone, Copy, Debug)]
pub struct Universality<'a> {
    pub potential: &'a Potential,
    pub t: &'a [f64],
    pub word: &'a Monomial,
    /// Truncation order of the solver prediction.
    pub order: usize,
    /// `c` in the `c / N` allowance.
    pub allowance_constant: f64,
}

/// Unitary chain with density `exp(N Tr V)` against the orthogonal chain
/// with `exp(N Tr V / 2)`; both should approach the same limit `mu_t(P)`.
pub fn orthogonal_universality(
    cfg: &MatrixEnsembleConfig,
    setup: &Universality<'_>,
    opts: &GibbsOptions,
    exec: Execution,
) -> Result<UniversalityReport> {
    let Universality { potential: v, t, word, order, allowance_constant } = *setup;
    let bound = NumericPotential::bind(v, t)?;
    let unitary_cfg = cfg.with_group(Group::Unitary);
    let orthogonal_cfg = cfg.with_group(Group::Orthogonal);
    let unitary = gibbs_moment(&unitary_cfg, &bound, word, opts, exec)?;
    let orthogonal = gibbs_moment(
        &orthogonal_cfg,
        &bound,
        word,
        &GibbsOptions {
            coupling: opts.coupling * 0.5,
            ..opts.clone()
        },
        exec,
    )?;
    let prediction = solver_prediction(cfg, v, t, word, order)?;
    let allowance = allowance_constant / cfg.n as f64;
    let (u, o) = (&unitary.estimate, &orthogonal.estimate);
    let combined = (u.std_error.powi(2) + o.std_error.powi(2)).sqrt();
    Ok(UniversalityReport {
        n: cfg.n,
        unitary_vs_orthogonal: (u.value - o.value).abs() <= 3.0 * combined + allowance,
        unitary_vs_prediction: u.agrees_with(prediction, 3.0, allowance),
        orthogonal_vs_prediction: o.agrees_with(prediction, 3.0, allowance),
        unitary,
        orthogonal,
        prediction,
        allowance,
    })
}
