//! Haar averages of normalized traces and classical cumulants.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use loopeq_core::{Execution, Monomial};

use crate::ensemble::MatrixEnsembleConfig;
use crate::error::{McError, Result};
use crate::haar::{sample_haar, CMatrix};
use crate::words::{check_word, diagonals, normalized_trace, Letters};

/// Mean with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples_used: usize,
    /// Largest `|Im (1/N) Tr P|` seen over the samples.
    pub max_imaginary: f64,
}

impl MCEstimate {
    pub fn from_samples(values: &[Complex64]) -> Self {
        let re: Vec<f64> = values.iter().map(|z| z.re).collect();
        let (value, std_error) = mean_and_error(&re);
        MCEstimate {
            value,
            std_error,
            samples_used: values.len(),
            max_imaginary: values.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        }
    }

    /// `|value - target| <= sigmas · std_error + allowance`.
    pub fn agrees_with(&self, target: f64, sigmas: f64, allowance: f64) -> bool {
        (self.value - target).abs() <= sigmas * self.std_error + allowance
    }
}

/// Sample mean and the standard error of the mean.
pub fn mean_and_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Random stream for one sample: depends on `(seed, id)` only, so results do
/// not depend on how samples are spread over workers.
pub fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// One independent draw of the `m` unitaries.
pub fn draw(cfg: &MatrixEnsembleConfig, id: u64) -> Vec<CMatrix> {
    let mut rng = stream(cfg.seed, id);
    (0..cfg.m).map(|_| sample_haar(cfg.n, cfg.group, &mut rng)).collect()
}

/// `(1/N) Tr P` for every sample, in sample order.
pub fn sample_traces(cfg: &MatrixEnsembleConfig, words: &[Monomial], exec: Execution) -> Result<Vec<Vec<Complex64>>> {
    for w in words {
        check_word(cfg, w)?;
    }
    let diag = diagonals(cfg);
    let ids: Vec<u64> = (0..cfg.samples as u64).collect();
    Ok(exec.map(&ids, |&id| {
        let us = draw(cfg, id);
        let adj: Vec<CMatrix> = us.iter().map(|u| u.adjoint()).collect();
        let letters = Letters {
            unitaries: &us,
            adjoints: &adj,
            diagonals: &diag,
        };
        words.iter().map(|w| normalized_trace(&letters, cfg.n, w)).collect()
    }))
}

/// Haar average of `(1/N) Tr P` over `cfg.samples` draws.
pub fn empirical_moment(cfg: &MatrixEnsembleConfig, word: &Monomial, exec: Execution) -> Result<MCEstimate> {
    Ok(empirical_moments(cfg, std::slice::from_ref(word), exec)?.remove(0))
}

/// Several words on the same draws.
pub fn empirical_moments(cfg: &MatrixEnsembleConfig, words: &[Monomial], exec: Execution) -> Result<Vec<MCEstimate>> {
    if cfg.samples == 0 {
        return Err(McError::Config("at least one sample is needed".into()));
    }
    let traces = sample_traces(cfg, words, exec)?;
    Ok((0..words.len())
        .map(|j| {
            let column: Vec<Complex64> = traces.iter().map(|t| t[j]).collect();
            MCEstimate::from_samples(&column)
        })
        .collect())
}

/// Classical cumulants `C_1..C_order` (`order <= 4`) of a scalar sample,
/// from population central moments.
pub fn cumulants_classical(xs: &[f64], order: usize) -> Result<Vec<f64>> {
    if order > 4 {
        return Err(McError::Config(format!("classical cumulants are provided up to order 4, got {order}")));
    }
    if xs.is_empty() {
        return Err(McError::Config("empty sample".into()));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let central = |p: i32| xs.iter().map(|x| (x - mean).powi(p)).sum::<f64>() / n;
    let (m2, m3, m4) = (central(2), central(3), central(4));
    let all = [mean, m2, m3, m4 - 3.0 * m2 * m2];
    Ok(all[..order].to_vec())
}

/// Variance of `(1/N) Tr P` under Haar at each size in `sizes`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationReport {
    pub sizes: Vec<usize>,
    pub variances: Vec<f64>,
    /// `N^2 · variance`, roughly constant when fluctuations decay like `N^-2`.
    pub scaled: Vec<f64>,
    pub decreasing: bool,
}

pub fn fluctuation_decay(cfg: &MatrixEnsembleConfig, word: &Monomial, sizes: &[usize], exec: Execution) -> Result<FluctuationReport> {
    let mut variances = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let c = cfg.with_n(n)?;
        let traces = sample_traces(&c, std::slice::from_ref(word), exec)?;
        let re: Vec<f64> = traces.iter().map(|t| t[0].re).collect();
        variances.push(cumulants_classical(&re, 2)?[1]);
    }
    let scaled = sizes.iter().zip(&variances).map(|(&n, v)| v * (n * n) as f64).collect();
    let decreasing = variances.windows(2).all(|w| w[1] < w[0]);
    Ok(FluctuationReport {
        sizes: sizes.to_vec(),
        variances,
        scaled,
        decreasing,
    })
}
