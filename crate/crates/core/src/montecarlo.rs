//! Indicator Monte Carlo over the canonical Gamma powers.
//!
//! Trials are partitioned into fixed-size batches; batch `n` draws from a
//! ChaCha substream selected by `(seed, n)`, so the estimate is bit-identical
//! for a given `(seed, trials, batch_size)` no matter how batches are
//! scheduled across workers. Batch outage counts are integers and merge
//! associatively.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::model::SindrCoefficients;

/// Trial budget and substream layout of one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Substream granularity; part of the reproducibility contract.
    pub batch_size: u64,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64, batch_size: u64) -> crate::Result<Self> {
        if trials == 0 || batch_size == 0 {
            return Err(crate::Error::Validation(
                "trials and batch_size must be >= 1".into(),
            ));
        }
        Ok(Self {
            trials,
            seed,
            batch_size,
        })
    }
}

/// Empirical outage probability with its binomial plug-in standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    /// sqrt(p (1 - p) / trials).
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// One exact Gamma(shape, scale) variate (Marsaglia-Tsang rejection).
/// Requires `shape >= 0.5`, `scale > 0`, as validated upstream.
pub fn draw_gamma<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, scale)
        .expect("validated Gamma parameters")
        .sample(rng)
}

/// One SINDR realization `a X / (b X + sum_k Y_k + sigma_total)`.
pub fn sindr_sample<R: Rng + ?Sized>(coeffs: &SindrCoefficients, rng: &mut R) -> f64 {
    let x = draw_gamma(coeffs.signal_gamma.shape, coeffs.signal_gamma.scale, rng);
    let mut denom = coeffs.b * x + coeffs.sigma_total;
    for g in &coeffs.interf_gammas {
        denom += draw_gamma(g.shape, g.scale, rng);
    }
    coeffs.a * x / denom
}

fn substream(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// Estimate `Pr[gamma < threshold]` over `config.trials` realizations.
pub fn estimate_outage(
    coeffs: &SindrCoefficients,
    threshold: f64,
    config: &McConfig,
) -> OutageEstimate {
    estimate_outage_curve(coeffs, &[threshold], config)[0]
}

/// Threshold the same realizations against several values at once; the
/// estimates share every sample, so they are exactly non-decreasing in `v`.
pub fn estimate_outage_curve(
    coeffs: &SindrCoefficients,
    thresholds: &[f64],
    config: &McConfig,
) -> Vec<OutageEstimate> {
    let batches = config.trials.div_ceil(config.batch_size);
    let counts = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = substream(config.seed, batch);
            let in_batch = config
                .batch_size
                .min(config.trials - batch * config.batch_size);
            let mut counts = vec![0u64; thresholds.len()];
            for _ in 0..in_batch {
                let gamma = sindr_sample(coeffs, &mut rng);
                for (count, &v) in counts.iter_mut().zip(thresholds) {
                    *count += u64::from(gamma < v);
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; thresholds.len()],
            |mut acc, item| {
                for (a, b) in acc.iter_mut().zip(item) {
                    *a += b;
                }
                acc
            },
        );
    counts
        .into_iter()
        .map(|count| {
            let p_hat = count as f64 / config.trials as f64;
            OutageEstimate {
                p_hat,
                stderr: (p_hat * (1.0 - p_hat) / config.trials as f64).sqrt(),
                trials: config.trials,
                seed: config.seed,
            }
        })
        .collect()
}
