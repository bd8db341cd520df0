//! Independent validation targets for the closed form.
//!
//! Both routes evaluate the outage in its un-expanded integral form: the
//! expectation over the aggregate interference power `Y` of the exact inner
//! Gamma CDF. Neither touches the composition/expansion machinery of the
//! closed form, so a bug there cannot self-confirm.
//!
//! * [`outage_semi_analytic`] samples only the K-dimensional outer
//!   expectation; the inner CDF is exact, so the variance sits far below
//!   plain indicator Monte Carlo, and non-integer signal shapes are fine.
//! * [`outage_quadrature_k1`] is fully deterministic adaptive Gauss-Kronrod
//!   integration for the single-interferer case.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::SindrCoefficients;
use crate::montecarlo::draw_gamma;
use crate::special::{log_gamma, regularized_lower_gamma};

/// Fixed substream granularity; the result depends only on (samples, seed).
const BATCH: u64 = 1 << 16;

/// Semi-analytic outage estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub p_out: f64,
    /// Standard error of the sampled outer expectation; 0 for the
    /// deterministic K = 0 case.
    pub stderr: f64,
    /// Outer samples actually drawn (0 when no sampling was needed).
    pub samples: u64,
    pub seed: u64,
}

/// Outage by averaging the exact inner CDF over sampled interference powers:
/// `1 - mean_s Q(m0, v (Sigma + Y_s) / (beta0 (a - b v)))`.
pub fn outage_semi_analytic(
    coeffs: &SindrCoefficients,
    threshold: f64,
    samples: u64,
    seed: u64,
) -> Result<OracleEstimate> {
    if !(threshold >= 0.0) || !threshold.is_finite() {
        return Err(Error::Domain(format!(
            "threshold must be finite and >= 0, got {threshold}"
        )));
    }
    if samples == 0 {
        return Err(Error::Validation("samples must be >= 1".into()));
    }
    let margin = coeffs.a - coeffs.b * threshold;
    if threshold > 0.0 && margin <= 0.0 {
        return Ok(OracleEstimate {
            p_out: 1.0,
            stderr: 0.0,
            samples: 0,
            seed,
        });
    }
    let m0 = coeffs.signal_gamma.shape;
    let rate = threshold / (coeffs.signal_gamma.scale * margin);
    if threshold == 0.0 || coeffs.interf_gammas.is_empty() {
        // No outer expectation: Y = 0 collapses it, and v = 0 zeroes the
        // inner CDF regardless of Y.
        return Ok(OracleEstimate {
            p_out: regularized_lower_gamma(m0, rate * coeffs.sigma_total)?,
            stderr: 0.0,
            samples: 0,
            seed,
        });
    }

    let batches = samples.div_ceil(BATCH);
    // Per-batch partial sums, folded in batch order so the result is
    // bit-identical regardless of worker scheduling.
    let partials: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let in_batch = BATCH.min(samples - batch * BATCH);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..in_batch {
                let mut y = 0.0;
                for g in &coeffs.interf_gammas {
                    y += draw_gamma(g.shape, g.scale, &mut rng);
                }
                // P + Q are complements; accumulate the outage-side value.
                let p = regularized_lower_gamma(m0, rate * (coeffs.sigma_total + y))
                    .expect("validated shape");
                sum += p;
                sum_sq += p * p;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials
        .into_iter()
        .fold((0.0, 0.0), |(s, q), (bs, bq)| (s + bs, q + bq));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(OracleEstimate {
        p_out: mean.clamp(0.0, 1.0),
        stderr: (var / n).sqrt(),
        samples,
        seed,
    })
}

/// Default relative tolerance of [`outage_quadrature_k1`].
pub const QUADRATURE_REL_TOL: f64 = 1e-10;

/// Deterministic single-interferer outage:
/// `int_0^inf P(m0, v (Sigma + y) / (beta0 (a - b v))) f_Gamma(y) dy`
/// by adaptive 15-point Gauss-Kronrod bisection to `rel_tol`.
pub fn outage_quadrature_k1(
    coeffs: &SindrCoefficients,
    threshold: f64,
    rel_tol: f64,
) -> Result<f64> {
    if coeffs.num_interferers() != 1 {
        return Err(Error::Domain(format!(
            "quadrature route handles exactly one interferer, got {}",
            coeffs.num_interferers()
        )));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!(
            "relative tolerance must be > 0, got {rel_tol}"
        )));
    }
    if !(threshold >= 0.0) || !threshold.is_finite() {
        return Err(Error::Domain(format!(
            "threshold must be finite and >= 0, got {threshold}"
        )));
    }
    if threshold == 0.0 {
        return Ok(0.0);
    }
    let margin = coeffs.a - coeffs.b * threshold;
    if margin <= 0.0 {
        return Ok(1.0);
    }
    let m0 = coeffs.signal_gamma.shape;
    let rate = threshold / (coeffs.signal_gamma.scale * margin);
    let (m1, beta1) = (coeffs.interf_gammas[0].shape, coeffs.interf_gammas[0].scale);
    let sigma = coeffs.sigma_total;
    let ln_norm = -log_gamma(m1)? - m1 * beta1.ln();

    // The Gamma weight beyond u* = m + 45 sqrt(m) + 60 is below ~1e-40.
    let upper = beta1 * (m1 + 45.0 * m1.sqrt() + 60.0);

    let integral = if m1 >= 1.0 {
        let f = |y: f64| {
            let ln_pdf = (m1 - 1.0) * y.ln() - y / beta1 + ln_norm;
            regularized_lower_gamma(m0, rate * (sigma + y)).expect("validated shape")
                * ln_pdf.exp()
        };
        adaptive_gk15(&f, 0.0, upper, beta1 * m1, rel_tol)?
    } else {
        // Substitute y = u^2 to absorb the integrable endpoint singularity.
        let f = |u: f64| {
            let y = u * u;
            let ln_pdf = (2.0 * m1 - 1.0) * u.ln() - y / beta1 + ln_norm + 2f64.ln();
            regularized_lower_gamma(m0, rate * (sigma + y)).expect("validated shape")
                * ln_pdf.exp()
        };
        adaptive_gk15(&f, 0.0, upper.sqrt(), (beta1 * m1).sqrt(), rel_tol)?
    };
    Ok(integral.clamp(0.0, 1.0))
}

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 panel; returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            // Odd Kronrod indices carry the embedded Gauss nodes.
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    res_asc *= half.abs();
    let raw_err = ((res_kronrod - res_gauss) * half).abs();
    let err = if res_asc != 0.0 && raw_err != 0.0 {
        res_asc * 1.0f64.min((200.0 * raw_err / res_asc).powf(1.5))
    } else {
        raw_err
    };
    (res_kronrod * half, err)
}

/// Bisection-adaptive GK15 on [a, b], seeded with a split at the integrand
/// mode so the first panels already see the mass.
fn adaptive_gk15<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    mode_hint: f64,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_PANELS: usize = 4096;
    struct Panel {
        lo: f64,
        hi: f64,
        value: f64,
        error: f64,
    }
    let mut panels: Vec<Panel> = Vec::new();
    let mut seeds = vec![a];
    for split in [mode_hint * 0.5, mode_hint, mode_hint * 2.0, mode_hint * 8.0] {
        if split > a && split < b {
            seeds.push(split);
        }
    }
    seeds.push(b);
    for pair in seeds.windows(2) {
        let (value, error) = gk15(f, pair[0], pair[1]);
        panels.push(Panel {
            lo: pair[0],
            hi: pair[1],
            value,
            error,
        });
    }
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= rel_tol * total.abs() + f64::MIN_POSITIVE {
            return Ok(total);
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "error {err:.3e} over value {total:.6e} after {} panels \
                 (requested rel_tol {rel_tol:.1e})",
                panels.len()
            )));
        }
        // Bisect the worst panel (first of any ties, so runs are repeatable).
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.error.partial_cmp(&y.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let Panel { lo, hi, .. } = panels[worst];
        let mid = 0.5 * (lo + hi);
        let (lv, le) = gk15(f, lo, mid);
        let (rv, re) = gk15(f, mid, hi);
        panels[worst] = Panel {
            lo,
            hi: mid,
            value: lv,
            error: le,
        };
        panels.push(Panel {
            lo: mid,
            hi,
            value: rv,
            error: re,
        });
    }
}
