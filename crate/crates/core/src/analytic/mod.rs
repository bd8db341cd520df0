//! Exact closed-form outage probability.
//!
//! For integer signal shape `m0` the outage `Pr[a X / (b X + Y + S) < v]`
//! admits a finite expansion: an incomplete-gamma series over `q < m0`, a
//! binomial split of `(S + y)^q`, and a multinomial sum over the weak
//! compositions of each binomial order across the `K` interferers. Every
//! summand is positive, so the whole sum is accumulated in log domain with
//! a streaming log-sum-exp and exponentiated once; term magnitudes spanning
//! hundreds of orders are safe.
//!
//! The complement (the probability of decoding success) is available
//! directly via [`success_closed_form`]: deep in the saturated regime the
//! outage rounds to 1.0 in f64 while the complement still carries full
//! relative precision, which is what ordering comparisons should use.

mod compositions;

pub use compositions::{composition_count, enumerate_compositions, CompositionCursor};

use crate::error::{Error, Result};
use crate::model::{
    effective_channel, EffectiveChannel, Scenario, Scheme, SindrCoefficients,
};
use crate::special::{log_gamma, ln_factorial};

/// Refuse expansions beyond this many multinomial terms; callers should use
/// the semi-analytic oracle instead.
pub const TERM_BUDGET: f64 = 1e8;

/// A validated closed-form evaluation request.
///
/// Construction rejects non-integer signal shapes: the finite series
/// requires integer `m0`, and silently rounding the shape would evaluate a
/// different distribution. Non-integer shapes are served by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageQuery {
    coeffs: SindrCoefficients,
    threshold: f64,
}

impl OutageQuery {
    pub fn new(coeffs: SindrCoefficients, threshold: f64) -> Result<Self> {
        if !(threshold >= 0.0) || !threshold.is_finite() {
            return Err(Error::Domain(format!(
                "threshold must be finite and >= 0, got {threshold}"
            )));
        }
        let m0 = coeffs.signal_gamma.shape;
        if m0.fract() != 0.0 {
            return Err(Error::Unsupported(format!(
                "closed form requires an integer signal shape, got {m0}; \
                 use the semi-analytic oracle for non-integer shapes"
            )));
        }
        Ok(Self { coeffs, threshold })
    }

    pub fn coeffs(&self) -> &SindrCoefficients {
        &self.coeffs
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// Outage probability `Pr[gamma < v]` by the exact closed form.
pub fn outage_closed_form(query: &OutageQuery) -> Result<f64> {
    Ok(match log_success(query)? {
        f64::NEG_INFINITY => 1.0,
        w => (-f64::exp_m1(w)).clamp(0.0, 1.0),
    })
}

/// Complement `Pr[gamma >= v]` with full relative precision.
pub fn success_closed_form(query: &OutageQuery) -> Result<f64> {
    Ok(log_success(query)?.exp().clamp(0.0, 1.0))
}

/// ln of the success probability (<= 0; -inf when outage is certain).
fn log_success(query: &OutageQuery) -> Result<f64> {
    let c = &query.coeffs;
    let v = query.threshold;
    if v == 0.0 {
        return Ok(0.0); // outage is impossible at a zero threshold
    }
    let margin = c.a - c.b * v;
    if margin <= 0.0 {
        return Ok(f64::NEG_INFINITY); // guard clause: outage is certain
    }

    let m0 = c.signal_gamma.shape as u64;
    let beta0 = c.signal_gamma.scale;
    let k = c.num_interferers();
    check_term_budget(m0, k)?;

    // Common rate of the exponential kernel. A margin small enough to
    // overflow the division is outage-certain for any practical purpose.
    let rate = v / (beta0 * margin);
    if !rate.is_finite() {
        return Ok(f64::NEG_INFINITY);
    }
    let ln_rate = rate.ln();
    let ln_sigma = c.sigma_total.ln();

    // Constant factor product_k (1 + beta_k c)^(-m_k), plus per-interferer
    // tables g_k[l] for l = 1..m0-1; the l = 0 entry of every factor is 1.
    let mut ln_const = -rate * c.sigma_total;
    let mut g_tables: Vec<Vec<f64>> = Vec::with_capacity(k);
    for gp in &c.interf_gammas {
        ln_const -= gp.shape * (gp.scale * rate).ln_1p();
        let ln_rate_k = (1.0 / gp.scale + rate).ln();
        let ln_gamma_mk = log_gamma(gp.shape)?;
        let mut table = Vec::with_capacity(m0 as usize);
        table.push(0.0);
        for l in 1..m0 {
            table.push(
                log_gamma(l as f64 + gp.shape)? - ln_gamma_mk - ln_factorial(l)
                    - l as f64 * ln_rate_k,
            );
        }
        g_tables.push(table);
    }

    // Streaming log-sum-exp over all (q, t, composition) terms. The first
    // term (q = 0) has log weight 0, so the running maximum starts >= 0.
    let mut max_log = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut comp = 0.0; // Kahan compensation for `sum`
    let push = |log_term: f64, max_log: &mut f64, sum: &mut f64, comp: &mut f64| {
        if log_term <= *max_log {
            let x = (log_term - *max_log).exp();
            let y = x - *comp;
            let t = *sum + y;
            *comp = (t - *sum) - y;
            *sum = t;
        } else {
            let scale = (*max_log - log_term).exp();
            *sum = *sum * scale + 1.0;
            *comp *= scale;
            *max_log = log_term;
        }
    };

    for q in 0..m0 {
        let ln_q_factor = q as f64 * ln_rate;
        for t in 0..=q {
            if k == 0 && t > 0 {
                continue; // no compositions of t > 0 into zero parts
            }
            let base =
                ln_q_factor + (q - t) as f64 * ln_sigma - ln_factorial(q - t);
            let mut cursor = CompositionCursor::new(t, k)?;
            while let Some(parts) = cursor.advance() {
                let mut log_term = base;
                for (gk, &l) in g_tables.iter().zip(parts) {
                    if l > 0 {
                        log_term += gk[l as usize];
                    }
                }
                push(log_term, &mut max_log, &mut sum, &mut comp);
            }
        }
    }

    // ln S = ln_const + ln sum; S <= 1 up to roundoff.
    Ok((ln_const + max_log + sum.ln()).min(0.0))
}

fn check_term_budget(m0: u64, k: usize) -> Result<()> {
    if m0 as f64 > TERM_BUDGET {
        return Err(Error::TermBudget(format!(
            "closed form needs more than {TERM_BUDGET:.0} terms at m0={m0}; \
             use the semi-analytic oracle"
        )));
    }
    let mut count = 0.0;
    for q in 0..m0 {
        for t in 0..=q {
            count += composition_count(t, k);
            if count > TERM_BUDGET {
                return Err(Error::TermBudget(format!(
                    "closed form needs more than {TERM_BUDGET:.0} terms at \
                     m0={m0}, K={k}; use the semi-analytic oracle"
                )));
            }
        }
    }
    Ok(())
}

/// Closed-form outage of user `i` decoding its own message under the given
/// scheme, at NOMA threshold `threshold` (linear).
pub fn outage_for_user(
    scenario: &Scenario,
    user_index: usize,
    threshold: f64,
    scheme: Scheme,
) -> Result<f64> {
    let EffectiveChannel { coeffs, threshold } =
        effective_channel(scenario, user_index, threshold, scheme)?;
    outage_closed_form(&OutageQuery::new(coeffs, threshold)?)
}

/// Complement of [`outage_for_user`], precise deep into the saturated regime.
pub fn success_for_user(
    scenario: &Scenario,
    user_index: usize,
    threshold: f64,
    scheme: Scheme,
) -> Result<f64> {
    let EffectiveChannel { coeffs, threshold } =
        effective_channel(scenario, user_index, threshold, scheme)?;
    success_closed_form(&OutageQuery::new(coeffs, threshold)?)
}

/// High-power outage limit.
///
/// As the transmit power grows, the interference and AWGN terms vanish
/// relative to the power-scaled ones and the SINDR tends to
/// `alpha_j X / (A X + (1 + kappa^2) sigma_eps^2)`. With CSI error present
/// this leaves a non-zero outage floor; with perfect CSI the limit is 0 or 1
/// depending on the guard sign.
pub fn outage_floor_for_user(
    scenario: &Scenario,
    user_index: usize,
    threshold: f64,
    scheme: Scheme,
) -> Result<f64> {
    if !(threshold >= 0.0) || !threshold.is_finite() {
        return Err(Error::Domain(format!(
            "threshold must be finite and >= 0, got {threshold}"
        )));
    }
    let user = scenario
        .users
        .get(user_index.wrapping_sub(1))
        .ok_or_else(|| {
            Error::Domain(format!(
                "user index {user_index} out of range 1..={}",
                scenario.num_users()
            ))
        })?;
    let kappa_sq = user.hw_impairment * user.hw_impairment;
    let (a, b, v) = match scheme {
        Scheme::Noma => {
            let alpha_j = scenario.allocation.alphas[user_index - 1];
            let (psi, psi_tilde) = crate::model::compute_psi(user_index, &scenario.allocation)?;
            (alpha_j, psi + psi_tilde + kappa_sq, threshold)
        }
        Scheme::Oma => {
            let rule = crate::model::OmaThresholdRule {
                slots: scenario.num_users(),
            };
            (1.0, kappa_sq, rule.apply(threshold))
        }
    };
    if v == 0.0 {
        return Ok(0.0);
    }
    let margin = a - b * v;
    if margin <= 0.0 {
        return Ok(1.0);
    }
    let sigma_inf = (1.0 + kappa_sq) * user.csi_error_var;
    if sigma_inf == 0.0 {
        return Ok(0.0); // perfect CSI: the limiting SINDR clears any finite v
    }
    // Gamma CDF of the limiting threshold on X.
    let beta0 = match scenario.estimate_power {
        crate::model::EstimatePower::Unit => user.fading.mean_power / user.fading.shape,
        crate::model::EstimatePower::OneMinusErrorVar => {
            (user.fading.mean_power - user.csi_error_var) / user.fading.shape
        }
    };
    crate::special::regularized_lower_gamma(user.fading.shape, v * sigma_inf / (beta0 * margin))
}
