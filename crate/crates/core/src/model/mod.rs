//! Physical-layer domain types and the mapping from a scenario description
//! to the canonical SINDR coefficients consumed by every evaluation route.
//!
//! User indices are 1-based throughout, matching the decoding order: user 1
//! carries the largest power-allocation coefficient, user `N` the smallest.

mod json;

pub use json::ScenarioDocError;

use crate::error::{Error, Result};

/// Two-level sectored antenna gain model: constant main-lobe gain inside the
/// beamwidth half-angle, constant side/back-lobe gain elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    /// Main-lobe linear power gain.
    pub main_gain: f64,
    /// Side/back-lobe linear power gain.
    pub side_gain: f64,
    /// Beamwidth half-angle in radians.
    pub beamwidth: f64,
}

impl AntennaPattern {
    pub fn new(main_gain: f64, side_gain: f64, beamwidth: f64) -> Result<Self> {
        if !(main_gain > side_gain && side_gain > 0.0) {
            return Err(Error::Validation(format!(
                "antenna gains must satisfy main > side > 0, got main={main_gain}, side={side_gain}"
            )));
        }
        if !(beamwidth > 0.0 && beamwidth < std::f64::consts::PI) {
            return Err(Error::Validation(format!(
                "beamwidth must lie in (0, pi), got {beamwidth}"
            )));
        }
        Ok(Self {
            main_gain,
            side_gain,
            beamwidth,
        })
    }
}

/// Nakagami-m small-scale fading plus large-scale path loss for one link.
///
/// The channel power `|h|^2` is Gamma distributed with shape `m` and scale
/// `mean_power / m`, so its mean equals `mean_power` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingProfile {
    /// Nakagami shape parameter m (>= 0.5).
    pub shape: f64,
    /// Mean channel power E[|h|^2] (default 1).
    pub mean_power: f64,
    /// Path-loss exponent tau.
    pub path_loss_exp: f64,
    /// Line-of-sight tag; parameters are fixed per link.
    pub los: bool,
}

impl FadingProfile {
    pub fn new(shape: f64, mean_power: f64, path_loss_exp: f64, los: bool) -> Result<Self> {
        if !(shape >= 0.5) {
            return Err(Error::Validation(format!(
                "Nakagami shape must be >= 0.5, got {shape}"
            )));
        }
        if !(mean_power > 0.0) {
            return Err(Error::Validation(format!(
                "mean power must be > 0, got {mean_power}"
            )));
        }
        if !(path_loss_exp > 0.0) {
            return Err(Error::Validation(format!(
                "path-loss exponent must be > 0, got {path_loss_exp}"
            )));
        }
        Ok(Self {
            shape,
            mean_power,
            path_loss_exp,
            los,
        })
    }

    /// Gamma parameters of the channel power `|h|^2`.
    pub fn power_gamma(&self) -> GammaParams {
        GammaParams {
            shape: self.shape,
            scale: self.mean_power / self.shape,
        }
    }
}

/// One NOMA end-user's downlink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserLink {
    /// Distance from the source, meters.
    pub distance: f64,
    pub fading: FadingProfile,
    /// Channel-estimation error variance sigma_eps^2.
    pub csi_error_var: f64,
    /// AWGN variance sigma_i^2.
    pub awgn_var: f64,
    /// Compound transmitter-receiver distortion level kappa_i.
    pub hw_impairment: f64,
}

impl UserLink {
    pub fn new(
        distance: f64,
        fading: FadingProfile,
        csi_error_var: f64,
        awgn_var: f64,
        hw_impairment: f64,
    ) -> Result<Self> {
        if !(distance > 0.0) {
            return Err(Error::Validation(format!(
                "user distance must be > 0, got {distance}"
            )));
        }
        if !(csi_error_var >= 0.0) {
            return Err(Error::Validation(format!(
                "CSI error variance must be >= 0, got {csi_error_var}"
            )));
        }
        if !(awgn_var > 0.0) {
            return Err(Error::Validation(format!(
                "AWGN variance must be > 0, got {awgn_var}"
            )));
        }
        if !(hw_impairment >= 0.0) {
            return Err(Error::Validation(format!(
                "impairment level must be >= 0, got {hw_impairment}"
            )));
        }
        Ok(Self {
            distance,
            fading,
            csi_error_var,
            awgn_var,
            hw_impairment,
        })
    }
}

/// One co-channel interferer in a user's cluster.
///
/// The polar angle is recorded for layout reproducibility only; the victim
/// receiver sits at the cluster origin, so the interferer's distance to it
/// equals its ring radius regardless of angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    /// Distance to the victim receiver, meters.
    pub distance: f64,
    /// Average transmit power I_k, linear.
    pub tx_power: f64,
    pub fading: FadingProfile,
    /// Compound distortion level kappa_bar_k.
    pub hw_impairment: f64,
    /// 1-based ring index within the cluster layout.
    pub ring_index: u32,
    /// Polar angle, radians.
    pub polar_angle: f64,
}

impl Interferer {
    pub fn new(
        distance: f64,
        tx_power: f64,
        fading: FadingProfile,
        hw_impairment: f64,
        ring_index: u32,
        polar_angle: f64,
    ) -> Result<Self> {
        if !(distance > 0.0) {
            return Err(Error::Validation(format!(
                "interferer distance must be > 0, got {distance}"
            )));
        }
        if !(tx_power >= 0.0) {
            return Err(Error::Validation(format!(
                "interferer power must be >= 0, got {tx_power}"
            )));
        }
        if !(hw_impairment >= 0.0) {
            return Err(Error::Validation(format!(
                "impairment level must be >= 0, got {hw_impairment}"
            )));
        }
        Ok(Self {
            distance,
            tx_power,
            fading,
            hw_impairment,
            ring_index,
            polar_angle,
        })
    }
}

/// Power-allocation coefficients and per-layer SIC residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct NomaAllocation {
    /// alpha_1 > alpha_2 > ... > alpha_N > 0, summing to 1.
    pub alphas: Vec<f64>,
    /// SIC residual fractions xi_l in [0, 1], one per user (xi_N is unused
    /// since no one cancels the weakest-order message).
    pub sic_residuals: Vec<f64>,
}

impl NomaAllocation {
    pub fn new(alphas: Vec<f64>, sic_residuals: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Validation("allocation must be non-empty".into()));
        }
        if sic_residuals.len() != alphas.len() {
            return Err(Error::Validation(format!(
                "expected {} SIC residuals, got {}",
                alphas.len(),
                sic_residuals.len()
            )));
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "power allocation must sum to 1, got {sum}"
            )));
        }
        for w in alphas.windows(2) {
            if !(w[0] > w[1]) {
                return Err(Error::Validation(format!(
                    "allocation must be strictly decreasing, got {alphas:?}"
                )));
            }
        }
        if !(alphas[alphas.len() - 1] > 0.0) {
            return Err(Error::Validation(format!(
                "allocation coefficients must be positive, got {alphas:?}"
            )));
        }
        for &xi in &sic_residuals {
            if !(0.0..=1.0).contains(&xi) {
                return Err(Error::Validation(format!(
                    "SIC residuals must lie in [0, 1], got {xi}"
                )));
            }
        }
        Ok(Self {
            alphas,
            sic_residuals,
        })
    }

    pub fn num_users(&self) -> usize {
        self.alphas.len()
    }
}

/// Convention for the mean power of the estimated channel, which the error
/// model leaves open: either the estimate is normalized to the full link
/// mean power, or the error variance is carved out of it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum EstimatePower {
    /// E[|h_tilde|^2] = mean_power (default).
    #[default]
    Unit,
    /// E[|h_tilde|^2] = mean_power - csi_error_var.
    OneMinusErrorVar,
}

/// Full network description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Source transmit power P, linear.
    pub tx_power: f64,
    pub antenna: AntennaPattern,
    pub allocation: NomaAllocation,
    /// Users ordered by decreasing allocation coefficient (index n = 1..N).
    pub users: Vec<UserLink>,
    /// Per-user interferer cluster (possibly empty).
    pub clusters: Vec<Vec<Interferer>>,
    /// Estimated-channel mean-power convention.
    pub estimate_power: EstimatePower,
}

impl Scenario {
    pub fn new(
        tx_power: f64,
        antenna: AntennaPattern,
        allocation: NomaAllocation,
        users: Vec<UserLink>,
        clusters: Vec<Vec<Interferer>>,
        estimate_power: EstimatePower,
    ) -> Result<Self> {
        if !(tx_power > 0.0) {
            return Err(Error::Validation(format!(
                "transmit power must be > 0, got {tx_power}"
            )));
        }
        if users.is_empty() || users.len() != allocation.num_users() {
            return Err(Error::Validation(format!(
                "expected {} users, got {}",
                allocation.num_users(),
                users.len()
            )));
        }
        if clusters.len() != users.len() {
            return Err(Error::Validation(format!(
                "expected one cluster per user ({}), got {}",
                users.len(),
                clusters.len()
            )));
        }
        let sc = Self {
            tx_power,
            antenna,
            allocation,
            users,
            clusters,
            estimate_power,
        };
        for i in 1..=sc.num_users() {
            sc.estimated_mean_power(i)?; // rejects OneMinusErrorVar with var >= mean
        }
        Ok(sc)
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    /// Same scenario at a different transmit power.
    pub fn with_tx_power(&self, tx_power: f64) -> Result<Self> {
        let mut sc = self.clone();
        if !(tx_power > 0.0) {
            return Err(Error::Validation(format!(
                "transmit power must be > 0, got {tx_power}"
            )));
        }
        sc.tx_power = tx_power;
        Ok(sc)
    }

    /// Same scenario with the transmit power given in dB.
    pub fn with_tx_power_db(&self, tx_power_db: f64) -> Result<Self> {
        self.with_tx_power(db_to_linear(tx_power_db))
    }

    fn user(&self, user_index: usize) -> Result<&UserLink> {
        if user_index == 0 || user_index > self.num_users() {
            return Err(Error::Domain(format!(
                "user index {user_index} out of range 1..={}",
                self.num_users()
            )));
        }
        Ok(&self.users[user_index - 1])
    }

    /// E[|h_tilde|^2] for the given user under the configured convention.
    fn estimated_mean_power(&self, user_index: usize) -> Result<f64> {
        let user = self.user(user_index)?;
        let omega = user.fading.mean_power;
        match self.estimate_power {
            EstimatePower::Unit => Ok(omega),
            EstimatePower::OneMinusErrorVar => {
                let v = omega - user.csi_error_var;
                if !(v > 0.0) {
                    return Err(Error::Validation(format!(
                        "estimated mean power {v} not positive under the \
                         one-minus-error-var convention (user {user_index})"
                    )));
                }
                Ok(v)
            }
        }
    }
}

/// Shape/scale pair of a Gamma-distributed power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub shape: f64,
    pub scale: f64,
}

/// Canonical coefficients of the SINDR `a X / (b X + sum_k Y_k + sigma_total)`
/// with `X ~ Gamma(signal_gamma)` and `Y_k ~ Gamma(interf_gammas[k])`.
///
/// Each interferer scale already absorbs the distortion-inflated mean power
/// `zeta_k = (1 + kappa_bar_k^2) * rho_bar_ik`, i.e. `scale_k = zeta_k *
/// mean_power_k / shape_k`, so `E[Y_k] = zeta_k * mean_power_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SindrCoefficients {
    /// Desired-message power coefficient `a = alpha_j * rho_i`.
    pub a: f64,
    /// Self-noise coefficient `b = rho_i (Psi_j + Psi~_j + kappa_i^2)`.
    pub b: f64,
    /// Constant noise floor `sigma_i^2 + rho_i (1 + kappa_i^2) sigma_eps^2`.
    pub sigma_total: f64,
    /// Gamma parameters of the estimated-signal power X.
    pub signal_gamma: GammaParams,
    /// Gamma parameters of the per-interferer powers Y_k.
    pub interf_gammas: Vec<GammaParams>,
}

impl SindrCoefficients {
    pub fn new(
        a: f64,
        b: f64,
        sigma_total: f64,
        signal_gamma: GammaParams,
        interf_gammas: Vec<GammaParams>,
    ) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Validation(format!("a must be > 0, got {a}")));
        }
        if !(b >= 0.0) {
            return Err(Error::Validation(format!("b must be >= 0, got {b}")));
        }
        if !(sigma_total > 0.0) {
            return Err(Error::Validation(format!(
                "sigma_total must be > 0, got {sigma_total}"
            )));
        }
        for g in std::iter::once(&signal_gamma).chain(interf_gammas.iter()) {
            if !(g.shape >= 0.5) {
                return Err(Error::Validation(format!(
                    "Gamma shape must be >= 0.5, got {}",
                    g.shape
                )));
            }
            if !(g.scale > 0.0) {
                return Err(Error::Validation(format!(
                    "Gamma scale must be > 0, got {}",
                    g.scale
                )));
            }
        }
        Ok(Self {
            a,
            b,
            sigma_total,
            signal_gamma,
            interf_gammas,
        })
    }

    /// Number of interferers K.
    pub fn num_interferers(&self) -> usize {
        self.interf_gammas.len()
    }
}

/// Convert a dB power quantity to a linear ratio.
pub fn db_to_linear(value_db: f64) -> f64 {
    10f64.powf(value_db / 10.0)
}

/// Sectored antenna gain at boresight angle `theta` in [-pi, pi]
/// (boundary inclusive: |theta| == beamwidth is still main lobe).
pub fn antenna_gain(theta: f64, pattern: &AntennaPattern) -> Result<f64> {
    if !(-std::f64::consts::PI..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::Domain(format!(
            "boresight angle must lie in [-pi, pi], got {theta}"
        )));
    }
    Ok(if theta.abs() <= pattern.beamwidth {
        pattern.main_gain
    } else {
        pattern.side_gain
    })
}

/// Position of one interferer in the deterministic ring layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingPosition {
    /// 1-based ring index.
    pub ring_index: u32,
    /// Ring radius, meters; equals the distance to the victim at the origin.
    pub radius: f64,
    /// Polar angle, radians.
    pub polar_angle: f64,
}

/// Lay out `count` interferers on `ceil(count / per_orbit)` uniformly spaced
/// concentric rings inside `cluster_radius`, filling rings inward-out with up
/// to `per_orbit` nodes each. Ring `c` (1-based) has radius
/// `c * cluster_radius / num_rings`; the k-th node of ring `c` (0-based) sits
/// at polar angle `2 pi k / per_orbit + c pi / per_orbit`, the per-ring offset
/// keeping angles distinct across rings.
pub fn place_interferers(
    count: usize,
    cluster_radius: f64,
    per_orbit: usize,
) -> Result<Vec<RingPosition>> {
    if !(cluster_radius > 0.0) {
        return Err(Error::Validation(format!(
            "cluster radius must be > 0, got {cluster_radius}"
        )));
    }
    if per_orbit == 0 {
        return Err(Error::Validation("per-orbit count must be >= 1".into()));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let rings = count.div_ceil(per_orbit);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let ring = idx / per_orbit + 1; // 1-based
        let slot = idx % per_orbit;
        let radius = ring as f64 * cluster_radius / rings as f64;
        let angle = 2.0 * std::f64::consts::PI * slot as f64 / per_orbit as f64
            + ring as f64 * std::f64::consts::PI / per_orbit as f64;
        out.push(RingPosition {
            ring_index: ring as u32,
            radius,
            polar_angle: angle,
        });
    }
    Ok(out)
}

/// Residual-interference weights for decoding message `j`:
/// `Psi_j = sum_{t > j} alpha_t` (not-yet-cancelled weaker-order messages)
/// and `Psi~_j = sum_{l < j} xi_l alpha_l` (imperfect-SIC leakage).
pub fn compute_psi(message_index: usize, allocation: &NomaAllocation) -> Result<(f64, f64)> {
    let n = allocation.num_users();
    if message_index == 0 || message_index > n {
        return Err(Error::Domain(format!(
            "message index {message_index} out of range 1..={n}"
        )));
    }
    let psi: f64 = allocation.alphas[message_index..].iter().sum();
    let psi_tilde: f64 = allocation.alphas[..message_index - 1]
        .iter()
        .zip(&allocation.sic_residuals)
        .map(|(alpha, xi)| alpha * xi)
        .sum();
    Ok((psi, psi_tilde))
}

/// Canonical SINDR coefficients at user `i` decoding message `j` (1-based,
/// `j <= i`) under NOMA.
///
/// The intended link sees the squared main-lobe gain (transmit and receive
/// main lobes mutually aligned); every interferer couples through the
/// squared side-lobe gain.
pub fn build_sindr_coefficients(
    scenario: &Scenario,
    user_index: usize,
    message_index: usize,
) -> Result<SindrCoefficients> {
    if message_index == 0 || message_index > user_index {
        return Err(Error::Domain(format!(
            "user {user_index} does not decode message {message_index}"
        )));
    }
    let user = scenario.user(user_index)?;
    let rho = scenario.tx_power
        * scenario.antenna.main_gain.powi(2)
        * user.distance.powf(-user.fading.path_loss_exp);
    let alpha_j = scenario.allocation.alphas[message_index - 1];
    let (psi, psi_tilde) = compute_psi(message_index, &scenario.allocation)?;
    let kappa_sq = user.hw_impairment * user.hw_impairment;
    let a = alpha_j * rho;
    let b = rho * (psi + psi_tilde + kappa_sq);
    let sigma_total = user.awgn_var + rho * (1.0 + kappa_sq) * user.csi_error_var;
    let omega_tilde = scenario.estimated_mean_power(user_index)?;
    let signal_gamma = GammaParams {
        shape: user.fading.shape,
        scale: omega_tilde / user.fading.shape,
    };
    let interf_gammas = interferer_gammas(scenario, user_index)?;
    SindrCoefficients::new(a, b, sigma_total, signal_gamma, interf_gammas)
}

fn interferer_gammas(scenario: &Scenario, user_index: usize) -> Result<Vec<GammaParams>> {
    let side_sq = scenario.antenna.side_gain.powi(2);
    scenario.clusters[user_index - 1]
        .iter()
        .map(|intf| {
            let rho_bar =
                intf.tx_power * side_sq * intf.distance.powf(-intf.fading.path_loss_exp);
            let zeta = (1.0 + intf.hw_impairment * intf.hw_impairment) * rho_bar;
            let scale = zeta * intf.fading.mean_power / intf.fading.shape;
            if !(scale > 0.0) {
                return Err(Error::Validation(format!(
                    "interferer contributes no power (zeta = {zeta}); \
                     drop it from the cluster instead"
                )));
            }
            Ok(GammaParams {
                shape: intf.fading.shape,
                scale,
            })
        })
        .collect()
}

/// Threshold transform for the OMA benchmark: serving `slots` users in
/// exclusive slots demands `slots` times the per-user rate, i.e. an
/// effective SINDR threshold `(1 + v)^slots - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmaThresholdRule {
    pub slots: usize,
}

impl OmaThresholdRule {
    pub fn apply(&self, threshold: f64) -> f64 {
        if self.slots == 1 {
            return threshold; // dedicated channel, no rate scaling
        }
        (1.0 + threshold).powi(self.slots as i32) - 1.0
    }
}

/// Canonical coefficients for the OMA benchmark at user `i`.
///
/// Each user keeps its NOMA message power `alpha_i P` but transmits in an
/// exclusive slot, so no intra-cell term remains and distortion/CSI noise
/// scale with the slot power. The returned rule maps the per-user NOMA
/// threshold to the OMA one, compensating the 1/N slot share.
pub fn build_oma_coefficients(
    scenario: &Scenario,
    user_index: usize,
) -> Result<(SindrCoefficients, OmaThresholdRule)> {
    let user = scenario.user(user_index)?;
    let alpha_i = scenario.allocation.alphas[user_index - 1];
    let rho = alpha_i
        * scenario.tx_power
        * scenario.antenna.main_gain.powi(2)
        * user.distance.powf(-user.fading.path_loss_exp);
    let kappa_sq = user.hw_impairment * user.hw_impairment;
    let a = rho;
    let b = rho * kappa_sq;
    let sigma_total = user.awgn_var + rho * (1.0 + kappa_sq) * user.csi_error_var;
    let omega_tilde = scenario.estimated_mean_power(user_index)?;
    let signal_gamma = GammaParams {
        shape: user.fading.shape,
        scale: omega_tilde / user.fading.shape,
    };
    let interf_gammas = interferer_gammas(scenario, user_index)?;
    let coeffs = SindrCoefficients::new(a, b, sigma_total, signal_gamma, interf_gammas)?;
    Ok((
        coeffs,
        OmaThresholdRule {
            slots: scenario.num_users(),
        },
    ))
}

/// Multiple-access scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Noma,
    Oma,
}

/// Coefficients plus effective threshold for one (user, scheme) pair; the
/// common input of the closed form, the simulator and the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel {
    pub coeffs: SindrCoefficients,
    pub threshold: f64,
}

/// Resolve a scenario into the canonical evaluation input for `user_index`
/// decoding its own message, at NOMA threshold `threshold` (linear).
pub fn effective_channel(
    scenario: &Scenario,
    user_index: usize,
    threshold: f64,
    scheme: Scheme,
) -> Result<EffectiveChannel> {
    if !(threshold >= 0.0) || !threshold.is_finite() {
        return Err(Error::Domain(format!(
            "threshold must be finite and >= 0, got {threshold}"
        )));
    }
    match scheme {
        Scheme::Noma => Ok(EffectiveChannel {
            coeffs: build_sindr_coefficients(scenario, user_index, user_index)?,
            threshold,
        }),
        Scheme::Oma => {
            let (coeffs, rule) = build_oma_coefficients(scenario, user_index)?;
            Ok(EffectiveChannel {
                coeffs,
                threshold: rule.apply(threshold),
            })
        }
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    fn los4() -> FadingProfile {
        FadingProfile::new(4.0, 1.0, 2.0, true).unwrap()
    }

    /// Two-user layout mirroring the reference simulation parameters.
    pub(crate) fn two_user_scenario(
        tx_power_db: f64,
        k: usize,
        kappa: f64,
        csi_var: f64,
        xi: f64,
    ) -> Scenario {
        let antenna = AntennaPattern::new(
            db_to_linear(12.0),
            db_to_linear(-1.1092),
            std::f64::consts::FRAC_PI_6,
        )
        .unwrap();
        let allocation = NomaAllocation::new(vec![0.8, 0.2], vec![xi, xi]).unwrap();
        let users = vec![
            UserLink::new(100.0, los4(), csi_var, 1.0, kappa).unwrap(),
            UserLink::new(50.0, los4(), csi_var, 1.0, kappa).unwrap(),
        ];
        let cluster: Vec<Interferer> = place_interferers(k, 30.0, 8)
            .unwrap()
            .into_iter()
            .map(|p| {
                Interferer::new(
                    p.radius,
                    db_to_linear(15.0),
                    los4(),
                    kappa,
                    p.ring_index,
                    p.polar_angle,
                )
                .unwrap()
            })
            .collect();
        Scenario::new(
            db_to_linear(tx_power_db),
            antenna,
            allocation,
            users,
            vec![cluster.clone(), cluster],
            EstimatePower::Unit,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::two_user_scenario;
    use super::*;

    #[test]
    fn db_conversion() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(12.0) - 15.848931924611135).abs() < 1e-12);
        assert!((db_to_linear(-1.1092) - 0.7746044720781587).abs() < 1e-14);
    }

    #[test]
    fn antenna_gain_two_valued() {
        let p = AntennaPattern::new(15.849, 0.775, std::f64::consts::FRAC_PI_6).unwrap();
        assert_eq!(antenna_gain(0.0, &p).unwrap(), 15.849);
        assert_eq!(antenna_gain(std::f64::consts::PI, &p).unwrap(), 0.775);
        // Boundary is inclusive.
        assert_eq!(antenna_gain(p.beamwidth, &p).unwrap(), 15.849);
        assert_eq!(antenna_gain(-p.beamwidth, &p).unwrap(), 15.849);
        assert!(antenna_gain(3.5, &p).is_err());
        for i in 0..=100 {
            let theta = -std::f64::consts::PI + i as f64 * std::f64::consts::PI / 50.0;
            let g = antenna_gain(theta, &p).unwrap();
            assert!(g == p.main_gain || g == p.side_gain);
        }
    }

    #[test]
    fn antenna_pattern_validation() {
        assert!(AntennaPattern::new(1.0, 2.0, 0.5).is_err()); // main <= side
        assert!(AntennaPattern::new(2.0, -0.1, 0.5).is_err());
        assert!(AntennaPattern::new(2.0, 1.0, 0.0).is_err());
        assert!(AntennaPattern::new(2.0, 1.0, 3.5).is_err());
    }

    #[test]
    fn ring_layout_24() {
        let pos = place_interferers(24, 30.0, 8).unwrap();
        assert_eq!(pos.len(), 24);
        for (i, p) in pos.iter().enumerate() {
            let ring = i / 8 + 1;
            assert_eq!(p.ring_index as usize, ring);
            assert!((p.radius - ring as f64 * 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ring_layout_9() {
        let pos = place_interferers(9, 30.0, 8).unwrap();
        assert_eq!(pos.len(), 9);
        let ring1: Vec<_> = pos.iter().filter(|p| p.ring_index == 1).collect();
        let ring2: Vec<_> = pos.iter().filter(|p| p.ring_index == 2).collect();
        assert_eq!(ring1.len(), 8);
        assert_eq!(ring2.len(), 1);
        assert!(ring1.iter().all(|p| (p.radius - 15.0).abs() < 1e-12));
        assert!(ring2.iter().all(|p| (p.radius - 30.0).abs() < 1e-12));
    }

    #[test]
    fn ring_layout_empty_and_invariants() {
        assert!(place_interferers(0, 30.0, 8).unwrap().is_empty());
        for k in [1, 5, 8, 9, 17, 24, 25] {
            let pos = place_interferers(k, 30.0, 8).unwrap();
            assert_eq!(pos.len(), k);
            assert!(pos.iter().all(|p| p.radius <= 30.0 + 1e-12));
            let mut seen = std::collections::HashSet::new();
            for p in &pos {
                assert!(seen.insert((p.radius.to_bits(), p.polar_angle.to_bits())));
            }
            for ring in 1..=pos.iter().map(|p| p.ring_index).max().unwrap() {
                assert!(pos.iter().filter(|p| p.ring_index == ring).count() <= 8);
            }
        }
    }

    #[test]
    fn psi_examples() {
        let alloc = NomaAllocation::new(vec![0.8, 0.2], vec![0.0, 0.0]).unwrap();
        assert_eq!(compute_psi(1, &alloc).unwrap(), (0.2, 0.0));
        assert_eq!(compute_psi(2, &alloc).unwrap(), (0.0, 0.0));
        let alloc = NomaAllocation::new(vec![0.8, 0.2], vec![0.005, 0.005]).unwrap();
        let (psi, psi_tilde) = compute_psi(2, &alloc).unwrap();
        assert_eq!(psi, 0.0);
        assert!((psi_tilde - 0.004).abs() < 1e-15);
        assert!(compute_psi(0, &alloc).is_err());
        assert!(compute_psi(3, &alloc).is_err());
    }

    #[test]
    fn psi_partitions_unit_power() {
        let alloc =
            NomaAllocation::new(vec![0.5, 0.25, 0.15, 0.1], vec![0.3, 0.2, 0.1, 0.0]).unwrap();
        for j in 1..=4 {
            let (psi, _) = compute_psi(j, &alloc).unwrap();
            let below: f64 = alloc.alphas[..j - 1].iter().sum();
            assert!((psi + alloc.alphas[j - 1] + below - 1.0).abs() < 1e-12);
        }
        assert_eq!(compute_psi(4, &alloc).unwrap().0, 0.0); // Psi_N = 0
        assert_eq!(compute_psi(1, &alloc).unwrap().1, 0.0); // Psi~_1 = 0
    }

    #[test]
    fn allocation_validation() {
        assert!(NomaAllocation::new(vec![0.7, 0.2], vec![0.0, 0.0]).is_err()); // sum != 1
        assert!(NomaAllocation::new(vec![0.2, 0.8], vec![0.0, 0.0]).is_err()); // not decreasing
        assert!(NomaAllocation::new(vec![0.8, 0.2], vec![0.0]).is_err()); // length mismatch
        assert!(NomaAllocation::new(vec![0.8, 0.2], vec![1.5, 0.0]).is_err()); // xi > 1
    }

    #[test]
    fn sindr_coefficients_ideal_reference() {
        // P = 30 dB, d2 = 50 m, tau = 2, alpha2 = 0.2, no impairments.
        let sc = two_user_scenario(30.0, 0, 0.0, 0.0, 0.0);
        let c = build_sindr_coefficients(&sc, 2, 2).unwrap();
        assert!((c.a - 20.09509145207664).abs() < 1e-10);
        assert_eq!(c.b, 0.0);
        assert_eq!(c.sigma_total, 1.0);
        assert_eq!(c.signal_gamma.shape, 4.0);
        assert!((c.signal_gamma.scale - 0.25).abs() < 1e-15);
        assert!(c.interf_gammas.is_empty());
    }

    #[test]
    fn sindr_coefficients_impaired_reference() {
        let sc = two_user_scenario(30.0, 0, 0.3, 0.0, 0.005);
        let c = build_sindr_coefficients(&sc, 2, 2).unwrap();
        assert!((c.b - 9.44469298247602).abs() < 1e-10);

        let sc = two_user_scenario(30.0, 0, 0.3, 0.2, 0.005);
        let c = build_sindr_coefficients(&sc, 2, 2).unwrap();
        assert!((c.sigma_total - 22.90364968276354).abs() < 1e-10);
    }

    #[test]
    fn sindr_rejects_bad_indices() {
        let sc = two_user_scenario(30.0, 0, 0.0, 0.0, 0.0);
        assert!(build_sindr_coefficients(&sc, 1, 2).is_err()); // j > i
        assert!(build_sindr_coefficients(&sc, 3, 1).is_err());
        assert!(build_sindr_coefficients(&sc, 1, 0).is_err());
    }

    #[test]
    fn a_over_b_independent_of_link_budget() {
        // a/b = alpha_j / (Psi + Psi~ + kappa^2) regardless of P, d, G.
        for p_db in [0.0, 17.0, 44.0] {
            let sc = two_user_scenario(p_db, 0, 0.3, 0.0, 0.005);
            let c = build_sindr_coefficients(&sc, 2, 2).unwrap();
            let expect = 0.2 / (0.005 * 0.8 + 0.09);
            assert!(((c.a / c.b) - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn interferer_scales_absorb_zeta() {
        let sc = two_user_scenario(30.0, 8, 0.3, 0.0, 0.0);
        let c = build_sindr_coefficients(&sc, 2, 2).unwrap();
        assert_eq!(c.interf_gammas.len(), 8);
        // K = 8 puts all interferers on a single ring of radius 30 m.
        let rho_bar = db_to_linear(15.0) * db_to_linear(-1.1092).powi(2) * 30f64.powf(-2.0);
        let zeta = 1.09 * rho_bar;
        for g in &c.interf_gammas {
            assert!((g.scale - zeta / 4.0).abs() < 1e-14);
            assert_eq!(g.shape, 4.0);
        }
    }

    #[test]
    fn oma_threshold_rule() {
        let v = db_to_linear(3.0);
        let rule = OmaThresholdRule { slots: 2 };
        assert!((rule.apply(v) - 7.971596335472731).abs() < 1e-12);
        let single = OmaThresholdRule { slots: 1 };
        assert_eq!(single.apply(v), v);
    }

    #[test]
    fn oma_ideal_has_no_self_noise() {
        let sc = two_user_scenario(30.0, 0, 0.0, 0.0, 0.0);
        let (c, rule) = build_oma_coefficients(&sc, 1).unwrap();
        assert_eq!(c.b, 0.0);
        assert_eq!(rule.slots, 2);
        // Exclusive slot at the message power alpha_1 P.
        let rho1 = db_to_linear(30.0) * db_to_linear(12.0).powi(2) * 100f64.powf(-2.0);
        assert!((c.a - 0.8 * rho1).abs() < 1e-10);
    }

    #[test]
    fn estimate_power_conventions() {
        let mut sc = two_user_scenario(30.0, 0, 0.0, 0.2, 0.0);
        let unit = build_sindr_coefficients(&sc, 2, 2).unwrap();
        assert!((unit.signal_gamma.scale - 0.25).abs() < 1e-15);
        sc.estimate_power = EstimatePower::OneMinusErrorVar;
        let split = build_sindr_coefficients(&sc, 2, 2).unwrap();
        assert!((split.signal_gamma.scale - 0.8 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn scenario_validation() {
        let sc = two_user_scenario(30.0, 0, 0.0, 0.0, 0.0);
        assert!(Scenario::new(
            0.0,
            sc.antenna,
            sc.allocation.clone(),
            sc.users.clone(),
            sc.clusters.clone(),
            EstimatePower::Unit,
        )
        .is_err());
        assert!(Scenario::new(
            1.0,
            sc.antenna,
            sc.allocation.clone(),
            sc.users[..1].to_vec(),
            sc.clusters.clone(),
            EstimatePower::Unit,
        )
        .is_err());
    }
}
