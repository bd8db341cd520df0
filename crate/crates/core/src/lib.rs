//! Outage analysis for a NOMA-based mmWave device-to-device downlink.
//!
//! The library models a source node serving `N` power-domain NOMA users in
//! the presence of clustered co-channel interferers, transceiver hardware
//! impairments, channel-estimation error and residual SIC leakage. Per-link
//! fading is Nakagami-m, so every channel power is a Gamma random variable
//! and the post-combining SINDR of any (user, message) pair reduces to the
//! canonical form
//!
//! ```text
//!     gamma = a X / (b X + sum_k Y_k + sigma)
//! ```
//!
//! with `X` and `Y_k` independent Gammas. Three independent evaluation
//! routes are provided for the outage probability `Pr[gamma < v]`:
//!
//! * [`analytic`] — the exact closed form (finite incomplete-gamma series
//!   with a binomial/multinomial composition expansion), log-domain stable;
//! * [`montecarlo`] — indicator Monte Carlo over the Gamma powers with
//!   reproducible parallel substreams;
//! * [`oracle`] — a semi-analytic estimator (exact inner CDF, sampled outer
//!   expectation) plus deterministic adaptive quadrature for one interferer.
//!
//! [`model`] holds the physical-layer types and the mapping from a scenario
//! description to the canonical coefficients, for both NOMA and the OMA
//! benchmark.

// Validation guards are written as `!(x > 0.0)` so NaN fails them too;
// the un-negated forms clippy prefers would accept NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod oracle;
pub mod special;

pub use error::{Error, Result};
pub use model::{
    AntennaPattern, EffectiveChannel, FadingProfile, GammaParams, Interferer, NomaAllocation,
    Scenario, Scheme, SindrCoefficients, UserLink,
};
