//! Sweep front end: named presets, SNR grids, method dispatch and CSV
//! emission for outage curves.
//!
//! The transmit-SNR axis is the source power in dB with every user's AWGN
//! variance fixed at 1, so a grid point simply rescales `tx_power`. Rows are
//! produced for each (snr, user, scheme, method) combination in that sort
//! order, and identical invocations (flags plus seed) emit byte-identical
//! CSV regardless of worker count.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use mmwave_noma::analytic::{outage_closed_form, OutageQuery};
use mmwave_noma::model::{
    db_to_linear, effective_channel, place_interferers, AntennaPattern, EstimatePower,
    FadingProfile, Interferer, NomaAllocation, Scenario, Scheme, UserLink,
};
use mmwave_noma::montecarlo::{estimate_outage, McConfig};
use mmwave_noma::oracle::outage_semi_analytic;
use mmwave_noma::{Error, Result};

/// Decoding threshold of the reference curves: v = 2^R - 1 at 3 dB.
pub const THRESHOLD_3DB: f64 = 1.9952623149688795;

/// Named parameter sets for the reference curve regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Ideal hardware and perfect SIC/CSI; interferer count selectable.
    Fig2Ideal,
    /// K = 24 with the headline impairment combination
    /// (kappa = 0.3, csi error var = 0.2, xi = 0.005); walk the impairment
    /// grid with the override knobs.
    Fig3U2,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2-ideal" => Ok(Preset::Fig2Ideal),
            "fig3-u2" => Ok(Preset::Fig3U2),
            other => Err(Error::Validation(format!(
                "unknown preset `{other}` (expected fig2-ideal or fig3-u2)"
            ))),
        }
    }
}

/// Cluster geometry shared by the presets: rings inside 30 m, 8 per orbit.
pub const CLUSTER_RADIUS_M: f64 = 30.0;
pub const PER_ORBIT: usize = 8;

fn los_profile() -> FadingProfile {
    FadingProfile::new(4.0, 1.0, 2.0, true).expect("valid LOS profile")
}

fn preset_scenario(k: usize, kappa: f64, csi_var: f64, xi: f64) -> Scenario {
    let antenna = AntennaPattern::new(
        db_to_linear(12.0),
        db_to_linear(-1.1092),
        std::f64::consts::FRAC_PI_6,
    )
    .expect("valid preset antenna");
    let allocation = NomaAllocation::new(vec![0.8, 0.2], vec![xi, xi]).expect("valid preset PA");
    let users = vec![
        UserLink::new(100.0, los_profile(), csi_var, 1.0, kappa).expect("valid user"),
        UserLink::new(50.0, los_profile(), csi_var, 1.0, kappa).expect("valid user"),
    ];
    let cluster = preset_cluster(k, kappa);
    Scenario::new(
        db_to_linear(30.0),
        antenna,
        allocation,
        users,
        vec![cluster.clone(), cluster],
        EstimatePower::Unit,
    )
    .expect("valid preset scenario")
}

fn preset_cluster(k: usize, kappa: f64) -> Vec<Interferer> {
    place_interferers(k, CLUSTER_RADIUS_M, PER_ORBIT)
        .expect("valid ring layout")
        .into_iter()
        .map(|p| {
            Interferer::new(
                p.radius,
                db_to_linear(15.0),
                los_profile(),
                kappa,
                p.ring_index,
                p.polar_angle,
            )
            .expect("valid interferer")
        })
        .collect()
}

/// Two-user ideal network: d1 = 2 d2 = 100 m, alpha = (0.8, 0.2),
/// 12 dB main / -1.1092 dB side lobes, 15 dB interferers, LOS m = 4,
/// tau = 2, unit AWGN.
pub fn fig2_ideal(k: usize) -> Scenario {
    preset_scenario(k, 0.0, 0.0, 0.0)
}

/// The fig2 network with K = 24 and the headline impairment levels.
pub fn fig3_u2() -> Scenario {
    preset_scenario(24, 0.3, 0.2, 0.005)
}

/// Impairment/cluster overrides applied on top of a preset or file scenario.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    /// Rebuild every cluster with this many ring-laid interferers.
    pub k: Option<usize>,
    /// Set the hardware impairment level of all users and interferers.
    pub kappa: Option<f64>,
    /// Set the CSI error variance of all users.
    pub csi_var: Option<f64>,
    /// Set all SIC residual fractions.
    pub xi: Option<f64>,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        self.k.is_none() && self.kappa.is_none() && self.csi_var.is_none() && self.xi.is_none()
    }

    pub fn apply(&self, scenario: &Scenario) -> Result<Scenario> {
        let mut users = scenario.users.clone();
        if let Some(kappa) = self.kappa {
            for u in &mut users {
                *u = UserLink::new(u.distance, u.fading, u.csi_error_var, u.awgn_var, kappa)?;
            }
        }
        if let Some(csi) = self.csi_var {
            for u in &mut users {
                *u = UserLink::new(u.distance, u.fading, csi, u.awgn_var, u.hw_impairment)?;
            }
        }
        let allocation = match self.xi {
            Some(xi) => NomaAllocation::new(
                scenario.allocation.alphas.clone(),
                vec![xi; scenario.allocation.num_users()],
            )?,
            None => scenario.allocation.clone(),
        };
        let clusters: Vec<Vec<Interferer>> = match self.k {
            Some(k) => {
                let kappa = self.kappa.unwrap_or_else(|| {
                    scenario
                        .clusters
                        .iter()
                        .flatten()
                        .next()
                        .map(|i| i.hw_impairment)
                        .unwrap_or(0.0)
                });
                let cluster = preset_cluster(k, kappa);
                vec![cluster; scenario.users.len()]
            }
            None => match self.kappa {
                Some(kappa) => scenario
                    .clusters
                    .iter()
                    .map(|cluster| {
                        cluster
                            .iter()
                            .map(|i| {
                                Interferer::new(
                                    i.distance,
                                    i.tx_power,
                                    i.fading,
                                    kappa,
                                    i.ring_index,
                                    i.polar_angle,
                                )
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => scenario.clusters.clone(),
            },
        };
        Scenario::new(
            scenario.tx_power,
            scenario.antenna,
            allocation,
            users,
            clusters,
            scenario.estimate_power,
        )
    }
}

/// Scenario input: a named preset or a JSON file path.
#[derive(Debug, Clone)]
pub enum ScenarioSource {
    Preset(Preset),
    File(std::path::PathBuf),
}

/// Load a scenario from a preset name or JSON path and apply overrides.
pub fn load_scenario(source: &ScenarioSource, overrides: &Overrides) -> Result<Scenario> {
    let base = match source {
        ScenarioSource::Preset(Preset::Fig2Ideal) => fig2_ideal(overrides.k.unwrap_or(24)),
        ScenarioSource::Preset(Preset::Fig3U2) => fig3_u2(),
        ScenarioSource::File(path) => Scenario::from_json_file(path)?,
    };
    overrides.apply(&base)
}

/// Evaluation route of one sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Analytic,
    Mc,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Analytic => "analytic",
            Method::Mc => "mc",
            Method::Oracle => "oracle",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "mc" => Ok(Method::Mc),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::Validation(format!(
                "unknown method `{other}` (expected analytic, mc or oracle)"
            ))),
        }
    }
}

fn scheme_name(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Noma => "noma",
        Scheme::Oma => "oma",
    }
}

fn scheme_rank(scheme: Scheme) -> u8 {
    match scheme {
        Scheme::Noma => 0,
        Scheme::Oma => 1,
    }
}

/// One (snr, user, scheme, method) outage record.
///
/// `p_out` is `None` when the method could not evaluate the point (the only
/// such case is the closed form on a non-integer signal shape); the run
/// continues and the CSV row carries empty value fields. `stderr`/`trials`
/// are present exactly for the sampling methods.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub user: usize,
    pub scheme: Scheme,
    pub method: Method,
    pub p_out: Option<f64>,
    pub stderr: Option<f64>,
    pub trials: Option<u64>,
}

/// Sweep description: grid, row selectors and sampling budget.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub snr_grid_db: Vec<f64>,
    pub users: Vec<usize>,
    pub schemes: Vec<Scheme>,
    pub methods: Vec<Method>,
    /// NOMA decoding threshold, linear.
    pub threshold: f64,
    pub mc: McConfig,
}

/// Run every grid point and return rows sorted by (snr, user, scheme,
/// method). Grid points are dispatched to the current rayon pool; the
/// deterministic substream contract of the samplers makes the output
/// independent of scheduling.
pub fn run_sweep(scenario: &Scenario, config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.snr_grid_db.is_empty() {
        return Err(Error::Validation("empty SNR grid".into()));
    }
    for &user in &config.users {
        if user == 0 || user > scenario.num_users() {
            return Err(Error::Validation(format!(
                "user {user} out of range 1..={}",
                scenario.num_users()
            )));
        }
    }
    let mut points = Vec::new();
    for &snr in &config.snr_grid_db {
        for &user in &config.users {
            for &scheme in &config.schemes {
                for &method in &config.methods {
                    points.push((snr, user, scheme, method));
                }
            }
        }
    }
    let mut rows = points
        .into_par_iter()
        .map(|(snr, user, scheme, method)| -> Result<SweepRow> {
            let at_power = scenario.with_tx_power_db(snr)?;
            let channel = effective_channel(&at_power, user, config.threshold, scheme)?;
            let mut row = SweepRow {
                snr_db: snr,
                user,
                scheme,
                method,
                p_out: None,
                stderr: None,
                trials: None,
            };
            match method {
                Method::Analytic => {
                    match OutageQuery::new(channel.coeffs, channel.threshold)
                        .and_then(|q| outage_closed_form(&q))
                    {
                        Ok(p) => row.p_out = Some(p),
                        Err(Error::Unsupported(_)) | Err(Error::TermBudget(_)) => {
                            // Marker row: the sampling methods still cover
                            // this point.
                        }
                        Err(e) => return Err(e),
                    }
                }
                Method::Mc => {
                    let est = estimate_outage(&channel.coeffs, channel.threshold, &config.mc);
                    row.p_out = Some(est.p_hat);
                    row.stderr = Some(est.stderr);
                    row.trials = Some(est.trials);
                }
                Method::Oracle => {
                    let est = outage_semi_analytic(
                        &channel.coeffs,
                        channel.threshold,
                        config.mc.trials,
                        config.mc.seed,
                    )?;
                    row.p_out = Some(est.p_out);
                    row.stderr = Some(est.stderr);
                    row.trials = Some(est.samples);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| {
        x.snr_db
            .partial_cmp(&y.snr_db)
            .unwrap()
            .then(x.user.cmp(&y.user))
            .then(scheme_rank(x.scheme).cmp(&scheme_rank(y.scheme)))
            .then(x.method.cmp(&y.method))
    });
    Ok(rows)
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}") // 17 significant digits, round-trip exact
}

/// Write rows as CSV with LF line endings.
///
/// Header: `snr_db,user,scheme,method,p_out,stderr,trials`. Floating-point
/// fields are printed with 17 significant digits; absent fields are empty.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    out.write_all(b"snr_db,user,scheme,method,p_out,stderr,trials\n")?;
    for row in rows {
        let p_out = row.p_out.map(fmt_float).unwrap_or_default();
        let stderr = row.stderr.map(fmt_float).unwrap_or_default();
        let trials = row.trials.map(|t| t.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_float(row.snr_db),
            row.user,
            scheme_name(row.scheme),
            row.method,
            p_out,
            stderr,
            trials
        )?;
    }
    Ok(())
}

/// Write rows to a file, surfacing the path on failure.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut writer = std::io::BufWriter::new(file);
    write_csv(rows, &mut writer)
        .and_then(|()| writer.flush())
        .map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
}

/// Parse an SNR grid given as `start:stop:step` (dB, inclusive) or a single
/// value.
pub fn parse_snr_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Validation(format!("invalid SNR value `{s}`")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            // Negated so NaN steps are rejected too.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(step > 0.0) {
                return Err(Error::Validation(format!(
                    "SNR step must be > 0, got {step}"
                )));
            }
            if stop < start {
                return Err(Error::Validation(format!(
                    "SNR stop {stop} below start {start}"
                )));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(Error::Validation(format!(
            "SNR grid must be `value` or `start:stop:step`, got `{text}`"
        ))),
    }
}
