//! JSON scenario ingestion.
//!
//! The document mirrors [`Scenario`](super::Scenario) field for field; every
//! dB-valued input carries a `_db` key suffix and is converted to a linear
//! ratio on load. Unknown keys are rejected, and parse errors name the JSON
//! path of the offending field.

use serde::Deserialize;

use super::{
    db_to_linear, AntennaPattern, EstimatePower, FadingProfile, Interferer, NomaAllocation,
    Scenario, UserLink,
};
use crate::error::{Error, Result};

/// Marker alias so callers can match on scenario-document failures.
pub type ScenarioDocError = Error;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    tx_power_db: f64,
    antenna: AntennaDoc,
    allocation: AllocationDoc,
    users: Vec<UserDoc>,
    clusters: Vec<Vec<InterfererDoc>>,
    #[serde(default)]
    estimate_power: EstimatePowerDoc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntennaDoc {
    main_gain_db: f64,
    side_gain_db: f64,
    beamwidth_rad: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationDoc {
    alphas: Vec<f64>,
    sic_residuals: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FadingDoc {
    shape: f64,
    #[serde(default = "one")]
    mean_power: f64,
    path_loss_exp: f64,
    los: bool,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UserDoc {
    distance_m: f64,
    fading: FadingDoc,
    #[serde(default)]
    csi_error_var: f64,
    #[serde(default = "one")]
    awgn_var: f64,
    #[serde(default)]
    hw_impairment: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InterfererDoc {
    distance_m: f64,
    tx_power_db: f64,
    fading: FadingDoc,
    #[serde(default)]
    hw_impairment: f64,
    #[serde(default = "one_u32")]
    ring_index: u32,
    #[serde(default)]
    polar_angle_rad: f64,
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Deserialize, Default, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum EstimatePowerDoc {
    #[default]
    Unit,
    OneMinusErrorVar,
}

impl From<EstimatePowerDoc> for EstimatePower {
    fn from(doc: EstimatePowerDoc) -> Self {
        match doc {
            EstimatePowerDoc::Unit => EstimatePower::Unit,
            EstimatePowerDoc::OneMinusErrorVar => EstimatePower::OneMinusErrorVar,
        }
    }
}

impl FadingDoc {
    fn build(&self) -> Result<FadingProfile> {
        FadingProfile::new(self.shape, self.mean_power, self.path_loss_exp, self.los)
    }
}

impl Scenario {
    /// Parse and validate a scenario from a JSON document.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ScenarioDoc = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Parse(format!("at `{path}`: {}", e.into_inner()))
        })?;
        doc.build()
    }

    /// Read and parse a scenario JSON file.
    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }
}

impl ScenarioDoc {
    fn build(self) -> Result<Scenario> {
        let antenna = AntennaPattern::new(
            db_to_linear(self.antenna.main_gain_db),
            db_to_linear(self.antenna.side_gain_db),
            self.antenna.beamwidth_rad,
        )?;
        let allocation = NomaAllocation::new(self.allocation.alphas, self.allocation.sic_residuals)?;
        let users = self
            .users
            .iter()
            .map(|u| {
                UserLink::new(
                    u.distance_m,
                    u.fading.build()?,
                    u.csi_error_var,
                    u.awgn_var,
                    u.hw_impairment,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let clusters = self
            .clusters
            .iter()
            .map(|cluster| {
                cluster
                    .iter()
                    .map(|i| {
                        Interferer::new(
                            i.distance_m,
                            db_to_linear(i.tx_power_db),
                            i.fading.build()?,
                            i.hw_impairment,
                            i.ring_index,
                            i.polar_angle_rad,
                        )
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Scenario::new(
            db_to_linear(self.tx_power_db),
            antenna,
            allocation,
            users,
            clusters,
            self.estimate_power.into(),
        )
    }
}
