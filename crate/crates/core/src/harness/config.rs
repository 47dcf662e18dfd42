//! TOML configuration for the scenario harness.
//!
//! One file holds the plant, simulation settings, every controller's gains,
//! the `k_c` partitions and rule table, and optional per-scenario overrides.
//! [`HarnessConfig::default`] parses the committed `config/default.toml`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adaptation::AdaptationConfig;
use crate::baseline::{ClassicalSmc, FosmflcConfig};
use crate::buck::BuckParams;
use crate::error::{Error, Result};
use crate::fuzzy::{FisConfig, Partition, RuleTable};
use crate::supertwisting::{Direction, StGains};

use super::scenario::{catalog_entry, ControllerConfig, ControllerKind, ScenarioConfig};

pub const DEFAULT_CONFIG: &str = include_str!("../../config/default.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSection {
    pub vin_nominal: f64,
    pub inductance: f64,
    pub capacitance: f64,
    pub r_nominal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub vref: f64,
    pub duration: f64,
    pub dt: f64,
    pub edot_filter_tau: f64,
    /// When steady-state disturbances fire, s.
    pub event_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperTwistingSection {
    pub k1: f64,
    pub k2: f64,
    pub c: f64,
    #[serde(default = "one")]
    pub direction: i32,
    #[serde(default)]
    pub u_min: f64,
    #[serde(default = "unit")]
    pub u_max: f64,
    /// Feedforward duty; `vref / vin_nominal` when absent.
    #[serde(default)]
    pub d0: Option<f64>,
    #[serde(default)]
    pub phi1_boundary: f64,
}

fn one() -> i32 {
    1
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub labels: Vec<String>,
    pub lo: f64,
    pub hi: f64,
}

impl PartitionSpec {
    pub fn build(&self) -> Result<Partition> {
        Partition::uniform(&self.labels, self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptationSection {
    /// Normalizer for `|e|`; `|vref|` when absent.
    #[serde(default)]
    pub e_norm_scale: Option<f64>,
    pub kc_min: f64,
    pub kc_max: f64,
    pub output_gain: f64,
    pub error: PartitionSpec,
    pub rate: PartitionSpec,
    pub output: PartitionSpec,
    /// One whitespace-separated row of consequents per `error` label, in
    /// `rate` label order.
    pub rules: Vec<String>,
}

impl AdaptationSection {
    pub fn fis(&self) -> Result<FisConfig> {
        let error = self.error.build()?;
        let rate = self.rate.build()?;
        let entries = self
            .rules
            .iter()
            .map(|row| row.split_whitespace().map(str::to_owned).collect())
            .collect();
        let rules = RuleTable::new(&self.error.labels, &self.rate.labels, entries)?;
        FisConfig::new(error, rate, self.output.build()?, rules, self.output_gain)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FosmflcSection {
    /// Surface slope; the super-twisting `c` when absent.
    #[serde(default)]
    pub c: Option<f64>,
    pub s_scale: f64,
    pub output_gain: f64,
    pub input: PartitionSpec,
    pub output: PartitionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSmcSection {
    pub gain: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOverride {
    #[serde(default)]
    pub duration: Option<f64>,
    #[serde(default)]
    pub event_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    pub plant: PlantSection,
    pub simulation: SimulationSection,
    pub supertwisting: SuperTwistingSection,
    pub adaptation: AdaptationSection,
    pub fosmflc: FosmflcSection,
    pub classical_smc: ClassicalSmcSection,
    #[serde(default)]
    pub scenarios: BTreeMap<String, ScenarioOverride>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self::from_toml(DEFAULT_CONFIG).expect("committed default config parses")
    }
}

impl HarnessConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for name in cfg.scenarios.keys() {
            catalog_entry(name)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn plant(&self) -> Result<BuckParams> {
        let p = &self.plant;
        BuckParams::new(p.vin_nominal, p.inductance, p.capacitance, p.r_nominal)
    }

    fn feedforward(&self) -> f64 {
        self.supertwisting
            .d0
            .unwrap_or(self.simulation.vref / self.plant.vin_nominal)
    }

    pub fn st_gains(&self) -> Result<StGains> {
        let s = &self.supertwisting;
        StGains {
            k1: s.k1,
            k2: s.k2,
            c: s.c,
            direction: Direction::from_sign(s.direction)?,
            u_min: s.u_min,
            u_max: s.u_max,
            d0: self.feedforward(),
            phi1_boundary: s.phi1_boundary,
        }
        .validated()
    }

    pub fn adaptation(&self) -> Result<AdaptationConfig> {
        let a = &self.adaptation;
        AdaptationConfig::new(
            a.fis()?,
            a.e_norm_scale.unwrap_or(self.simulation.vref.abs()),
            a.kc_min,
            a.kc_max,
        )
    }

    pub fn fosmflc(&self) -> Result<FosmflcConfig> {
        let f = &self.fosmflc;
        let s = &self.supertwisting;
        FosmflcConfig::with_partitions(
            f.c.unwrap_or(s.c),
            f.s_scale,
            f.input.build()?,
            f.output.build()?,
            f.output_gain,
            s.u_min,
            s.u_max,
            self.feedforward(),
        )
    }

    pub fn classical_smc(&self) -> Result<ClassicalSmc> {
        let s = &self.supertwisting;
        ClassicalSmc::new(
            self.classical_smc.gain,
            self.feedforward(),
            s.u_min,
            s.u_max,
        )
    }

    pub fn controller(&self, kind: ControllerKind) -> Result<ControllerConfig> {
        Ok(match kind {
            ControllerKind::Proposed => ControllerConfig::Proposed {
                gains: self.st_gains()?,
                adaptation: self.adaptation()?,
            },
            ControllerKind::Fosmflc => ControllerConfig::Fosmflc(self.fosmflc()?),
            ControllerKind::ClassicalSmc => ControllerConfig::ClassicalSmc {
                smc: self.classical_smc()?,
                c: self.supertwisting.c,
            },
        })
    }

    /// Catalog scenario `name` driven by controller `kind`.
    pub fn scenario(&self, name: &str, kind: ControllerKind) -> Result<ScenarioConfig> {
        let entry = catalog_entry(name)?;
        let sim = &self.simulation;
        let over = self.scenarios.get(name).cloned().unwrap_or_default();
        let cfg = ScenarioConfig {
            name: entry.name.to_owned(),
            vref: sim.vref,
            duration: over.duration.unwrap_or(sim.duration),
            dt: sim.dt,
            plant: self.plant()?,
            disturbances: entry.schedule(over.event_time.unwrap_or(sim.event_time))?,
            controller: self.controller(kind)?,
            edot_filter_tau: sim.edot_filter_tau,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
