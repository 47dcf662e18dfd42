use std::fmt;
use std::str::FromStr;

use crate::adaptation::{normalized_acceleration, AdaptationConfig, ErrorHistory, SlopeAdapter};
use crate::baseline::{classical_smc_step, fosmflc_step, ClassicalSmc, FosmflcConfig};
use crate::buck::{BuckParams, BuckState, DisturbanceEvent, DisturbanceSchedule};
use crate::error::{check_positive, Error, Result};
use crate::supertwisting::{effective_slope, sliding_surface, StGains, SuperTwisting};

use super::trace::{Trace, TraceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ControllerKind {
    Proposed,
    Fosmflc,
    ClassicalSmc,
}

impl ControllerKind {
    pub const ALL: [ControllerKind; 3] = [Self::Proposed, Self::Fosmflc, Self::ClassicalSmc];

    pub fn name(self) -> &'static str {
        match self {
            Self::Proposed => "proposed",
            Self::Fosmflc => "fosmflc",
            Self::ClassicalSmc => "classical_smc",
        }
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ControllerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownController(s.to_owned()))
    }
}

#[derive(Debug, Clone)]
pub enum ControllerConfig {
    Proposed {
        gains: StGains,
        adaptation: AdaptationConfig,
    },
    Fosmflc(FosmflcConfig),
    ClassicalSmc {
        smc: ClassicalSmc,
        /// Surface slope, 1/s.
        c: f64,
    },
}

impl ControllerConfig {
    pub fn kind(&self) -> ControllerKind {
        match self {
            Self::Proposed { .. } => ControllerKind::Proposed,
            Self::Fosmflc(_) => ControllerKind::Fosmflc,
            Self::ClassicalSmc { .. } => ControllerKind::ClassicalSmc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Disturbance {
    None,
    /// Input voltage differs from nominal from t = 0.
    StartupVin(f64),
    /// Input voltage steps at the event time.
    SteadyVin(f64),
    /// Load resistance steps at the event time.
    Load(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub disturbance: Disturbance,
}

impl CatalogEntry {
    pub fn schedule(&self, event_time: f64) -> Result<DisturbanceSchedule> {
        let event = match self.disturbance {
            Disturbance::None => return Ok(DisturbanceSchedule::empty()),
            Disturbance::StartupVin(v) => DisturbanceEvent {
                t: 0.0,
                vin: Some(v),
                load: None,
            },
            Disturbance::SteadyVin(v) => DisturbanceEvent {
                t: event_time,
                vin: Some(v),
                load: None,
            },
            Disturbance::Load(r) => DisturbanceEvent {
                t: event_time,
                vin: None,
                load: Some(r),
            },
        };
        DisturbanceSchedule::new(vec![event])
    }
}

/// The nine buck-converter experiments.
pub const CATALOG: [CatalogEntry; 9] = [
    CatalogEntry {
        name: "nominal",
        description: "20 V -> 12 V start-up, 10 ohm load",
        disturbance: Disturbance::None,
    },
    CatalogEntry {
        name: "startup-vin-18",
        description: "start-up with an 18 V input",
        disturbance: Disturbance::StartupVin(18.0),
    },
    CatalogEntry {
        name: "startup-vin-22",
        description: "start-up with a 22 V input",
        disturbance: Disturbance::StartupVin(22.0),
    },
    CatalogEntry {
        name: "steady-vin-22",
        description: "input steps 20 V -> 22 V at steady state",
        disturbance: Disturbance::SteadyVin(22.0),
    },
    CatalogEntry {
        name: "steady-vin-18",
        description: "input steps 20 V -> 18 V at steady state",
        disturbance: Disturbance::SteadyVin(18.0),
    },
    CatalogEntry {
        name: "load-20",
        description: "load steps 10 ohm -> 20 ohm",
        disturbance: Disturbance::Load(20.0),
    },
    CatalogEntry {
        name: "load-5",
        description: "load steps 10 ohm -> 5 ohm",
        disturbance: Disturbance::Load(5.0),
    },
    CatalogEntry {
        name: "load-100",
        description: "load steps 10 ohm -> 100 ohm",
        disturbance: Disturbance::Load(100.0),
    },
    CatalogEntry {
        name: "load-1",
        description: "load steps 10 ohm -> 1 ohm",
        disturbance: Disturbance::Load(1.0),
    },
];

pub fn catalog_entry(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_owned()))
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub name: String,
    pub vref: f64,
    pub duration: f64,
    pub dt: f64,
    pub plant: BuckParams,
    pub disturbances: DisturbanceSchedule,
    pub controller: ControllerConfig,
    /// Time constant of the low-pass applied to the differenced error, s.
    pub edot_filter_tau: f64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("dt", self.dt)?;
        check_positive("vref", self.vref)?;
        self.plant.validated()?;
        if !(self.duration >= 100.0 * self.dt && self.duration.is_finite()) {
            return Err(Error::Parameter {
                name: "duration",
                value: self.duration,
                reason: "must cover at least 100 control periods",
            });
        }
        if !(self.edot_filter_tau >= 0.0 && self.edot_filter_tau.is_finite()) {
            return Err(Error::Parameter {
                name: "edot_filter_tau",
                value: self.edot_filter_tau,
                reason: "must be finite and nonnegative",
            });
        }
        Ok(())
    }

    /// `floor(duration / dt) + 1`, tolerant of `duration / dt` landing a hair
    /// below an integer.
    pub fn sample_count(&self) -> usize {
        let ratio = self.duration / self.dt;
        let nearest = ratio.round();
        let steps = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest
        } else {
            ratio.floor()
        };
        steps as usize + 1
    }

    /// First disturbance strictly after start-up.
    pub fn event_time(&self) -> Option<f64> {
        self.disturbances
            .events()
            .iter()
            .map(|e| e.t)
            .find(|&t| t > 0.0)
    }
}

enum Loop {
    Proposed {
        adapter: Box<SlopeAdapter>,
        st: SuperTwisting,
    },
    Fosmflc {
        history: ErrorHistory,
        cfg: FosmflcConfig,
    },
    Classical {
        history: ErrorHistory,
        smc: ClassicalSmc,
        c: f64,
    },
}

struct LoopOutput {
    s: f64,
    u: f64,
    k_c: f64,
    r_v: f64,
}

impl Loop {
    fn new(cfg: &ControllerConfig) -> Self {
        match cfg {
            ControllerConfig::Proposed { gains, adaptation } => Self::Proposed {
                adapter: Box::new(SlopeAdapter::new(adaptation.clone())),
                st: SuperTwisting::new(gains.clone()),
            },
            ControllerConfig::Fosmflc(cfg) => Self::Fosmflc {
                history: ErrorHistory::new(),
                cfg: cfg.clone(),
            },
            ControllerConfig::ClassicalSmc { smc, c } => Self::Classical {
                history: ErrorHistory::new(),
                smc: smc.clone(),
                c: *c,
            },
        }
    }

    fn step(&mut self, e: f64, edot: f64, dt: f64) -> Result<LoopOutput> {
        // r_v is recorded for every controller; only the proposed one uses it
        let rate = |history: &mut ErrorHistory| {
            let inc = history.push(e);
            normalized_acceleration(inc.de, inc.de_prev)
        };
        match self {
            Self::Proposed { adapter, st } => {
                let update = adapter.update(e)?;
                let c_eff = effective_slope(st.gains().c, update.k_c)?;
                let s = sliding_surface(e, edot, c_eff);
                let u = st.step(s, dt)?;
                Ok(LoopOutput {
                    s,
                    u,
                    k_c: update.k_c,
                    r_v: update.r_v,
                })
            }
            Self::Fosmflc { history, cfg } => {
                let s = sliding_surface(e, edot, cfg.c);
                Ok(LoopOutput {
                    s,
                    u: fosmflc_step(s, cfg),
                    k_c: 1.0,
                    r_v: rate(history),
                })
            }
            Self::Classical { history, smc, c } => {
                let s = sliding_surface(e, edot, *c);
                Ok(LoopOutput {
                    s,
                    u: classical_smc_step(s, smc),
                    k_c: 1.0,
                    r_v: rate(history),
                })
            }
        }
    }
}

/// Simulates the closed loop from a discharged converter.
///
/// Per period: read the disturbance schedule, measure `e = vref - vC`,
/// estimate `ė` by a filtered backward difference, run the controller, and
/// advance the plant one RK4 step with the duty held.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Trace> {
    cfg.validate()?;
    let n = cfg.sample_count();
    let dt = cfg.dt;
    let alpha = dt / (cfg.edot_filter_tau + dt);

    let mut trace = Trace::with_capacity(n);
    let mut control = Loop::new(&cfg.controller);
    let mut state = BuckState::default();
    let mut e_prev: Option<f64> = None;
    let mut edot = 0.0;

    for k in 0..n {
        let t = k as f64 * dt;
        let (vin, load) = cfg.disturbances.at(t, &cfg.plant);
        let e = cfg.vref - state.v_c;
        if let Some(prev) = e_prev {
            edot += alpha * ((e - prev) / dt - edot);
        }
        e_prev = Some(e);

        let out = control.step(e, edot, dt)?;
        trace.records.push(TraceRecord {
            t,
            v_c: state.v_c,
            i_l: state.i_l,
            e,
            edot,
            s: out.s,
            u: out.u,
            k_c: out.k_c,
            r_v: out.r_v,
            vin,
            load,
        });

        if k + 1 < n {
            state = cfg.plant.rk4_step(state, out.u, vin, load, dt)?;
            if !state.is_finite() {
                return Err(Error::NonFinite {
                    step: k + 1,
                    t: t + dt,
                });
            }
        }
    }
    Ok(trace)
}
