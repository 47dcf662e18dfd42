//! Averaged DC-DC buck converter in continuous conduction.
//!
//! ```text
//! L · diL/dt = d·vin - vC
//! C · dvC/dt = iL - vC/R
//! ```

use crate::error::{check_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuckParams {
    pub vin_nominal: f64,
    pub inductance: f64,
    pub capacitance: f64,
    pub r_nominal: f64,
}

impl Default for BuckParams {
    /// 20 V input, 100 µH, 100 µF, 10 Ω.
    fn default() -> Self {
        Self {
            vin_nominal: 20.0,
            inductance: 100e-6,
            capacitance: 100e-6,
            r_nominal: 10.0,
        }
    }
}

impl BuckParams {
    pub fn new(
        vin_nominal: f64,
        inductance: f64,
        capacitance: f64,
        r_nominal: f64,
    ) -> Result<Self> {
        Self {
            vin_nominal,
            inductance,
            capacitance,
            r_nominal,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        check_positive("vin_nominal", self.vin_nominal)?;
        check_positive("inductance", self.inductance)?;
        check_positive("capacitance", self.capacitance)?;
        check_positive("r_nominal", self.r_nominal)?;
        Ok(self)
    }

    /// LC resonance, rad/s.
    pub fn natural_frequency(&self) -> f64 {
        1.0 / (self.inductance * self.capacitance).sqrt()
    }

    /// `(diL/dt, dvC/dt)`. `load = f64::INFINITY` models an open output.
    pub fn derivatives(
        &self,
        state: BuckState,
        duty: f64,
        vin: f64,
        load: f64,
    ) -> Result<(f64, f64)> {
        check_load(load)?;
        Ok(self
            .derivatives_unchecked([state.i_l, state.v_c], duty, vin, load)
            .into())
    }

    fn derivatives_unchecked(&self, y: [f64; 2], duty: f64, vin: f64, load: f64) -> [f64; 2] {
        let [i_l, v_c] = y;
        [
            (duty * vin - v_c) / self.inductance,
            (i_l - v_c / load) / self.capacitance,
        ]
    }

    /// One classic RK4 step with duty, vin and load held over `dt`.
    pub fn rk4_step(
        &self,
        state: BuckState,
        duty: f64,
        vin: f64,
        load: f64,
        dt: f64,
    ) -> Result<BuckState> {
        check_load(load)?;
        check_positive("dt", dt)?;
        let y = rk4_step(
            |y| self.derivatives_unchecked(y, duty, vin, load),
            [state.i_l, state.v_c],
            dt,
        );
        Ok(BuckState {
            i_l: y[0],
            v_c: y[1],
        })
    }

    /// Stored energy `½L·iL² + ½C·vC²`, joules.
    pub fn energy(&self, state: BuckState) -> f64 {
        0.5 * self.inductance * state.i_l * state.i_l
            + 0.5 * self.capacitance * state.v_c * state.v_c
    }
}

fn check_load(load: f64) -> Result<()> {
    if load > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "R",
            value: load,
            reason: "load resistance must be strictly positive",
        })
    }
}

/// Fixed-step fourth-order Runge–Kutta step for an autonomous system.
pub fn rk4_step<const N: usize, F>(f: F, y: [f64; N], dt: f64) -> [f64; N]
where
    F: Fn([f64; N]) -> [f64; N],
{
    let offset = |base: &[f64; N], k: &[f64; N], h: f64| {
        let mut out = *base;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += h * ki;
        }
        out
    };
    let k1 = f(y);
    let k2 = f(offset(&y, &k1, dt / 2.0));
    let k3 = f(offset(&y, &k2, dt / 2.0));
    let k4 = f(offset(&y, &k3, dt));
    let mut out = y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BuckState {
    /// Inductor current, A.
    pub i_l: f64,
    /// Output (capacitor) voltage, V.
    pub v_c: f64,
}

impl BuckState {
    pub fn is_finite(&self) -> bool {
        self.i_l.is_finite() && self.v_c.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbanceEvent {
    pub t: f64,
    pub vin: Option<f64>,
    pub load: Option<f64>,
}

/// Time-ordered steps of input voltage and/or load.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DisturbanceSchedule {
    events: Vec<DisturbanceEvent>,
}

impl DisturbanceSchedule {
    pub fn new(events: Vec<DisturbanceEvent>) -> Result<Self> {
        let mut last: Option<f64> = None;
        for ev in &events {
            if !(ev.t >= 0.0 && ev.t.is_finite()) {
                return Err(Error::Schedule(format!(
                    "event time {} is negative or not finite",
                    ev.t
                )));
            }
            if let Some(prev) = last {
                if ev.t <= prev {
                    return Err(Error::Schedule(format!(
                        "event times must strictly increase ({} after {})",
                        ev.t, prev
                    )));
                }
            }
            if let Some(v) = ev.vin {
                check_positive("vin", v)?;
            }
            if let Some(r) = ev.load {
                check_load(r)?;
            }
            last = Some(ev.t);
        }
        Ok(Self { events })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn events(&self) -> &[DisturbanceEvent] {
        &self.events
    }

    /// `(vin, R)` in force at `t`; an event at exactly `t` already applies.
    pub fn at(&self, t: f64, defaults: &BuckParams) -> (f64, f64) {
        self.events.iter().take_while(|ev| ev.t <= t).fold(
            (defaults.vin_nominal, defaults.r_nominal),
            |(vin, r), ev| (ev.vin.unwrap_or(vin), ev.load.unwrap_or(r)),
        )
    }
}
