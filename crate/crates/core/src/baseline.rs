//! Comparison controllers: a first-order sliding-mode fuzzy controller with a
//! seven-set single-input rule base, and a plain sign-switching SMC.

use crate::error::{check_positive, Error, Result};
use crate::fuzzy::{center_of_sets, Partition};
use crate::supertwisting::sign;

pub const FOSMFLC_LABELS: [&str; 7] = ["NB", "NM", "NS", "ZE", "PS", "PM", "PB"];

#[derive(Debug, Clone)]
pub struct FosmflcConfig {
    /// Fixed surface slope, 1/s.
    pub c: f64,
    /// Surface value mapped to the input universe bound (`S / s_scale ∈ [-1, 1]`).
    pub s_scale: f64,
    partition_in: Partition,
    partition_out: Partition,
    pub output_gain: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub d0: f64,
}

impl FosmflcConfig {
    /// Seven-set partitions over `[-1, 1]` for both input and output.
    pub fn new(c: f64, s_scale: f64, output_gain: f64, d0: f64) -> Result<Self> {
        let p = Partition::uniform(&FOSMFLC_LABELS, -1.0, 1.0)?;
        Self::with_partitions(c, s_scale, p.clone(), p, output_gain, 0.0, 1.0, d0)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_partitions(
        c: f64,
        s_scale: f64,
        partition_in: Partition,
        partition_out: Partition,
        output_gain: f64,
        u_min: f64,
        u_max: f64,
        d0: f64,
    ) -> Result<Self> {
        check_positive("c", c)?;
        check_positive("s_scale", s_scale)?;
        check_positive("output_gain", output_gain)?;
        for p in [&partition_in, &partition_out] {
            if p.len() != 7 {
                return Err(Error::Partition(format!(
                    "baseline partitions need exactly 7 sets, got {}",
                    p.len()
                )));
            }
        }
        check_bounds(u_min, u_max, d0)?;
        Ok(Self {
            c,
            s_scale,
            partition_in,
            partition_out,
            output_gain,
            u_min,
            u_max,
            d0,
        })
    }

    pub fn partition_in(&self) -> &Partition {
        &self.partition_in
    }

    pub fn partition_out(&self) -> &Partition {
        &self.partition_out
    }

    /// Defuzzified output for surface `s`, before gain and feedforward.
    /// Rule `i` maps input set `i` to output set `i`.
    pub fn correction(&self, s: f64) -> f64 {
        let weights = self.partition_in.fuzzify(s / self.s_scale);
        center_of_sets(&self.partition_out, &weights)
            .expect("a uniform partition always fires one of its sets")
    }
}

fn check_bounds(u_min: f64, u_max: f64, d0: f64) -> Result<()> {
    if !(u_min.is_finite() && u_max.is_finite() && u_min < u_max) {
        return Err(Error::Parameter {
            name: "u_max",
            value: u_max,
            reason: "actuator bounds must satisfy u_min < u_max",
        });
    }
    if !(u_min..=u_max).contains(&d0) {
        return Err(Error::Parameter {
            name: "d0",
            value: d0,
            reason: "feedforward must lie within the actuator bounds",
        });
    }
    Ok(())
}

/// `clamp(d0 + output_gain · fuzzy(S / s_scale), u_min, u_max)`.
pub fn fosmflc_step(s: f64, cfg: &FosmflcConfig) -> f64 {
    (cfg.d0 + cfg.output_gain * cfg.correction(s)).clamp(cfg.u_min, cfg.u_max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSmc {
    pub gain: f64,
    pub d0: f64,
    pub u_min: f64,
    pub u_max: f64,
}

impl ClassicalSmc {
    pub fn new(gain: f64, d0: f64, u_min: f64, u_max: f64) -> Result<Self> {
        check_positive("gain", gain)?;
        check_bounds(u_min, u_max, d0)?;
        Ok(Self {
            gain,
            d0,
            u_min,
            u_max,
        })
    }
}

/// `clamp(d0 + gain · sign(S), u_min, u_max)`.
pub fn classical_smc_step(s: f64, cfg: &ClassicalSmc) -> f64 {
    (cfg.d0 + cfg.gain * sign(s)).clamp(cfg.u_min, cfg.u_max)
}
