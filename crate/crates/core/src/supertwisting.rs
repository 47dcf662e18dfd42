//! Super-twisting sliding-mode law on the linear surface `S = ė + c_eff·e`.
//!
//! Discrete form, at control period `dt`:
//!
//! ```text
//! z   <- z + dir·K2·φ2(S)·dt            (skipped while it would deepen saturation)
//! u    = clamp(d0 + dir·K1·φ1(S) + z, u_min, u_max)
//! φ1(S) = |S|^½ sign(S),   φ2(S) = ½ sign(S)
//! ```
//!
//! `dir = -1` is the textbook sign convention; `dir = +1` suits plants whose
//! surface decreases when the control increases (a buck converter with
//! `e = r - y`).

use crate::error::{check_nonnegative, check_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Positive,
    Negative,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Self::Positive => 1.0,
            Self::Negative => -1.0,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Self::Positive),
            -1 => Ok(Self::Negative),
            other => Err(Error::Parameter {
                name: "direction",
                value: other as f64,
                reason: "must be +1 or -1",
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StGains {
    pub k1: f64,
    pub k2: f64,
    /// Predetermined surface slope, 1/s.
    pub c: f64,
    pub direction: Direction,
    pub u_min: f64,
    pub u_max: f64,
    /// Feedforward duty.
    pub d0: f64,
    /// Width of the linear zone `|S| < δ` in which `φ1` is replaced by
    /// `S/√δ`. Zero keeps the pure square-root law.
    pub phi1_boundary: f64,
}

impl StGains {
    /// Gains with duty bounds `[0, 1]`, positive direction and no boundary layer.
    pub fn new(k1: f64, k2: f64, c: f64, d0: f64) -> Result<Self> {
        Self {
            k1,
            k2,
            c,
            direction: Direction::Positive,
            u_min: 0.0,
            u_max: 1.0,
            d0,
            phi1_boundary: 0.0,
        }
        .validated()
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_bounds(mut self, u_min: f64, u_max: f64) -> Result<Self> {
        self.u_min = u_min;
        self.u_max = u_max;
        self.validated()
    }

    pub fn with_phi1_boundary(mut self, boundary: f64) -> Result<Self> {
        self.phi1_boundary = boundary;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        check_nonnegative("k1", self.k1)?;
        check_nonnegative("k2", self.k2)?;
        check_positive("c", self.c)?;
        if !(self.u_min.is_finite() && self.u_max.is_finite() && self.u_min < self.u_max) {
            return Err(Error::Parameter {
                name: "u_max",
                value: self.u_max,
                reason: "actuator bounds must satisfy u_min < u_max",
            });
        }
        if !(self.u_min..=self.u_max).contains(&self.d0) {
            return Err(Error::Parameter {
                name: "d0",
                value: self.d0,
                reason: "feedforward must lie within the actuator bounds",
            });
        }
        if !(self.phi1_boundary >= 0.0 && self.phi1_boundary.is_finite()) {
            return Err(Error::Parameter {
                name: "phi1_boundary",
                value: self.phi1_boundary,
                reason: "must be finite and nonnegative",
            });
        }
        Ok(self)
    }

    /// `φ1` including the optional linear zone.
    pub fn phi1(&self, s: f64) -> f64 {
        phi1_with_boundary(s, self.phi1_boundary)
    }

    /// Largest `|Δu|` one step can produce when `S` moves at most `jump`
    /// away from `s_prev`, before saturation.
    ///
    /// `φ1` is monotone, so its largest change over `[s_prev - J, s_prev + J]`
    /// is attained at an endpoint; the integral adds at most `K2·dt/2`.
    pub fn step_increment_bound(&self, s_prev: f64, jump: f64, dt: f64) -> f64 {
        let here = self.phi1(s_prev);
        let up = (self.phi1(s_prev + jump) - here).abs();
        let down = (self.phi1(s_prev - jump) - here).abs();
        self.k1 * up.max(down) + 0.5 * self.k2 * dt
    }
}

/// `k_c · c`, rejecting nonpositive factors.
pub fn effective_slope(c: f64, k_c: f64) -> Result<f64> {
    check_positive("c", c)?;
    check_positive("k_c", k_c)?;
    Ok(k_c * c)
}

/// `S = ė + c_eff·e`.
pub fn sliding_surface(e: f64, edot: f64, c_eff: f64) -> f64 {
    edot + c_eff * e
}

/// `sign` with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(φ1, φ2) = (|S|^½ sign(S), ½ sign(S))`.
pub fn st_correction_terms(s: f64) -> (f64, f64) {
    (s.abs().sqrt() * sign(s), 0.5 * sign(s))
}

/// `φ1` made linear inside `|S| < δ` so that it is Lipschitz at the origin;
/// identical to the square-root law for `|S| ≥ δ` and for `δ = 0`.
pub fn phi1_with_boundary(s: f64, boundary: f64) -> f64 {
    if boundary > 0.0 && s.abs() < boundary {
        s / boundary.sqrt()
    } else {
        s.abs().sqrt() * sign(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Saturation {
    #[default]
    None,
    Upper,
    Lower,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StState {
    /// Integral accumulator, in control units.
    pub z: f64,
    /// Saturation status of the previous output.
    pub saturation: Saturation,
}

impl StState {
    pub fn new() -> Self {
        Self::default()
    }
}

/// One control period of the super-twisting law. Returns the clamped duty.
pub fn st_step(s: f64, dt: f64, gains: &StGains, state: &mut StState) -> Result<f64> {
    check_positive("dt", dt)?;
    let dir = gains.direction.sign();
    let (_, phi2) = st_correction_terms(s);

    let dz = dir * gains.k2 * phi2 * dt;
    let deepens = match state.saturation {
        Saturation::Upper => dz > 0.0,
        Saturation::Lower => dz < 0.0,
        Saturation::None => false,
    };
    if !deepens {
        let span = gains.u_max - gains.u_min;
        state.z = (state.z + dz).clamp(-span, span);
    }

    let raw = gains.d0 + dir * gains.k1 * gains.phi1(s) + state.z;
    let (u, saturation) = if raw > gains.u_max {
        (gains.u_max, Saturation::Upper)
    } else if raw < gains.u_min {
        (gains.u_min, Saturation::Lower)
    } else {
        (raw, Saturation::None)
    };
    state.saturation = saturation;
    Ok(u)
}

/// Gains plus state for one loop.
#[derive(Debug, Clone)]
pub struct SuperTwisting {
    gains: StGains,
    state: StState,
}

impl SuperTwisting {
    pub fn new(gains: StGains) -> Self {
        Self {
            gains,
            state: StState::new(),
        }
    }

    pub fn gains(&self) -> &StGains {
        &self.gains
    }

    pub fn state(&self) -> &StState {
        &self.state
    }

    pub fn step(&mut self, s: f64, dt: f64) -> Result<f64> {
        st_step(s, dt, &self.gains, &mut self.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn effective_slope_examples() {
        assert_eq!(effective_slope(100.0, 1.0).unwrap(), 100.0);
        assert_abs_diff_eq!(effective_slope(100.0, 1.8).unwrap(), 180.0, epsilon = 1e-12);
        assert_abs_diff_eq!(effective_slope(100.0, 0.2).unwrap(), 20.0, epsilon = 1e-12);
        assert!(effective_slope(0.0, 1.0).is_err());
        assert!(effective_slope(100.0, -0.5).is_err());
    }

    #[test]
    fn surface_examples() {
        assert_eq!(sliding_surface(0.0, 0.0, 42.0), 0.0);
        assert_eq!(sliding_surface(1.0, 0.0, 100.0), 100.0);
        assert_eq!(sliding_surface(1.0, -100.0, 100.0), 0.0);
    }

    #[test]
    fn correction_term_examples() {
        assert_eq!(st_correction_terms(4.0), (2.0, 0.5));
        assert_eq!(st_correction_terms(0.0), (0.0, 0.0));
        assert_eq!(st_correction_terms(-0.25), (-0.5, -0.5));
    }

    #[test]
    fn boundary_layer_is_continuous_and_exact_outside() {
        let delta = 9.0;
        assert_abs_diff_eq!(phi1_with_boundary(delta, delta), 3.0);
        assert_abs_diff_eq!(
            phi1_with_boundary(delta - 1e-12, delta),
            3.0,
            epsilon = 1e-12
        );
        assert_eq!(phi1_with_boundary(-16.0, delta), -4.0);
        assert_eq!(phi1_with_boundary(-4.5, delta), -1.5);
        assert_eq!(phi1_with_boundary(4.0, 0.0), 2.0);
    }

    #[test]
    fn step_examples() {
        let mut state = StState::new();
        let gains = StGains::new(0.1, 1.0, 1.0, 0.6).unwrap();
        assert_eq!(st_step(0.0, 1e-3, &gains, &mut state).unwrap(), 0.6);

        let gains = StGains::new(0.1, 0.0, 1.0, 0.6).unwrap();
        let mut state = StState::new();
        assert_abs_diff_eq!(
            st_step(4.0, 1e-3, &gains, &mut state).unwrap(),
            0.8,
            epsilon = 1e-12
        );

        let gains = StGains::new(0.0, 2.0, 1.0, 0.5).unwrap();
        let mut state = StState::new();
        let u = st_step(1.0, 1e-3, &gains, &mut state).unwrap();
        assert_abs_diff_eq!(state.z, 0.001, epsilon = 1e-15);
        assert_abs_diff_eq!(u, 0.501, epsilon = 1e-12);
    }

    #[test]
    fn literal_sign_convention() {
        let gains = StGains::new(0.1, 1.0, 1.0, 0.5)
            .unwrap()
            .with_direction(Direction::Negative);
        let mut state = StState::new();
        let u = st_step(4.0, 1e-3, &gains, &mut state).unwrap();
        assert_abs_diff_eq!(u, 0.5 - 0.2 - 0.5e-3, epsilon = 1e-12);
        assert!(state.z < 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let gains = StGains::new(0.1, 1.0, 1.0, 0.5).unwrap();
        assert!(st_step(1.0, 0.0, &gains, &mut StState::new()).is_err());
        assert!(StGains::new(-0.1, 1.0, 1.0, 0.5).is_err());
        assert!(StGains::new(0.1, 1.0, 0.0, 0.5).is_err());
        assert!(StGains::new(1.0, 1.0, 1.0, 1.5).is_err());
        assert!(gains.clone().with_bounds(1.0, 0.0).is_err());
        assert!(gains.with_phi1_boundary(-1.0).is_err());
        assert!(Direction::from_sign(0).is_err());
    }

    #[test]
    fn anti_windup_freezes_integral() {
        let gains = StGains::new(1.0, 1000.0, 1.0, 0.5).unwrap();
        let mut state = StState::new();
        for _ in 0..10_000 {
            let u = st_step(1e6, 1e-3, &gains, &mut state).unwrap();
            assert_eq!(u, 1.0);
        }
        // only the first step integrates before saturation is detected
        assert_abs_diff_eq!(state.z, 0.5, epsilon = 1e-12);
        assert!(state.z.abs() <= gains.u_max - gains.u_min);
    }

    #[test]
    fn increment_bound_covers_zero_crossing() {
        let gains = StGains::new(1.0, 1.0, 1.0, 0.5).unwrap();
        // from S = 0.5 a jump of 1 may reach -0.5: Δφ1 = 2·√0.5
        let bound = gains.step_increment_bound(0.5, 1.0, 1e-9);
        assert!(bound >= 2.0 * 0.5_f64.sqrt());
    }
}
