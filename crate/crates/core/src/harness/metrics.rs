//! Step-response metrics over sampled traces.

use super::trace::Trace;

pub const DEFAULT_BAND: f64 = 0.05;
pub const DEFAULT_TAIL: f64 = 0.1;
pub const DEFAULT_CHATTER_WINDOW: f64 = 0.2;

fn outside(y: f64, reference: f64, band_frac: f64) -> bool {
    (y - reference).abs() > band_frac * reference.abs()
}

fn tail_len(n: usize, frac: f64) -> usize {
    ((n as f64 * frac).ceil() as usize).clamp(1, n.max(1))
}

/// Earliest sample time after which `|y - reference| ≤ band_frac·|reference|`
/// holds to the end of the trace. `None` if the last sample is outside.
pub fn settling_time(t: &[f64], y: &[f64], band_frac: f64, reference: f64) -> Option<f64> {
    match y.iter().rposition(|&v| outside(v, reference, band_frac)) {
        None => t.first().copied(),
        Some(last) if last + 1 == y.len() => None,
        Some(last) => Some(t[last + 1]),
    }
}

/// `max(0, (max y - reference) / reference) · 100`.
pub fn overshoot(y: &[f64], reference: f64) -> f64 {
    let peak = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ((peak - reference) / reference * 100.0).max(0.0)
}

/// Mean of `reference - y` over the final `tail_frac` of the samples.
pub fn steady_state_error(y: &[f64], reference: f64, tail_frac: f64) -> f64 {
    let m = tail_len(y.len(), tail_frac);
    let tail = &y[y.len() - m..];
    tail.iter().map(|v| reference - v).sum::<f64>() / m as f64
}

/// Time from `t_event` until the output stays inside the band. Zero if the
/// band is never left after the event; `None` if it is not regained.
pub fn rejection_time(
    t: &[f64],
    y: &[f64],
    t_event: f64,
    band_frac: f64,
    reference: f64,
) -> Option<f64> {
    let start = t.iter().position(|&ti| ti >= t_event)?;
    match y[start..]
        .iter()
        .rposition(|&v| outside(v, reference, band_frac))
    {
        None => Some(0.0),
        Some(off) if start + off + 1 == y.len() => None,
        Some(off) => Some(t[start + off + 1] - t_event),
    }
}

/// Total variation `Σ|u[k+1] - u[k]|` over the final `window_frac` of `u`.
pub fn chattering_index(u: &[f64], window_frac: f64) -> f64 {
    if u.len() < 2 {
        return 0.0;
    }
    let m = tail_len(u.len(), window_frac).max(2);
    u[u.len() - m..]
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub settling_time_s: Option<f64>,
    pub overshoot_pct: f64,
    pub steady_state_error_v: f64,
    /// Steady-state disturbance instant, when the run has one.
    pub event_time_s: Option<f64>,
    /// `None` with `event_time_s` set means the band was not regained.
    pub rejection_time_s: Option<f64>,
    pub chattering_index: f64,
}

impl Metrics {
    pub const COLUMNS: [&'static str; 6] = [
        "settling_time_s",
        "overshoot_pct",
        "steady_state_error_v",
        "event_time_s",
        "rejection_time_s",
        "chattering_index",
    ];

    /// Default bands: 5 % settling/rejection, final 10 % for the steady-state
    /// error, final 20 % for chattering.
    pub fn from_trace(trace: &Trace, reference: f64, event_time: Option<f64>) -> Self {
        let t = trace.times();
        let y = trace.output();
        let u = trace.control();
        Self {
            settling_time_s: settling_time(&t, &y, DEFAULT_BAND, reference),
            overshoot_pct: overshoot(&y, reference),
            steady_state_error_v: steady_state_error(&y, reference, DEFAULT_TAIL),
            event_time_s: event_time,
            rejection_time_s: event_time
                .and_then(|te| rejection_time(&t, &y, te, DEFAULT_BAND, reference)),
            chattering_index: chattering_index(&u, DEFAULT_CHATTER_WINDOW),
        }
    }

    pub fn csv_fields(&self) -> [String; 6] {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.8e}")).unwrap_or_default();
        [
            opt(self.settling_time_s),
            format!("{:.8e}", self.overshoot_pct),
            format!("{:.8e}", self.steady_state_error_v),
            opt(self.event_time_s),
            opt(self.rejection_time_s),
            format!("{:.8e}", self.chattering_index),
        ]
    }
}
