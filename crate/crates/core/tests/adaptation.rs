use proptest::prelude::*;

use stsmc::adaptation::{normalized_acceleration, AdaptationConfig, ErrorHistory, SlopeAdapter};

proptest! {
    #[test]
    fn same_sign_rates_need_no_clamp(a in 1e-9f64..1e3, b in 1e-9f64..1e3, neg: bool) {
        let (a, b) = if neg { (-a, -b) } else { (a, b) };
        let denom = if a.abs() >= b.abs() { a } else { b };
        let raw = (a - b) / denom;
        prop_assert!((-1.0..=1.0).contains(&raw));
        prop_assert_eq!(normalized_acceleration(a, b), raw);
    }

    #[test]
    fn rate_always_bounded(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let r = normalized_acceleration(a, b);
        prop_assert!(r.is_finite() && r.abs() <= 1.0);
    }

    #[test]
    fn coefficient_stays_in_bounds(e in -50.0f64..50.0, r in -3.0f64..3.0) {
        let cfg = AdaptationConfig::for_reference(12.0).unwrap();
        let kc = cfg.coefficient_factor(e, r).unwrap();
        prop_assert!(kc >= cfg.kc_min() && kc <= cfg.kc_max() && kc > 0.0);
    }

    #[test]
    fn error_sign_does_not_matter(e in 0.0f64..20.0, r in -1.0f64..1.0) {
        let cfg = AdaptationConfig::for_reference(12.0).unwrap();
        prop_assert_eq!(
            cfg.coefficient_factor(e, r).unwrap(),
            cfg.coefficient_factor(-e, r).unwrap()
        );
    }
}

fn rates(samples: &[f64]) -> Vec<f64> {
    let mut h = ErrorHistory::new();
    samples
        .iter()
        .filter_map(|&e| {
            let inc = h.push(e);
            inc.warm
                .then(|| normalized_acceleration(inc.de, inc.de_prev))
        })
        .collect()
}

#[test]
fn rate_is_independent_of_time_constant() {
    // e(t) = E·exp(-t/τ) sampled at dt = τ/40: the ratio de(k)/de(k-1) is
    // the same for every τ and amplitude.
    let curve = |amp: f64, tau: f64| -> Vec<f64> {
        let dt = tau / 40.0;
        (0..200)
            .map(|k| amp * (-(k as f64) * dt / tau).exp())
            .collect()
    };
    let a = rates(&curve(12.0, 1e-3));
    let b = rates(&curve(3.0, 7.5e-2));
    assert_eq!(a.len(), 198);
    // de(·) is the older, larger increment, so r_v = exp(-dt/τ) - 1
    let expected = (-1.0 / 40.0f64).exp() - 1.0;
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        assert!((x - expected).abs() < 1e-9, "{x} vs {expected}");
    }
    assert!(a.iter().all(|&r| r < 0.0), "a decaying exponential is slow");
}

#[test]
fn slow_response_raises_the_slope_at_zero_error() {
    let cfg = AdaptationConfig::for_reference(12.0).unwrap();
    let slow = cfg.coefficient_factor(0.0, -1.0).unwrap();
    let medium = cfg.coefficient_factor(0.0, 0.0).unwrap();
    assert!(slow > medium, "{slow} vs {medium}");
}

#[test]
fn adapter_warms_up_then_follows_the_fis() {
    let cfg = AdaptationConfig::for_reference(12.0).unwrap();
    let mut adapter = SlopeAdapter::new(cfg.clone());
    let errors = [12.0, 11.0, 9.0, 6.0, 3.0];
    let updates: Vec<_> = errors.iter().map(|&e| adapter.update(e).unwrap()).collect();
    assert!(updates[..2].iter().all(|u| !u.warm && u.k_c == 1.0));
    for (k, u) in updates.iter().enumerate().skip(2) {
        let de = errors[k] - errors[k - 1];
        let de_prev = errors[k - 1] - errors[k - 2];
        assert!(u.warm);
        assert_eq!(u.r_v, normalized_acceleration(de, de_prev));
        assert_eq!(u.k_c, cfg.coefficient_factor(errors[k], u.r_v).unwrap());
    }
}
