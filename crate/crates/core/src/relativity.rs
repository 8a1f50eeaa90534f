//! Lorentz boosts along x with an arbitrary invariant speed, and the numeric
//! checks built on them: interval invariance, time dilation and length
//! contraction. Units are dimensionless.

use serde::Serialize;

use crate::error::{Error, Result};

/// A spacetime event `(s, x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub s: f64,
    pub x: f64,
    pub y: f64,
}

impl Event {
    pub fn new(s: f64, x: f64, y: f64) -> Self {
        Event { s, x, y }
    }
}

/// Invariant speed and a boost speed strictly below it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoostParams {
    v_limit: f64,
    v_boost: f64,
}

impl BoostParams {
    pub fn new(v_limit: f64, v_boost: f64) -> Result<Self> {
        if !(v_limit > 0.0) || !v_limit.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "v_limit must be positive and finite, got {v_limit}"
            )));
        }
        if !(v_boost.abs() < v_limit) {
            return Err(Error::Causality { v_boost, v_limit });
        }
        Ok(BoostParams { v_limit, v_boost })
    }

    pub fn v_limit(&self) -> f64 {
        self.v_limit
    }

    pub fn v_boost(&self) -> f64 {
        self.v_boost
    }

    /// The inverse boost.
    pub fn reversed(&self) -> BoostParams {
        BoostParams {
            v_limit: self.v_limit,
            v_boost: -self.v_boost,
        }
    }
}

/// Lorentz factor `1 / sqrt(1 - v_boost² / v_limit²)`.
pub fn gamma(p: &BoostParams) -> f64 {
    let beta = p.v_boost / p.v_limit;
    1.0 / (1.0 - beta * beta).sqrt()
}

pub fn lorentz_boost(e: &Event, p: &BoostParams) -> Event {
    let g = gamma(p);
    Event {
        s: g * (e.s - p.v_boost * e.x / (p.v_limit * p.v_limit)),
        x: g * (e.x - p.v_boost * e.s),
        y: e.y,
    }
}

/// `x² + y² - (v_limit·s)²`: negative timelike, zero lightlike, positive spacelike.
pub fn interval(e: &Event, v_limit: f64) -> f64 {
    let cs = v_limit * e.s;
    e.x * e.x + e.y * e.y - cs * cs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Timelike,
    Lightlike,
    Spacelike,
}

/// Classifies an interval value, treating `|value| <= tol` as lightlike.
pub fn classify(value: f64, tol: f64) -> IntervalKind {
    if value.abs() <= tol {
        IntervalKind::Lightlike
    } else if value < 0.0 {
        IntervalKind::Timelike
    } else {
        IntervalKind::Spacelike
    }
}

/// `|interval(e) - interval(boost(e))|` at fixed `v_limit`.
pub fn check_interval_invariance(e: &Event, p: &BoostParams) -> f64 {
    let before = interval(e, p.v_limit);
    let after = interval(&lorentz_boost(e, p), p.v_limit);
    (before - after).abs()
}

/// `γ · Δs'`.
pub fn time_dilation(ds_prime: f64, p: &BoostParams) -> f64 {
    gamma(p) * ds_prime
}

/// `Δx' / γ`.
pub fn length_contraction(dx_prime: f64, p: &BoostParams) -> f64 {
    dx_prime / gamma(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: f64) -> BoostParams {
        BoostParams::new(1.0, v).unwrap()
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(&params(0.0)), 1.0);
        assert!((gamma(&params(0.6)) - 1.25).abs() < 1e-15);
        assert!((gamma(&BoostParams::new(3.0, 1.8).unwrap()) - 1.25).abs() < 1e-15);
        assert!(matches!(BoostParams::new(1.0, 1.0), Err(Error::Causality { .. })));
        assert!(matches!(BoostParams::new(1.0, -1.2), Err(Error::Causality { .. })));
        assert!(BoostParams::new(0.0, 0.0).is_err());
    }

    #[test]
    fn boost_known_values() {
        let e = Event::new(1.0, 0.5, 0.0);
        let b = lorentz_boost(&e, &params(0.6));
        assert!((b.s - 0.875).abs() < 1e-15);
        assert!((b.x + 0.125).abs() < 1e-15);
        assert_eq!(b.y, 0.0);
        assert_eq!(lorentz_boost(&e, &params(0.0)), e);
    }

    #[test]
    fn boost_round_trip() {
        let p = params(0.73);
        let e = Event::new(2.5, -1.25, 0.4);
        let back = lorentz_boost(&lorentz_boost(&e, &p), &p.reversed());
        assert!((back.s - e.s).abs() < 1e-12);
        assert!((back.x - e.x).abs() < 1e-12);
        assert_eq!(back.y, e.y);
    }

    #[test]
    fn interval_values() {
        assert_eq!(interval(&Event::new(1.0, 2.0, 0.0), 2.0), 0.0);
        assert_eq!(interval(&Event::new(0.0, 1.0, 0.0), 1.0), 1.0);
        assert_eq!(interval(&Event::new(2.0, 1.0, 1.0), 1.0), -2.0);
        assert_eq!(classify(-2.0, 1e-9), IntervalKind::Timelike);
        assert_eq!(classify(1.0, 1e-9), IntervalKind::Spacelike);
        assert_eq!(classify(1e-12, 1e-9), IntervalKind::Lightlike);
    }

    #[test]
    fn lightlike_stays_lightlike() {
        let e = Event::new(1.0, 0.6, 0.8);
        let b = lorentz_boost(&e, &params(-0.9));
        assert!(interval(&b, 1.0).abs() < 1e-9);
        assert_eq!(check_interval_invariance(&e, &params(0.0)), 0.0);
    }

    #[test]
    fn dilation_and_contraction() {
        let p = params(0.6);
        assert!((time_dilation(1.0, &p) - 1.25).abs() < 1e-15);
        assert!((length_contraction(1.0, &p) - 0.8).abs() < 1e-15);
        assert_eq!(time_dilation(3.0, &params(0.0)), 3.0);
        assert_eq!(length_contraction(3.0, &params(0.0)), 3.0);
        // boost route with the clock at rest in the primed frame (Δx' = 0)
        let ev = lorentz_boost(&Event::new(1.0, 0.0, 0.0), &p.reversed());
        assert!((ev.s - time_dilation(1.0, &p)).abs() < 1e-15);
        assert!((time_dilation(2.0, &p) * length_contraction(5.0, &p) - 10.0).abs() < 1e-12);
    }
}
