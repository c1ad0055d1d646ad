//! The spatially homogeneous seasonal model `z' = -delta z` (bad season),
//! `z' = z (a - b z)` (good season) and its positive periodic orbit.

use crate::model::SeasonParams;
use crate::spectral::{margin_regime, MarginRegime};

/// Unique positive periodic solution `z*` of the seasonal ODE.
///
/// With `A = exp(-delta rho omega)` and `B = exp(a (1 - rho) omega)`,
/// `z*(0) = a (A B - 1) / (b A (B - 1))`, which exists iff `A B > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdePeriodicSolution {
    pub params: SeasonParams,
    pub z0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeReference {
    Periodic(OdePeriodicSolution),
    /// `(1 - rho) a - rho delta <= 0`: every solution tends to zero.
    NoPositiveSolution,
}

impl OdeReference {
    pub fn periodic(&self) -> Option<&OdePeriodicSolution> {
        match self {
            OdeReference::Periodic(s) => Some(s),
            OdeReference::NoPositiveSolution => None,
        }
    }
}

pub fn ode_periodic_solution(p: &SeasonParams) -> OdeReference {
    if margin_regime(p) == MarginRegime::ExtinctAll {
        return OdeReference::NoPositiveSolution;
    }
    let a_factor = (-p.delta * p.bad_season_length()).exp();
    // A B - 1 and B - 1 without cancellation
    let ab_m1 = (p.growth_margin() * p.omega).exp_m1();
    let b_m1 = (p.a * p.good_season_length()).exp_m1();
    OdeReference::Periodic(OdePeriodicSolution {
        params: *p,
        z0: p.a * ab_m1 / (p.b * a_factor * b_m1),
    })
}

impl OdePeriodicSolution {
    /// `z*(t)`, extended periodically.
    pub fn value(&self, t: f64) -> f64 {
        let p = &self.params;
        let tau = t.rem_euclid(p.omega);
        let bad = p.bad_season_length();
        if tau <= bad {
            (-p.delta * tau).exp() * self.z0
        } else {
            logistic_flow(p, (-p.delta * bad).exp() * self.z0, tau - bad)
        }
    }
}

/// Exact logistic flow `z(tau)` of `z' = z (a - b z)` from `z`.
pub fn logistic_flow(p: &SeasonParams, z: f64, tau: f64) -> f64 {
    let e = (-p.a * tau).exp();
    z / (e + p.b * z / p.a * (1.0 - e))
}

/// Exact solution of the seasonal ODE at time `t >= 0` from `z(0) = z0`.
pub fn seasonal_ode_value(p: &SeasonParams, z0: f64, t: f64) -> f64 {
    let periods = (t / p.omega).floor();
    let mut z = z0;
    for _ in 0..periods as usize {
        z = seasonal_ode_period(p, z);
    }
    let tau = t - periods * p.omega;
    let bad = p.bad_season_length();
    if tau <= bad {
        (-p.delta * tau).exp() * z
    } else {
        logistic_flow(p, (-p.delta * bad).exp() * z, tau - bad)
    }
}

/// One period of the seasonal ODE.
pub fn seasonal_ode_period(p: &SeasonParams, z: f64) -> f64 {
    let after_bad = (-p.delta * p.bad_season_length()).exp() * z;
    logistic_flow(p, after_bad, p.good_season_length())
}
