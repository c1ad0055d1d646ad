use crate::error::{Error, Result};

/// Relative tolerance under which a rate difference is treated as exactly zero.
///
/// Preset (P3) has `(1-rho)*a == rho*delta` exactly, but the floating-point
/// evaluation of both products can differ in the last bit.
pub const RATE_ZERO_TOL: f64 = 1e-12;

/// The six constants of the seasonal model.
///
/// Each period of length `omega` starts with a bad season of length
/// `rho * omega` (pure decay at rate `delta`) followed by a good season of
/// length `(1 - rho) * omega` (dispersal at rate `d` plus logistic growth
/// `u (a - b u)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeasonParams {
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub rho: f64,
    pub omega: f64,
}

impl SeasonParams {
    /// Builds and validates a parameter set.
    pub fn new(delta: f64, a: f64, b: f64, d: f64, rho: f64, omega: f64) -> Result<Self> {
        validate_params(SeasonParams {
            delta,
            a,
            b,
            d,
            rho,
            omega,
        })
    }

    /// `(1 - rho) a - rho delta`: net growth of the ODE model over one period
    /// divided by `omega`.
    pub fn growth_margin(&self) -> f64 {
        (1.0 - self.rho) * self.a - self.rho * self.delta
    }

    /// `(1 - rho) d`, the dispersal loss over a good season divided by `omega`.
    pub fn dispersal_budget(&self) -> f64 {
        (1.0 - self.rho) * self.d
    }

    pub fn bad_season_length(&self) -> f64 {
        self.rho * self.omega
    }

    pub fn good_season_length(&self) -> f64 {
        (1.0 - self.rho) * self.omega
    }

    /// Carrying capacity `a / b` of the good-season logistic term.
    pub fn carrying_capacity(&self) -> f64 {
        self.a / self.b
    }

    /// Scale against which [`RATE_ZERO_TOL`] is applied for margin comparisons.
    pub(crate) fn rate_scale(&self) -> f64 {
        ((1.0 - self.rho) * self.a)
            .max(self.rho * self.delta)
            .max(self.dispersal_budget())
    }
}

/// Checks that every rate is strictly positive and finite and that
/// `rho` lies in the open unit interval.
pub fn validate_params(p: SeasonParams) -> Result<SeasonParams> {
    let positive = [
        ("delta", p.delta),
        ("a", p.a),
        ("b", p.b),
        ("d", p.d),
        ("omega", p.omega),
    ];
    for (field, value) in positive {
        if !value.is_finite() {
            return Err(Error::param(field, format!("must be finite, got {value}")));
        }
        if value <= 0.0 {
            return Err(Error::param(
                field,
                format!("must be strictly positive, got {value}"),
            ));
        }
    }
    if !(p.rho > 0.0 && p.rho < 1.0) {
        return Err(Error::param(
            "rho",
            format!("must lie strictly between 0 and 1, got {}", p.rho),
        ));
    }
    if !p.growth_margin().is_finite() {
        return Err(Error::param("a", "growth margin is not finite"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_p1() {
        let p = SeasonParams::new(0.2, 1.2, 0.6, 0.6, 0.6, 1.0).unwrap();
        assert!((p.growth_margin() - 0.36).abs() < 1e-15);
        assert!((p.dispersal_budget() - 0.24).abs() < 1e-15);
    }

    #[test]
    fn rejects_rho_on_boundary() {
        for rho in [0.0, 1.0, 1.5, -0.1, f64::NAN] {
            let err = SeasonParams::new(0.2, 1.2, 0.6, 0.6, rho, 1.0).unwrap_err();
            assert!(matches!(err, Error::InvalidParameter { field: "rho", .. }), "{err}");
        }
    }

    #[test]
    fn rejects_negative_competition() {
        let err = SeasonParams::new(0.2, 1.2, -1.0, 0.6, 0.6, 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "b", .. }));
        assert!(err.to_string().contains("`b`"));
    }

    #[test]
    fn rejects_zero_and_infinite_rates() {
        assert!(SeasonParams::new(0.0, 1.2, 0.6, 0.6, 0.6, 1.0).is_err());
        assert!(SeasonParams::new(0.2, 1.2, 0.6, f64::INFINITY, 0.6, 1.0).is_err());
        assert!(SeasonParams::new(0.2, 1.2, 0.6, 0.6, 0.6, 0.0).is_err());
    }
}
