use std::fmt;

use crate::error::Result;
use crate::model::{BoundaryCondition, Grid, KernelSpec, SeasonParams, RATE_ZERO_TOL};
use crate::operator::assemble;
use crate::spectral::{critical_length, threshold, CriticalLength, CriticalLengthOutcome};

/// Bracket width used by [`classify`] when it has to locate the critical length.
pub const DEFAULT_LENGTH_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    PersistAllDomains,
    CriticalLength(CriticalLength),
    ExtinctAllDomains,
    /// Neumann, `delta rho - a (1 - rho) < 0`.
    Persist,
    /// Neumann, `delta rho - a (1 - rho) >= 0`.
    Extinct,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::PersistAllDomains => "PersistAllDomains",
            Regime::CriticalLength(_) => "CriticalLength",
            Regime::ExtinctAllDomains => "ExtinctAllDomains",
            Regime::Persist => "Persist",
            Regime::Extinct => "Extinct",
        }
    }

    pub fn ell_star(&self) -> Option<f64> {
        match self {
            Regime::CriticalLength(c) => Some(c.ell_star),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::CriticalLength(c) => write!(f, "CriticalLength({})", c.ell_star),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsClassification {
    pub bc: BoundaryCondition,
    pub regime: Regime,
    /// Threshold of the supplied habitat (always present for Neumann).
    pub lambda1: Option<f64>,
    pub sigma1: Option<f64>,
    pub growth_margin: f64,
    /// `lambda1 < 0` for the supplied habitat.
    pub domain_persists: Option<bool>,
}

/// Long-time regime of the model, optionally evaluated on a concrete habitat.
pub fn classify(
    p: &SeasonParams,
    kernel: &KernelSpec,
    bc: BoundaryCondition,
    domain: Option<&Grid>,
) -> Result<DynamicsClassification> {
    let growth_margin = p.growth_margin();
    match bc {
        BoundaryCondition::NeumannNonlocal => {
            let lambda1 = p.rho * p.delta - p.a * (1.0 - p.rho);
            let persist = lambda1 < -RATE_ZERO_TOL * p.rate_scale();
            Ok(DynamicsClassification {
                bc,
                regime: if persist { Regime::Persist } else { Regime::Extinct },
                lambda1: Some(lambda1),
                sigma1: Some(-p.a),
                growth_margin,
                domain_persists: domain.map(|_| persist),
            })
        }
        BoundaryCondition::DirichletNonlocal => {
            let regime = match critical_length(p, kernel, DEFAULT_LENGTH_TOL)? {
                CriticalLengthOutcome::PersistAllDomains => Regime::PersistAllDomains,
                CriticalLengthOutcome::ExtinctAllDomains => Regime::ExtinctAllDomains,
                CriticalLengthOutcome::Critical(c) => Regime::CriticalLength(c),
            };
            let report = match domain {
                Some(grid) => Some(threshold(p, &assemble(kernel, grid, bc, p.d)?)?),
                None => None,
            };
            Ok(DynamicsClassification {
                bc,
                regime,
                lambda1: report.map(|r| r.lambda1),
                sigma1: report.map(|r| r.sigma1),
                growth_margin,
                domain_persists: report.map(|r| r.persists()),
            })
        }
    }
}
