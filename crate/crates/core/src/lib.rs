//! Logistic populations with nonlocal dispersal in a habitat that alternates
//! between a bad season (`u_t = -delta u`) and a good season
//! (`u_t = d (J * u - u) + u (a - b u)`).
//!
//! The crate covers
//! * the discretized dispersal operator on a bounded habitat ([`operator`]),
//! * the principal eigenvalue, the persistence threshold and the critical
//!   habitat length ([`spectral`]),
//! * time integration across seasons ([`evolution`]),
//! * positive periodic solutions, regime classification and the
//!   large-habitat profile ([`periodic`]),
//! * config-driven runs with CSV output ([`config`], [`scenario`], [`output`]).
//!
//! ```
//! use seasonal_dispersal::prelude::*;
//!
//! let p = SeasonParams::new(0.2, 1.2, 0.6, 0.6, 0.6, 1.0).unwrap();
//! let kernel = KernelSpec::laplace(20.0).unwrap();
//! let grid = Grid::centered(0.4, 32).unwrap();
//! let op = assemble(&kernel, &grid, BoundaryCondition::DirichletNonlocal, p.d).unwrap();
//! let report = threshold(&p, &op).unwrap();
//! assert!(report.persists());
//! ```

pub mod config;
pub mod error;
pub mod evolution;
pub mod model;
pub mod operator;
pub mod output;
pub mod periodic;
pub mod scenario;
pub mod spectral;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::evolution::{evolve, period_map, StepControl, Trajectory};
    pub use crate::model::{BoundaryCondition, Grid, KernelSpec, SeasonParams, StateVector};
    pub use crate::operator::{assemble, OperatorMatrix, QuadratureRule};
    pub use crate::periodic::{
        classify, find_periodic_solution, ode_periodic_solution, PeriodicOutcome, Regime,
    };
    pub use crate::spectral::{critical_length, principal_eigenpair, threshold, CriticalLengthOutcome};
}
