//! Model data: rates, dispersal kernels, the spatial mesh and state vectors.

mod grid;
mod kernel;
mod params;
mod state;

pub use grid::Grid;
pub use kernel::{kernel_mass, KernelSpec, TabulatedKernel, TABLE_MASS_TOL};
pub use params::{validate_params, SeasonParams, RATE_ZERO_TOL};
pub use state::{sup_distance, sup_norm, StateVector, TOL_POS};

/// How the habitat interacts with the outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Individuals jumping out of `[l1, l2]` are lost (`u = 0` outside).
    DirichletNonlocal,
    /// Jumps only redistribute mass inside `[l1, l2]`.
    NeumannNonlocal,
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::DirichletNonlocal => "dirichlet",
            BoundaryCondition::NeumannNonlocal => "neumann",
        }
    }
}
