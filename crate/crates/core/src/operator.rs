//! Discretized nonlocal dispersal operators on a bounded habitat.
//!
//! The interval convolution `∫_{l1}^{l2} J(x_i - y) u(y) dy` is replaced by
//! `Σ_j K_ij u_j`. With a uniform cell-centred grid the weight matrix is a
//! symmetric Toeplitz matrix, `K_ij = c_{|i-j|}`.
//!
//! Dirichlet:  `(Lu)_i = d (Σ_j K_ij u_j - u_i)`
//! Neumann:    `(Lu)_i = d (Σ_j K_ij u_j - m_i u_i)`, with `m_i = Σ_j K_ij`.

use crate::error::{Error, Result};
use crate::model::{BoundaryCondition, Grid, KernelSpec};

/// Tolerance on the row-mass upper bound `m_i <= 1`.
pub const ROW_MASS_TOL: f64 = 1e-9;

/// How the kernel is sampled into matrix weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// `K_ij = ∫_{cell j} J(x_i - y) dy`: the kernel is integrated exactly
    /// over each cell and `u` is taken constant per cell. Row masses are the
    /// exact masses `∫_{l1}^{l2} J(x_i - y) dy < 1`.
    #[default]
    CellIntegral,
    /// `K_ij = J(x_i - x_j) dx`. Interior row masses can exceed one once the
    /// habitat is much wider than the kernel, which assembly rejects.
    Nodal,
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    bc: BoundaryCondition,
    rule: QuadratureRule,
    grid: Grid,
    d: f64,
    /// Row-major n x n weights.
    weights: Vec<f64>,
    row_mass: Vec<f64>,
}

/// Assembles the operator with the default [`QuadratureRule::CellIntegral`].
pub fn assemble(
    kernel: &KernelSpec,
    grid: &Grid,
    bc: BoundaryCondition,
    d: f64,
) -> Result<OperatorMatrix> {
    assemble_with_rule(kernel, grid, bc, d, QuadratureRule::default())
}

pub fn assemble_with_rule(
    kernel: &KernelSpec,
    grid: &Grid,
    bc: BoundaryCondition,
    d: f64,
    rule: QuadratureRule,
) -> Result<OperatorMatrix> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::param("d", format!("must be strictly positive, got {d}")));
    }
    let n = grid.len();
    let h = grid.dx();
    let band: Vec<f64> = (0..n)
        .map(|k| match rule {
            QuadratureRule::CellIntegral => {
                let off = k as f64 * h;
                kernel.integral(off - 0.5 * h, off + 0.5 * h)
            }
            QuadratureRule::Nodal => kernel.eval(k as f64 * h) * h,
        })
        .collect();
    if band[0] <= 0.0 {
        return Err(Error::InvalidKernel(
            "kernel weight at zero offset vanishes; J(0) must be positive".into(),
        ));
    }

    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        let row = &mut weights[i * n..(i + 1) * n];
        for (j, w) in row.iter_mut().enumerate() {
            *w = band[i.abs_diff(j)];
        }
    }
    let row_mass: Vec<f64> = weights.chunks_exact(n).map(|r| r.iter().sum()).collect();
    if let Some((node, &mass)) = row_mass
        .iter()
        .enumerate()
        .find(|(_, m)| **m > 1.0 + ROW_MASS_TOL)
    {
        return Err(Error::RowMassExceeded { node, mass });
    }

    Ok(OperatorMatrix {
        bc,
        rule,
        grid: *grid,
        d,
        weights,
        row_mass,
    })
}

impl OperatorMatrix {
    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Dispersal rate the operator was assembled with.
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.len() + j]
    }

    pub fn weight_row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn row_mass(&self) -> &[f64] {
        &self.row_mass
    }

    /// Applies the dispersal operator `L`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u.len())?;
        let mut out = vec![0.0; u.len()];
        self.apply_into(u, &mut out);
        Ok(out)
    }

    /// `out = L u`. Lengths must already match.
    pub fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.len());
        debug_assert_eq!(out.len(), self.len());
        for (i, o) in out.iter_mut().enumerate() {
            let conv = dot(self.weight_row(i), u);
            let loss = match self.bc {
                BoundaryCondition::DirichletNonlocal => u[i],
                BoundaryCondition::NeumannNonlocal => self.row_mass[i] * u[i],
            };
            *o = self.d * (conv - loss);
        }
    }

    /// `out = K u` (the bare weight matrix, no rate, no loss term).
    pub fn weights_into(&self, u: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.weight_row(i), u);
        }
    }

    pub(crate) fn check_len(&self, actual: usize) -> Result<()> {
        if actual != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual,
            });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}
