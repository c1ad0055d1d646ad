//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use seasonal_dispersal::model::{BoundaryCondition, Grid, KernelSpec, SeasonParams};
use seasonal_dispersal::operator::OperatorMatrix;

pub fn p1() -> SeasonParams {
    SeasonParams::new(0.2, 1.2, 0.6, 0.6, 0.6, 1.0).unwrap()
}

pub fn p2() -> SeasonParams {
    SeasonParams { d: 1.0, ..p1() }
}

pub fn p3() -> SeasonParams {
    SeasonParams { delta: 0.8, ..p1() }
}

/// Exact bad-season decay followed by the closed-form logistic flow.
pub fn ode_period(p: &SeasonParams, z: f64) -> f64 {
    ode_flow(p, z, p.omega)
}

/// Exact solution of the scalar seasonal ODE after time `tau` in `[0, omega]`,
/// starting at a period boundary.
pub fn ode_flow(p: &SeasonParams, z: f64, tau: f64) -> f64 {
    let bad = p.rho * p.omega;
    if tau <= bad {
        return z * (-p.delta * tau).exp();
    }
    let z = z * (-p.delta * bad).exp();
    let g = (p.a * (tau - bad)).exp();
    z * g / (1.0 + p.b * z * (g - 1.0) / p.a)
}

pub fn ode_at(p: &SeasonParams, z0: f64, t: f64) -> f64 {
    let k = (t / p.omega + 1e-12).floor();
    let mut z = z0;
    for _ in 0..k as usize {
        z = ode_period(p, z);
    }
    ode_flow(p, z, (t - k * p.omega).max(0.0))
}

/// Composite Simpson rule.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(lo + k as f64 * h);
    }
    s * h / 3.0
}

/// Weight `K_ij = ∫_{cell j} J(x_i - y) dy` by quadrature, split at the kink.
pub fn brute_weight(kernel: &KernelSpec, grid: &Grid, i: usize, j: usize, per_cell: usize) -> f64 {
    let h = grid.dx();
    let xi = grid.node(i);
    let (lo, hi) = (grid.node(j) - 0.5 * h, grid.node(j) + 0.5 * h);
    let f = |y: f64| kernel.eval(xi - y);
    if xi > lo && xi < hi {
        simpson(f, lo, xi, per_cell) + simpson(f, xi, hi, per_cell)
    } else {
        simpson(f, lo, hi, per_cell)
    }
}

/// Dense `K` from the operator, as an nalgebra matrix.
pub fn dense_weights(op: &OperatorMatrix) -> DMatrix<f64> {
    let n = op.len();
    DMatrix::from_fn(n, n, |i, j| op.weight(i, j))
}

/// Dense matrix of the full linear good-season generator `L + a I`.
pub fn dense_generator(op: &OperatorMatrix, a: f64) -> DMatrix<f64> {
    let n = op.len();
    let d = op.d();
    let k = dense_weights(op);
    DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j {
            match op.bc() {
                BoundaryCondition::DirichletNonlocal => -d + a,
                BoundaryCondition::NeumannNonlocal => -d * op.row_mass()[i] + a,
            }
        } else {
            0.0
        };
        d * k[(i, j)] + diag
    })
}

/// Largest eigenvalue of the symmetric weight matrix and its eigenvector
/// scaled to sup-norm one, via a full symmetric eigendecomposition.
pub fn dense_perron(op: &OperatorMatrix) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(dense_weights(op));
    let (idx, mu) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let v = eig.eigenvectors.column(idx);
    let s = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (mu, v.iter().map(|x| s * x / vmax).collect())
}

/// `σ₁ = d - a - d μ_max` from the dense eigendecomposition (Dirichlet).
pub fn dense_sigma1(op: &OperatorMatrix, a: f64) -> f64 {
    let (mu, _) = dense_perron(op);
    op.d() - a - op.d() * mu
}

/// Matrix exponential by scaling and squaring with a degree-18 Taylor sum.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.iter().map(|x| x.abs()).fold(0.0, f64::max) * n as f64;
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=18 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn to_dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn loglog_slope(h: &[f64], e: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}
