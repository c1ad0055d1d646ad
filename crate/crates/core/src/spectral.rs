//! Principal eigenvalues, the seasonal persistence threshold and the
//! critical habitat length.
//!
//! For the Dirichlet operator the time-independent problem
//! `d (K phi - phi) + a phi = -sigma phi` is solved by power iteration on the
//! nonnegative symmetric matrix `d K`; its Perron root `r` gives
//! `sigma_1 = d - a - r`. The time-periodic threshold is then
//! `lambda_1 = (1 - rho) sigma_1 + rho delta`: the population persists
//! exactly when `lambda_1 < 0`.

use crate::error::{Error, Result};
use crate::model::{BoundaryCondition, Grid, KernelSpec, SeasonParams, StateVector, RATE_ZERO_TOL};
use crate::operator::{assemble, OperatorMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIterationOptions {
    pub max_iter: usize,
    /// Stop once successive Rayleigh quotients differ by less than this...
    pub rq_tol: f64,
    /// ...and the eigen residual is below this.
    pub residual_tol: f64,
}

impl Default for PowerIterationOptions {
    fn default() -> Self {
        PowerIterationOptions {
            max_iter: 100_000,
            rq_tol: 1e-12,
            residual_tol: 1e-9,
        }
    }
}

/// Principal eigenvalue and positive eigenfunction of the time-independent
/// problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub sigma1: f64,
    /// Positive, normalized to unit sup-norm.
    pub phi1: Vec<f64>,
    /// `max_i |d (K phi - phi) + a phi + sigma1 phi|_i`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub sigma1: f64,
    pub lambda1: f64,
    pub bc: BoundaryCondition,
}

impl ThresholdReport {
    pub fn persists(&self) -> bool {
        self.lambda1 < 0.0
    }
}

pub fn principal_eigenpair(op: &OperatorMatrix, a: f64) -> Result<EigenPair> {
    principal_eigenpair_with(op, a, &PowerIterationOptions::default())
}

/// Power iteration for the Dirichlet operator.
///
/// The Neumann operator annihilates constants and is negative semidefinite,
/// so its principal pair is `(-a, 1)` and is returned without iterating.
pub fn principal_eigenpair_with(
    op: &OperatorMatrix,
    a: f64,
    opts: &PowerIterationOptions,
) -> Result<EigenPair> {
    let n = op.len();
    let d = op.d();
    if op.bc() == BoundaryCondition::NeumannNonlocal {
        let phi1 = vec![1.0; n];
        let lphi = op.apply(&phi1)?;
        let residual = lphi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        return Ok(EigenPair {
            sigma1: -a,
            phi1,
            residual,
            iterations: 0,
        });
    }

    let grid = op.grid();
    let len = grid.length();
    let mut v: Vec<f64> = (0..n)
        .map(|i| (std::f64::consts::PI * (grid.node(i) - grid.l1()) / len).sin())
        .collect();
    normalize_l2(&mut v);
    let mut w = vec![0.0; n];
    let mut mu_prev = f64::NAN;
    let mut residual = f64::INFINITY;

    for iter in 1..=opts.max_iter {
        op.weights_into(&v, &mut w);
        let mu: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        residual = d * w
            .iter()
            .zip(&v)
            .fold(0.0f64, |m, (wi, vi)| m.max((wi - mu * vi).abs()))
            / vmax;

        if (mu - mu_prev).abs() < opts.rq_tol && residual < opts.residual_tol {
            let phi1: Vec<f64> = v.iter().map(|x| x / vmax).collect();
            if let Some(bad) = phi1.iter().position(|&x| x <= 0.0) {
                return Err(Error::EigenNoConvergence {
                    iterations: iter,
                    residual: phi1[bad],
                });
            }
            return Ok(EigenPair {
                sigma1: d - a - d * mu,
                phi1,
                residual,
                iterations: iter,
            });
        }
        mu_prev = mu;
        std::mem::swap(&mut v, &mut w);
        normalize_l2(&mut v);
    }
    Err(Error::EigenNoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

fn normalize_l2(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// Seasonal threshold eigenvalue for a given habitat.
pub fn threshold(p: &SeasonParams, op: &OperatorMatrix) -> Result<ThresholdReport> {
    if (op.d() - p.d).abs() > 1e-14 * p.d {
        return Err(Error::param(
            "d",
            format!("operator assembled with d = {}, parameters have d = {}", op.d(), p.d),
        ));
    }
    let sigma1 = match op.bc() {
        BoundaryCondition::NeumannNonlocal => -p.a,
        BoundaryCondition::DirichletNonlocal => principal_eigenpair(op, p.a)?.sigma1,
    };
    Ok(ThresholdReport {
        sigma1,
        lambda1: lambda_from_sigma(p, sigma1),
        bc: op.bc(),
    })
}

/// `(1 - rho) sigma_1 + rho delta`.
pub fn lambda_from_sigma(p: &SeasonParams, sigma1: f64) -> f64 {
    (1.0 - p.rho) * sigma1 + p.rho * p.delta
}

/// `phi(t, .) = exp[lambda_1 t - ∫_0^t sigma(s) ds] phi_1`, where `sigma`
/// is `delta` in the bad season and `sigma_1` in the good season.
///
/// `t` is reduced modulo `omega`; the function is periodic.
pub fn periodic_eigenfunction(p: &SeasonParams, e: &EigenPair, t: f64) -> StateVector {
    let factor = periodic_eigen_factor(p, e.sigma1, t);
    StateVector::new(e.phi1.iter().map(|x| factor * x).collect(), t)
}

/// The scalar `exp[...]` multiplying `phi_1` in [`periodic_eigenfunction`].
pub fn periodic_eigen_factor(p: &SeasonParams, sigma1: f64, t: f64) -> f64 {
    let tau = t.rem_euclid(p.omega);
    let lambda1 = lambda_from_sigma(p, sigma1);
    let bad = p.bad_season_length();
    let integral = p.delta * tau.min(bad) + sigma1 * (tau - bad).max(0.0);
    (lambda1 * tau - integral).exp()
}

/// Node count for an eigen solve on a habitat of the given length.
///
/// Tracks the kernel scale with 64 nodes per unit of `D`, at least 256 and
/// at most [`MAX_EIGEN_NODES`] to keep the dense operator in memory.
pub fn eigen_grid_nodes(length: f64, scale: f64) -> usize {
    let wanted = (64.0 * length / scale).ceil();
    if wanted.is_nan() {
        return 256;
    }
    (wanted as usize).clamp(256, MAX_EIGEN_NODES)
}

pub const MAX_EIGEN_NODES: usize = 4096;

/// Threshold on the centred habitat `[-length/2, length/2]` under Dirichlet
/// conditions, resolved with [`eigen_grid_nodes`].
pub fn threshold_at_length(
    p: &SeasonParams,
    kernel: &KernelSpec,
    length: f64,
) -> Result<ThresholdReport> {
    let n = eigen_grid_nodes(length, kernel.length_scale());
    let grid = Grid::centered(length, n)?;
    let op = assemble(kernel, &grid, BoundaryCondition::DirichletNonlocal, p.d)?;
    threshold(p, &op)
}

/// Bracket around the habitat length where `lambda_1` changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLength {
    /// Midpoint of the final bracket.
    pub ell_star: f64,
    /// Longest length found with `lambda_1 >= 0`.
    pub lower: f64,
    /// Shortest length found with `lambda_1 < 0`.
    pub upper: f64,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub evaluations: usize,
}

impl CriticalLength {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalLengthOutcome {
    /// `(1-rho) a - rho delta > (1-rho) d`: persistence on every habitat.
    PersistAllDomains,
    /// `(1-rho) a - rho delta <= 0`: extinction on every habitat.
    ExtinctAllDomains,
    Critical(CriticalLength),
}

/// Which of the three regimes the rates fall in, decided from the growth
/// margin alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginRegime {
    PersistAll,
    LengthDependent,
    ExtinctAll,
}

pub fn margin_regime(p: &SeasonParams) -> MarginRegime {
    let tol = RATE_ZERO_TOL * p.rate_scale();
    let margin = p.growth_margin();
    if margin <= tol {
        MarginRegime::ExtinctAll
    } else if margin - p.dispersal_budget() > tol {
        MarginRegime::PersistAll
    } else {
        MarginRegime::LengthDependent
    }
}

/// Finds the critical length by bracketing from `D` (doubling or halving)
/// and then bisecting until the bracket is at most `tol` wide.
pub fn critical_length(
    p: &SeasonParams,
    kernel: &KernelSpec,
    tol: f64,
) -> Result<CriticalLengthOutcome> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::param("tol", format!("must be positive, got {tol}")));
    }
    match margin_regime(p) {
        MarginRegime::PersistAll => return Ok(CriticalLengthOutcome::PersistAllDomains),
        MarginRegime::ExtinctAll => return Ok(CriticalLengthOutcome::ExtinctAllDomains),
        MarginRegime::LengthDependent => {}
    }

    let scale = kernel.length_scale();
    let mut evaluations = 0usize;
    let mut lambda_at = |len: f64| -> Result<f64> {
        evaluations += 1;
        Ok(threshold_at_length(p, kernel, len)?.lambda1)
    };

    let start = scale;
    let l0 = lambda_at(start)?;
    let (mut lo, mut hi, mut lam_lo, mut lam_hi);
    if l0 < 0.0 {
        hi = start;
        lam_hi = l0;
        lo = 0.5 * start;
        lam_lo = lambda_at(lo)?;
        while lam_lo < 0.0 {
            if lo < 1e-9 * scale {
                return Err(Error::BracketExpansion {
                    max_length: lo,
                    reason: "threshold stays negative as the habitat shrinks".into(),
                });
            }
            hi = lo;
            lam_hi = lam_lo;
            lo *= 0.5;
            lam_lo = lambda_at(lo)?;
        }
    } else {
        lo = start;
        lam_lo = l0;
        hi = 2.0 * start;
        lam_hi = lambda_at(hi)?;
        while lam_hi >= 0.0 {
            if hi > 1e4 * scale {
                return Err(Error::BracketExpansion {
                    max_length: hi,
                    reason: format!("threshold still {lam_hi:e} >= 0"),
                });
            }
            lo = hi;
            lam_lo = lam_hi;
            hi *= 2.0;
            lam_hi = lambda_at(hi)?;
        }
    }

    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let lam = lambda_at(mid)?;
        if lam < 0.0 {
            hi = mid;
            lam_hi = lam;
        } else {
            lo = mid;
            lam_lo = lam;
        }
    }

    Ok(CriticalLengthOutcome::Critical(CriticalLength {
        ell_star: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        lambda_lower: lam_lo,
        lambda_upper: lam_hi,
        evaluations,
    }))
}
