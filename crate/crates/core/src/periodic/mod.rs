//! Periodic attractors, regime classification and the large-habitat profile.
//!
//! A positive periodic solution is a positive fixed point of the period map
//! `P`. It is located by iterating `P` from an upper datum (a constant above
//! the carrying capacity) and from a lower datum (a small multiple of the
//! principal eigenfunction). Comparison makes the first sequence
//! non-increasing and the second non-decreasing; when the two meet, the
//! fixed point is unique.

mod classify;
mod ode;
mod profile;

pub use classify::{classify, DynamicsClassification, Regime, DEFAULT_LENGTH_TOL};
pub use ode::{
    logistic_flow, ode_periodic_solution, seasonal_ode_period, seasonal_ode_value,
    OdePeriodicSolution, OdeReference,
};
pub use profile::{asymptotic_profile_study, ProfileOptions, ProfileRow, ProfileStudy};

use crate::error::{Error, Result};
use crate::evolution::{StepControl, Stepper};
use crate::model::{sup_distance, sup_norm, Grid, SeasonParams, StateVector};
use crate::operator::OperatorMatrix;
use crate::spectral::{lambda_from_sigma, periodic_eigen_factor, EigenPair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicOptions {
    pub max_periods: usize,
    /// Converged once `|upper - lower|_∞ <= gap_tol * max(1, |upper|_∞)`.
    pub gap_tol: f64,
    /// Sup-norm below which the upper iterate counts as extinct.
    pub extinction_floor: f64,
    /// Upper datum is `a / b + upper_margin`.
    pub upper_margin: f64,
    /// First trial for the lower-datum multiplier; default `0.1 a / b`.
    pub epsilon0: Option<f64>,
    pub max_halvings: usize,
    /// `|lambda_1|` below which a stalled run is reported as slow rather than failed.
    pub near_threshold: f64,
    /// Keep every iterate in the trace.
    pub keep_iterates: bool,
}

impl Default for PeriodicOptions {
    fn default() -> Self {
        PeriodicOptions {
            max_periods: 5000,
            gap_tol: 1e-9,
            extinction_floor: 1e-10,
            upper_margin: 1.0,
            epsilon0: None,
            max_halvings: 60,
            near_threshold: 1e-3,
            keep_iterates: false,
        }
    }
}

/// A sampled positive periodic solution over one period.
#[derive(Debug, Clone)]
pub struct PeriodicSolution {
    pub grid: Grid,
    /// States at `t = 0, ..., omega`.
    pub samples: Vec<StateVector>,
    /// `|P(u*(0)) - u*(0)|_∞`.
    pub residual: f64,
    pub lambda1: f64,
}

impl PeriodicSolution {
    pub fn initial(&self) -> &StateVector {
        &self.samples[0]
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.sup_norm())
            .fold(0.0, f64::max)
    }
}

/// Per-iterate record of the upper/lower sandwich.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateRecord {
    pub upper_sup: f64,
    pub lower_sup: f64,
    /// `|upper - lower|_∞`.
    pub gap: f64,
    /// `gamma_n = max_i ln(upper_i / lower_i)`.
    pub log_ratio: f64,
    /// `max_i (upper^{n+1}_i - upper^n_i)`; should not be positive.
    pub upper_increase: f64,
    /// `max_i (lower^n_i - lower^{n+1}_i)`; should not be positive.
    pub lower_decrease: f64,
    /// `max_i (lower_i - upper_i)`; should not be positive.
    pub crossing: f64,
}

#[derive(Debug, Clone, Default)]
pub struct MonotoneIterationTrace {
    pub upper_start: f64,
    pub epsilon: f64,
    /// Record `n` compares iterate `n + 1` with iterate `n`.
    pub records: Vec<IterateRecord>,
    pub upper: Vec<Vec<f64>>,
    pub lower: Vec<Vec<f64>>,
}

impl MonotoneIterationTrace {
    /// Whether the sandwich `lower^n <= lower^{n+1} <= upper^{n+1} <= upper^n`
    /// and the non-increase of `gamma_n` hold to `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        let steps_ok = self
            .records
            .iter()
            .all(|r| r.upper_increase <= tol && r.lower_decrease <= tol && r.crossing <= tol);
        let gamma_ok = self
            .records
            .windows(2)
            .all(|w| w[1].log_ratio <= w[0].log_ratio + tol);
        steps_ok && gamma_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionEvidence {
    pub lambda1: f64,
    pub periods: usize,
    pub final_sup_norm: f64,
    /// The upper iterate dropped below the extinction floor.
    pub reached_floor: bool,
    /// Sup-norms decreased at every period.
    pub monotone_decay: bool,
    /// `|lambda_1|` is within the near-threshold band.
    pub near_threshold: bool,
}

#[derive(Debug, Clone)]
pub enum PeriodicOutcome {
    Periodic {
        solution: PeriodicSolution,
        trace: MonotoneIterationTrace,
    },
    Extinction(ExtinctionEvidence),
    /// Budget exhausted with `|lambda_1|` in the near-threshold band.
    IndeterminateSlow { lambda1: f64, periods: usize, gap: f64 },
}

impl PeriodicOutcome {
    pub fn solution(&self) -> Option<&PeriodicSolution> {
        match self {
            PeriodicOutcome::Periodic { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

pub fn find_periodic_solution(
    p: &SeasonParams,
    op: &OperatorMatrix,
    e: &EigenPair,
    ctl: &StepControl,
) -> Result<PeriodicOutcome> {
    find_periodic_solution_with(p, op, e, ctl, &PeriodicOptions::default())
}

pub fn find_periodic_solution_with(
    p: &SeasonParams,
    op: &OperatorMatrix,
    e: &EigenPair,
    ctl: &StepControl,
    opts: &PeriodicOptions,
) -> Result<PeriodicOutcome> {
    op.check_len(e.phi1.len())?;
    let lambda1 = lambda_from_sigma(p, e.sigma1);
    let near = lambda1.abs() < opts.near_threshold;
    let mut stepper = Stepper::new(p, op, ctl)?;
    let n = op.len();
    let upper_start = p.carrying_capacity() + opts.upper_margin;
    let mut upper = vec![upper_start; n];

    if lambda1 >= 0.0 {
        let mut prev = sup_norm(&upper);
        let mut monotone = true;
        for period in 1..=opts.max_periods {
            stepper.period_map_in_place(&mut upper)?;
            let s = sup_norm(&upper);
            monotone &= s < prev;
            prev = s;
            if s < opts.extinction_floor {
                return Ok(PeriodicOutcome::Extinction(ExtinctionEvidence {
                    lambda1,
                    periods: period,
                    final_sup_norm: s,
                    reached_floor: true,
                    monotone_decay: monotone,
                    near_threshold: near,
                }));
            }
        }
        if monotone {
            return Ok(PeriodicOutcome::Extinction(ExtinctionEvidence {
                lambda1,
                periods: opts.max_periods,
                final_sup_norm: prev,
                reached_floor: false,
                monotone_decay: true,
                near_threshold: near,
            }));
        }
        return if near {
            Ok(PeriodicOutcome::IndeterminateSlow {
                lambda1,
                periods: opts.max_periods,
                gap: prev,
            })
        } else {
            Err(Error::BudgetExhausted {
                periods: opts.max_periods,
                gap: prev,
                lambda1,
            })
        };
    }

    let epsilon = lower_multiplier(p, op, e, lambda1, opts)?;
    let mut lower: Vec<f64> = e.phi1.iter().map(|x| epsilon * x).collect();
    let mut trace = MonotoneIterationTrace {
        upper_start,
        epsilon,
        ..Default::default()
    };
    if opts.keep_iterates {
        trace.upper.push(upper.clone());
        trace.lower.push(lower.clone());
    }

    let mut next_upper = upper.clone();
    let mut next_lower = lower.clone();
    let mut gap = sup_distance(&upper, &lower);
    let mut converged = false;
    for _ in 0..opts.max_periods {
        next_upper.copy_from_slice(&upper);
        next_lower.copy_from_slice(&lower);
        stepper.period_map_in_place(&mut next_upper)?;
        stepper.period_map_in_place(&mut next_lower)?;

        let record = compare_iterates(&upper, &next_upper, &lower, &next_lower);
        gap = record.gap;
        trace.records.push(record);
        std::mem::swap(&mut upper, &mut next_upper);
        std::mem::swap(&mut lower, &mut next_lower);
        if opts.keep_iterates {
            trace.upper.push(upper.clone());
            trace.lower.push(lower.clone());
        }
        if gap <= opts.gap_tol * sup_norm(&upper).max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return if near {
            Ok(PeriodicOutcome::IndeterminateSlow {
                lambda1,
                periods: opts.max_periods,
                gap,
            })
        } else {
            Err(Error::BudgetExhausted {
                periods: opts.max_periods,
                gap,
                lambda1,
            })
        };
    }

    let start: Vec<f64> = upper.iter().zip(&lower).map(|(u, l)| 0.5 * (u + l)).collect();
    let mut samples = vec![StateVector::new(start.clone(), 0.0)];
    let mut u = start;
    stepper.advance(&mut u, 0.0, p.omega, |t, v| {
        samples.push(StateVector::new(v.to_vec(), t))
    })?;
    let residual = sup_distance(&samples[0].values, &u);
    Ok(PeriodicOutcome::Periodic {
        solution: PeriodicSolution {
            grid: *op.grid(),
            samples,
            residual,
            lambda1,
        },
        trace,
    })
}

fn compare_iterates(upper: &[f64], next_upper: &[f64], lower: &[f64], next_lower: &[f64]) -> IterateRecord {
    let mut rec = IterateRecord {
        upper_sup: sup_norm(next_upper),
        lower_sup: sup_norm(next_lower),
        gap: 0.0,
        log_ratio: 0.0,
        upper_increase: f64::NEG_INFINITY,
        lower_decrease: f64::NEG_INFINITY,
        crossing: f64::NEG_INFINITY,
    };
    for i in 0..upper.len() {
        rec.gap = rec.gap.max((next_upper[i] - next_lower[i]).abs());
        rec.log_ratio = rec.log_ratio.max((next_upper[i] / next_lower[i]).ln());
        rec.upper_increase = rec.upper_increase.max(next_upper[i] - upper[i]);
        rec.lower_decrease = rec.lower_decrease.max(lower[i] - next_lower[i]);
        rec.crossing = rec.crossing.max(next_lower[i] - next_upper[i]);
    }
    rec
}

/// Largest `epsilon = epsilon0 / 2^k` for which `epsilon * phi(t, .)` is a
/// lower solution, checked node by node through the discrete eigen identity.
///
/// In the bad season the requirement reduces to `lambda_1 <= 0`. In the good
/// season it reads `lambda_1 phi_i + b epsilon f phi_i^2 - r_i <= 0`, where
/// `r` is the eigen residual vector and `f` the largest value of the
/// periodic factor over the good season.
fn lower_multiplier(
    p: &SeasonParams,
    op: &OperatorMatrix,
    e: &EigenPair,
    lambda1: f64,
    opts: &PeriodicOptions,
) -> Result<f64> {
    let phi = &e.phi1;
    let lphi = op.apply(phi)?;
    let residual: Vec<f64> = lphi
        .iter()
        .zip(phi)
        .map(|(l, x)| l + (p.a + e.sigma1) * x)
        .collect();
    let factor = periodic_eigen_factor(p, e.sigma1, p.bad_season_length()).max(1.0);
    let phi_max = sup_norm(phi);
    let mut epsilon = opts
        .epsilon0
        .unwrap_or(0.1 * p.carrying_capacity() / phi_max);
    for _ in 0..=opts.max_halvings {
        let ok = phi.iter().zip(&residual).all(|(x, r)| {
            lambda1 * x + p.b * epsilon * factor * x * x - r <= 0.0
        });
        if ok {
            return Ok(epsilon);
        }
        epsilon *= 0.5;
    }
    Err(Error::Regime(format!(
        "no lower solution of the form epsilon * phi found after {} halvings",
        opts.max_halvings
    )))
}
