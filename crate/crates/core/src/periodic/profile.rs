use rayon::prelude::*;

use super::{find_periodic_solution_with, ode_periodic_solution, OdePeriodicSolution, PeriodicOptions, PeriodicOutcome, PeriodicSolution};
use crate::error::{Error, Result};
use crate::evolution::StepControl;
use crate::model::{BoundaryCondition, Grid, KernelSpec, SeasonParams};
use crate::operator::assemble;
use crate::spectral::principal_eigenpair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    /// Grid nodes per unit of kernel length scale.
    pub nodes_per_scale: f64,
    pub min_nodes: usize,
    pub steps_per_good_season: usize,
    /// Largest-habitat deviation must stay below `bound_fraction * z*(0)`.
    pub bound_fraction: f64,
    /// Allowed relative increase between successive deviations.
    pub slack: f64,
    pub periodic: PeriodicOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            nodes_per_scale: 8.0,
            min_nodes: 32,
            steps_per_good_season: 400,
            bound_fraction: 0.05,
            slack: 0.1,
            periodic: PeriodicOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProfileRow {
    pub length: f64,
    pub nodes: usize,
    pub lambda1: f64,
    /// `max |u*(t, x) - z*(t)|` over the period samples and `|x| <= length / 4`.
    pub deviation: f64,
    pub solution: PeriodicSolution,
}

#[derive(Debug, Clone)]
pub struct ProfileStudy {
    pub z_star: OdePeriodicSolution,
    pub rows: Vec<ProfileRow>,
    pub bound: f64,
    /// Each deviation is at most `(1 + slack)` times the previous one.
    pub non_increasing: bool,
    pub below_bound: bool,
}

/// Compares the periodic attractor on `[-L/2, L/2]` with the ODE orbit `z*`
/// for each requested `L`.
pub fn asymptotic_profile_study(
    p: &SeasonParams,
    kernel: &KernelSpec,
    lengths: &[f64],
    opts: &ProfileOptions,
) -> Result<ProfileStudy> {
    let z_star = *ode_periodic_solution(p).periodic().ok_or_else(|| {
        Error::Regime(format!(
            "profile study needs a positive growth margin, got {}",
            p.growth_margin()
        ))
    })?;
    if lengths.is_empty() {
        return Err(Error::param("lengths", "at least one habitat length is required"));
    }
    if lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) || lengths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("lengths", "must be positive and strictly increasing"));
    }

    let rows = lengths
        .par_iter()
        .map(|&length| profile_row(p, kernel, length, &z_star, opts))
        .collect::<Result<Vec<_>>>()?;

    let bound = opts.bound_fraction * z_star.z0;
    let non_increasing = rows
        .windows(2)
        .all(|w| w[1].deviation <= (1.0 + opts.slack) * w[0].deviation);
    let below_bound = rows.last().is_some_and(|r| r.deviation < bound);
    Ok(ProfileStudy {
        z_star,
        rows,
        bound,
        non_increasing,
        below_bound,
    })
}

fn profile_row(
    p: &SeasonParams,
    kernel: &KernelSpec,
    length: f64,
    z_star: &OdePeriodicSolution,
    opts: &ProfileOptions,
) -> Result<ProfileRow> {
    let nodes = ((opts.nodes_per_scale * length / kernel.length_scale()).ceil() as usize)
        .max(opts.min_nodes);
    let grid = Grid::centered(length, nodes)?;
    let op = assemble(kernel, &grid, BoundaryCondition::DirichletNonlocal, p.d)?;
    let eigen = principal_eigenpair(&op, p.a)?;
    let ctl = StepControl::with_steps(p, opts.steps_per_good_season);
    let solution = match find_periodic_solution_with(p, &op, &eigen, &ctl, &opts.periodic)? {
        PeriodicOutcome::Periodic { solution, .. } => solution,
        other => {
            return Err(Error::Regime(format!(
                "habitat of length {length} has no positive periodic solution ({other:?})"
            )))
        }
    };
    let deviation = core_deviation(&solution, z_star, 0.25 * length);
    Ok(ProfileRow {
        length,
        nodes,
        lambda1: solution.lambda1,
        deviation,
        solution,
    })
}

/// `max |u*(t, x) - z*(t)|` over all samples and nodes with `|x| <= radius`.
pub(crate) fn core_deviation(s: &PeriodicSolution, z: &OdePeriodicSolution, radius: f64) -> f64 {
    let x = s.grid.nodes();
    s.samples
        .iter()
        .flat_map(|state| {
            let zt = z.value(state.time);
            state
                .values
                .iter()
                .zip(&x)
                .filter(move |(_, xi)| xi.abs() <= radius)
                .map(move |(u, _)| (u - zt).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_nonpositive_margin() {
        let p3 = SeasonParams::new(0.8, 1.2, 0.6, 0.6, 0.6, 1.0).unwrap();
        let k = KernelSpec::laplace(1.0).unwrap();
        let err = asymptotic_profile_study(&p3, &k, &[10.0], &ProfileOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Regime(_)));
    }

    #[test]
    fn rejects_unsorted_lengths() {
        let p1 = SeasonParams::new(0.2, 1.2, 0.6, 0.6, 0.6, 1.0).unwrap();
        let k = KernelSpec::laplace(1.0).unwrap();
        assert!(asymptotic_profile_study(&p1, &k, &[20.0, 10.0], &ProfileOptions::default()).is_err());
        assert!(asymptotic_profile_study(&p1, &k, &[], &ProfileOptions::default()).is_err());
    }
}
