//! Time integration across alternating seasons.
//!
//! Bad seasons are integrated exactly (`u(t) = exp(-delta (t - t0)) u(t0)`).
//! Good seasons use classical RK4 with a fixed step on the semi-discrete
//! system `du_i/dt = (L u)_i + u_i (a - b u_i)`. Every season boundary
//! `i omega` and `(i + rho) omega` is hit exactly because step counts are
//! chosen per season.

use crate::error::{Error, Result};
use crate::model::{BoundaryCondition, Grid, SeasonParams, StateVector, TOL_POS};
use crate::operator::OperatorMatrix;

/// Default number of RK4 steps per good season.
pub const DEFAULT_GOOD_STEPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Nominal good-season step; rounded per season so the step count is an integer.
    pub dt_good: f64,
    /// Record a trajectory sample every this many good-season steps. Bad
    /// seasons are sampled at the matching time spacing.
    pub sample_stride: usize,
    pub tol_pos: f64,
}

impl StepControl {
    /// `dt_good = omega (1 - rho) / 2000`, about 20 samples per good season.
    pub fn for_params(p: &SeasonParams) -> Self {
        Self::with_steps(p, DEFAULT_GOOD_STEPS)
    }

    pub fn with_steps(p: &SeasonParams, steps_per_good_season: usize) -> Self {
        let steps = steps_per_good_season.max(1);
        StepControl {
            dt_good: p.good_season_length() / steps as f64,
            sample_stride: (steps / 20).max(1),
            tol_pos: TOL_POS,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt_good.is_finite() && self.dt_good > 0.0) {
            return Err(Error::param(
                "dt_good",
                format!("must be positive, got {}", self.dt_good),
            ));
        }
        Ok(())
    }

    fn sample_spacing(&self) -> f64 {
        self.dt_good * self.sample_stride.max(1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Season {
    Bad,
    Good,
}

impl Season {
    fn name(&self) -> &'static str {
        match self {
            Season::Bad => "bad",
            Season::Good => "good",
        }
    }
}

fn time_eps(p: &SeasonParams, t: f64) -> f64 {
    1e-10 * p.omega * (1.0 + t.abs() / p.omega)
}

/// Season containing `[t0, t1]`, if any single one does.
pub fn season_of_interval(p: &SeasonParams, t0: f64, t1: f64) -> Option<Season> {
    if t1 < t0 {
        return None;
    }
    let eps = time_eps(p, t1);
    let mid = 0.5 * (t0 + t1);
    let i = (mid / p.omega).floor();
    let start = i * p.omega;
    let bad_end = (i + p.rho) * p.omega;
    let end = (i + 1.0) * p.omega;
    if t0 >= start - eps && t1 <= bad_end + eps {
        Some(Season::Bad)
    } else if t0 >= bad_end - eps && t1 <= end + eps {
        Some(Season::Good)
    } else {
        None
    }
}

/// The next season boundary strictly after `t` and the season in between.
fn next_boundary(p: &SeasonParams, t: f64) -> (f64, Season) {
    let eps = time_eps(p, t);
    let mut i = (t / p.omega).floor();
    loop {
        let bad_end = (i + p.rho) * p.omega;
        let end = (i + 1.0) * p.omega;
        if t < bad_end - eps {
            return (bad_end, Season::Bad);
        }
        if t < end - eps {
            return (end, Season::Good);
        }
        i += 1.0;
    }
}

/// Exact decay through (part of) a bad season.
pub fn step_bad_season(
    u: &StateVector,
    p: &SeasonParams,
    t0: f64,
    t1: f64,
) -> Result<StateVector> {
    if season_of_interval(p, t0, t1) != Some(Season::Bad) {
        return Err(Error::SeasonStraddle {
            t0,
            t1,
            expected: Season::Bad.name(),
        });
    }
    let factor = (-p.delta * (t1 - t0)).exp();
    Ok(StateVector::new(
        u.values.iter().map(|v| factor * v).collect(),
        t1,
    ))
}

/// RK4 through (part of) a good season.
pub fn step_good_season(
    u: &StateVector,
    op: &OperatorMatrix,
    p: &SeasonParams,
    t0: f64,
    t1: f64,
    ctl: &StepControl,
) -> Result<StateVector> {
    ctl.validate()?;
    op.check_len(u.len())?;
    if season_of_interval(p, t0, t1) != Some(Season::Good) {
        return Err(Error::SeasonStraddle {
            t0,
            t1,
            expected: Season::Good.name(),
        });
    }
    check_nonnegative(&u.values, ctl, t0)?;
    let mut values = u.values.clone();
    let mut ws = Workspace::new(op.len());
    let steps = good_steps(t1 - t0, ctl);
    let dt = (t1 - t0) / steps as f64;
    for k in 0..steps {
        ws.rk4_step(op, p, &mut values, dt);
        enforce_positivity(&mut values, ctl, t0 + (k + 1) as f64 * dt, dt)?;
    }
    Ok(StateVector::new(values, t1))
}

fn good_steps(span: f64, ctl: &StepControl) -> usize {
    ((span / ctl.dt_good).round() as usize).max(1)
}

fn check_nonnegative(u: &[f64], ctl: &StepControl, time: f64) -> Result<()> {
    match u.iter().position(|v| !v.is_finite() || *v < -ctl.tol_pos) {
        Some(node) => Err(Error::PositivityViolation {
            node,
            time,
            value: u[node],
            suggested_dt: ctl.dt_good,
        }),
        None => Ok(()),
    }
}

fn enforce_positivity(u: &mut [f64], ctl: &StepControl, time: f64, dt: f64) -> Result<()> {
    for (node, v) in u.iter_mut().enumerate() {
        if !v.is_finite() || *v < -ctl.tol_pos {
            return Err(Error::PositivityViolation {
                node,
                time,
                value: *v,
                suggested_dt: 0.5 * dt,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(())
}

/// Scratch buffers for RK4.
struct Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
        }
    }

    fn rhs(op: &OperatorMatrix, p: &SeasonParams, u: &[f64], out: &mut [f64]) {
        op.apply_into(u, out);
        for (o, &v) in out.iter_mut().zip(u) {
            *o += v * (p.a - p.b * v);
        }
    }

    fn rk4_step(&mut self, op: &OperatorMatrix, p: &SeasonParams, u: &mut [f64], dt: f64) {
        let Workspace {
            k1,
            k2,
            k3,
            k4,
            tmp,
        } = self;
        Self::rhs(op, p, u, k1);
        for ((t, &v), &k) in tmp.iter_mut().zip(u.iter()).zip(k1.iter()) {
            *t = v + 0.5 * dt * k;
        }
        Self::rhs(op, p, tmp, k2);
        for ((t, &v), &k) in tmp.iter_mut().zip(u.iter()).zip(k2.iter()) {
            *t = v + 0.5 * dt * k;
        }
        Self::rhs(op, p, tmp, k3);
        for ((t, &v), &k) in tmp.iter_mut().zip(u.iter()).zip(k3.iter()) {
            *t = v + dt * k;
        }
        Self::rhs(op, p, tmp, k4);
        for i in 0..u.len() {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

/// Samples of a solution together with what produced it.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub params: SeasonParams,
    pub grid: Grid,
    pub bc: BoundaryCondition,
}

impl Trajectory {
    pub fn empty(params: SeasonParams, grid: Grid, bc: BoundaryCondition) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            params,
            grid,
            bc,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&StateVector> {
        self.states.last()
    }

    fn push(&mut self, t: f64, values: &[f64]) {
        self.times.push(t);
        self.states.push(StateVector::new(values.to_vec(), t));
    }
}

/// Integrates from `u0.time` to `t_end`, sampling per `ctl`.
pub fn evolve(
    u0: &StateVector,
    p: &SeasonParams,
    op: &OperatorMatrix,
    ctl: &StepControl,
    t_end: f64,
) -> Result<Trajectory> {
    let mut traj = Trajectory::empty(*p, *op.grid(), op.bc());
    let mut u = u0.values.clone();
    traj.push(u0.time, &u);
    let mut stepper = Stepper::new(p, op, ctl)?;
    stepper.advance(&mut u, u0.time, t_end, |t, v| traj.push(t, v))?;
    Ok(traj)
}

/// One period of evolution: `u(t0 + omega)` from `u(t0)`, `t0 = u0.time`.
pub fn period_map(
    u0: &StateVector,
    p: &SeasonParams,
    op: &OperatorMatrix,
    ctl: &StepControl,
) -> Result<StateVector> {
    let mut u = u0.values.clone();
    let mut stepper = Stepper::new(p, op, ctl)?;
    stepper.advance(&mut u, u0.time, u0.time + p.omega, |_, _| {})?;
    Ok(StateVector::new(u, u0.time + p.omega))
}

/// Reusable integrator; avoids reallocating scratch space when the period
/// map is applied many times.
pub struct Stepper<'a> {
    p: SeasonParams,
    op: &'a OperatorMatrix,
    ctl: StepControl,
    ws: Workspace,
}

impl<'a> Stepper<'a> {
    pub fn new(p: &SeasonParams, op: &'a OperatorMatrix, ctl: &StepControl) -> Result<Self> {
        ctl.validate()?;
        if (op.d() - p.d).abs() > 1e-14 * p.d {
            return Err(Error::param(
                "d",
                format!("operator assembled with d = {}, parameters have d = {}", op.d(), p.d),
            ));
        }
        Ok(Stepper {
            p: *p,
            op,
            ctl: *ctl,
            ws: Workspace::new(op.len()),
        })
    }

    /// `u <- u(omega)` starting from `t = 0`.
    pub fn period_map_in_place(&mut self, u: &mut [f64]) -> Result<()> {
        let omega = self.p.omega;
        self.advance(u, 0.0, omega, |_, _| {})
    }

    /// Advances `u` from `t0` to `t_end`, calling `sample(t, u)` at every
    /// sample instant after `t0` (season boundaries always included).
    pub fn advance(
        &mut self,
        u: &mut [f64],
        t0: f64,
        t_end: f64,
        mut sample: impl FnMut(f64, &[f64]),
    ) -> Result<()> {
        self.op.check_len(u.len())?;
        check_nonnegative(u, &self.ctl, t0)?;
        let p = self.p;
        let mut t = t0;
        while t < t_end - time_eps(&p, t_end) {
            let (boundary, season) = next_boundary(&p, t);
            let t1 = if t_end < boundary - time_eps(&p, boundary) {
                t_end
            } else {
                boundary
            };
            match season {
                Season::Bad => self.bad_segment(u, t, t1, &mut sample),
                Season::Good => self.good_segment(u, t, t1, &mut sample)?,
            }
            t = t1;
        }
        Ok(())
    }

    fn bad_segment(&self, u: &mut [f64], t0: f64, t1: f64, sample: &mut impl FnMut(f64, &[f64])) {
        let span = t1 - t0;
        let pieces = ((span / self.ctl.sample_spacing()).ceil() as usize).max(1);
        let start = u.to_vec();
        for k in 1..=pieces {
            let t = if k == pieces {
                t1
            } else {
                t0 + span * k as f64 / pieces as f64
            };
            let factor = (-self.p.delta * (t - t0)).exp();
            for (v, s) in u.iter_mut().zip(&start) {
                *v = factor * s;
            }
            sample(t, u);
        }
    }

    fn good_segment(
        &mut self,
        u: &mut [f64],
        t0: f64,
        t1: f64,
        sample: &mut impl FnMut(f64, &[f64]),
    ) -> Result<()> {
        let steps = good_steps(t1 - t0, &self.ctl);
        let dt = (t1 - t0) / steps as f64;
        let stride = self.ctl.sample_stride.max(1);
        for k in 1..=steps {
            self.ws.rk4_step(self.op, &self.p, u, dt);
            let t = if k == steps { t1 } else { t0 + k as f64 * dt };
            enforce_positivity(u, &self.ctl, t, dt)?;
            if k == steps || k % stride == 0 {
                sample(t, u);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::KernelSpec;
    use crate::operator::assemble;

    fn p1() -> SeasonParams {
        SeasonParams::new(0.2, 1.2, 0.6, 0.6, 0.6, 1.0).unwrap()
    }

    fn op(bc: BoundaryCondition, n: usize) -> OperatorMatrix {
        assemble(
            &KernelSpec::laplace(1.0).unwrap(),
            &Grid::new(-2.0, 2.0, n).unwrap(),
            bc,
            0.6,
        )
        .unwrap()
    }

    #[test]
    fn bad_season_is_exact_decay() {
        let u = StateVector::constant(5, 1.0, 0.0);
        let out = step_bad_season(&u, &p1(), 0.0, 0.6).unwrap();
        let expected = (-0.12f64).exp();
        assert!((expected - 0.8869).abs() < 1e-4);
        assert!(out.values.iter().all(|v| (v - expected).abs() < 1e-15));
        let same = step_bad_season(&u, &p1(), 0.3, 0.3).unwrap();
        assert_eq!(same.values, u.values);
        let zero = step_bad_season(&StateVector::zeros(3, 0.0), &p1(), 0.0, 0.5).unwrap();
        assert!(zero.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn straddling_intervals_are_rejected() {
        let u = StateVector::constant(8, 1.0, 0.0);
        let p = p1();
        assert!(matches!(
            step_bad_season(&u, &p, 0.5, 0.7),
            Err(Error::SeasonStraddle { .. })
        ));
        let a = op(BoundaryCondition::DirichletNonlocal, 8);
        let ctl = StepControl::for_params(&p);
        assert!(step_good_season(&u, &a, &p, 0.5, 0.7, &ctl).is_err());
        assert!(step_good_season(&u, &a, &p, 0.9, 1.1, &ctl).is_err());
        assert!(step_good_season(&u, &a, &p, 1.6, 2.0, &ctl).is_ok());
    }

    #[test]
    fn good_season_neumann_constant_matches_logistic() {
        let p = p1();
        let a = op(BoundaryCondition::NeumannNonlocal, 16);
        let ctl = StepControl::for_params(&p);
        let c = 0.3;
        let out = step_good_season(&StateVector::constant(16, c, 0.6), &a, &p, 0.6, 1.0, &ctl)
            .unwrap();
        let g = (p.a * 0.4f64).exp();
        let exact = c * p.a * g / (p.a + p.b * c * (g - 1.0));
        assert!(out.values.iter().all(|v| (v - exact).abs() < 1e-8));
    }

    #[test]
    fn zero_is_fixed() {
        let p = p1();
        let a = op(BoundaryCondition::DirichletNonlocal, 10);
        let ctl = StepControl::with_steps(&p, 50);
        let traj = evolve(&StateVector::zeros(10, 0.0), &p, &a, &ctl, 3.0).unwrap();
        assert!(traj.states.iter().all(|s| s.values.iter().all(|v| *v == 0.0)));
    }

    #[test]
    fn negative_input_rejected() {
        let p = p1();
        let a = op(BoundaryCondition::DirichletNonlocal, 4);
        let ctl = StepControl::for_params(&p);
        let u = StateVector::new(vec![1.0, -1e-6, 0.0, 1.0], 0.6);
        assert!(matches!(
            step_good_season(&u, &a, &p, 0.6, 1.0, &ctl),
            Err(Error::PositivityViolation { node: 1, .. })
        ));
    }

    #[test]
    fn oversized_step_reports_positivity_violation() {
        // one RK4 step of length 4 with strong competition overshoots below zero
        let p = SeasonParams::new(0.1, 1.0, 50.0, 0.1, 0.2, 5.0).unwrap();
        let a = assemble(
            &KernelSpec::laplace(1.0).unwrap(),
            &Grid::new(0.0, 1.0, 4).unwrap(),
            BoundaryCondition::DirichletNonlocal,
            p.d,
        )
        .unwrap();
        let ctl = StepControl::with_steps(&p, 1);
        let err = period_map(&StateVector::constant(4, 1.0, 0.0), &p, &a, &ctl).unwrap_err();
        assert!(matches!(err, Error::PositivityViolation { .. }), "{err}");
    }

    #[test]
    fn boundaries_are_sampled_exactly() {
        let p = p1();
        let a = op(BoundaryCondition::DirichletNonlocal, 6);
        let ctl = StepControl::with_steps(&p, 40);
        let traj = evolve(&StateVector::constant(6, 1.0, 0.0), &p, &a, &ctl, 3.0).unwrap();
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
        for i in 0..3 {
            let i = i as f64;
            assert!(traj.times.contains(&(i * p.omega)) || i == 0.0);
            assert!(traj.times.contains(&((i + p.rho) * p.omega)));
            assert!(traj.times.contains(&((i + 1.0) * p.omega)));
        }
        assert_eq!(*traj.times.last().unwrap(), 3.0);
    }

    #[test]
    fn mid_season_end_time() {
        let p = p1();
        let a = op(BoundaryCondition::DirichletNonlocal, 6);
        let ctl = StepControl::with_steps(&p, 40);
        let traj = evolve(&StateVector::constant(6, 1.0, 0.0), &p, &a, &ctl, 1.3).unwrap();
        assert_eq!(*traj.times.last().unwrap(), 1.3);
        let direct = step_bad_season(&StateVector::constant(6, 1.0, 0.0), &p, 0.0, 0.6).unwrap();
        let idx = traj.times.iter().position(|t| *t == 0.6).unwrap();
        assert_eq!(traj.states[idx].values, direct.values);
    }

    #[test]
    fn season_lookup() {
        let p = p1();
        assert_eq!(season_of_interval(&p, 0.0, 0.6), Some(Season::Bad));
        assert_eq!(season_of_interval(&p, 0.6, 1.0), Some(Season::Good));
        assert_eq!(season_of_interval(&p, 7.0, 7.6), Some(Season::Bad));
        assert_eq!(season_of_interval(&p, 7.6, 8.0), Some(Season::Good));
        assert_eq!(season_of_interval(&p, 0.5, 0.7), None);
        assert_eq!(next_boundary(&p, 0.0), (0.6, Season::Bad));
        assert_eq!(next_boundary(&p, 0.6), (1.0, Season::Good));
        assert_eq!(next_boundary(&p, 1.0), (1.6, Season::Bad));
    }
}
