mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seasonal_dispersal::evolution::{StepControl, Stepper};
use seasonal_dispersal::model::{BoundaryCondition, Grid, KernelSpec, SeasonParams};
use seasonal_dispersal::operator::assemble;
use seasonal_dispersal::periodic::{
    classify, find_periodic_solution, find_periodic_solution_with, ode_periodic_solution,
    PeriodicOptions, PeriodicOutcome, Regime,
};
use seasonal_dispersal::spectral::{principal_eigenpair, threshold};

fn p1_small() -> (SeasonParams, Grid, KernelSpec) {
    (p1(), Grid::centered(0.4, 24).unwrap(), KernelSpec::laplace(20.0).unwrap())
}

#[test]
fn attractor_is_unique() {
    let (p, grid, k) = p1_small();
    let op = assemble(&k, &grid, BoundaryCondition::DirichletNonlocal, p.d).unwrap();
    let e = principal_eigenpair(&op, p.a).unwrap();
    let ctl = StepControl::with_steps(&p, 400);
    let star = match find_periodic_solution(&p, &op, &e, &ctl).unwrap() {
        PeriodicOutcome::Periodic { solution, .. } => solution.initial().values.clone(),
        other => panic!("{other:?}"),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut stepper = Stepper::new(&p, &op, &ctl).unwrap();
    for _ in 0..4 {
        let mut u: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.01..4.0)).collect();
        for _ in 0..400 {
            stepper.period_map_in_place(&mut u).unwrap();
        }
        assert!(sup_diff(&u, &star) < 1e-7);
    }
}

#[test]
fn bad_season_factorizes() {
    let (p, grid, k) = p1_small();
    let op = assemble(&k, &grid, BoundaryCondition::DirichletNonlocal, p.d).unwrap();
    let e = principal_eigenpair(&op, p.a).unwrap();
    let out = find_periodic_solution(&p, &op, &e, &StepControl::with_steps(&p, 400)).unwrap();
    let s = out.solution().unwrap();
    let u0 = &s.initial().values;
    let bad: Vec<_> = s.samples.iter().filter(|x| x.time <= p.rho * p.omega).collect();
    assert!(bad.len() > 2);
    for state in bad {
        let f = (-p.delta * state.time).exp();
        for (a, b) in state.values.iter().zip(u0) {
            assert!((a - f * b).abs() <= 1e-12);
        }
    }
    assert!((s.samples.last().unwrap().time - p.omega).abs() < 1e-12);
    assert!(sup_diff(&s.samples.last().unwrap().values, u0) < 1e-8);
}

#[test]
fn neumann_attractor_is_the_ode_orbit() {
    let p = p1();
    let k = KernelSpec::laplace(20.0).unwrap();
    let op = assemble(&k, &Grid::centered(8.0, 12).unwrap(), BoundaryCondition::NeumannNonlocal, p.d).unwrap();
    let e = principal_eigenpair(&op, p.a).unwrap();
    let s = find_periodic_solution(&p, &op, &e, &StepControl::with_steps(&p, 1000)).unwrap();
    let s = s.solution().unwrap();
    let z = ode_periodic_solution(&p).periodic().copied().unwrap();
    for state in &s.samples {
        assert!(state.values.iter().all(|v| (v - z.value(state.time)).abs() < 1e-7));
    }
}

#[test]
fn extinction_when_threshold_positive() {
    let p = p3();
    let k = KernelSpec::laplace(20.0).unwrap();
    let op = assemble(&k, &Grid::centered(8.0, 16).unwrap(), BoundaryCondition::DirichletNonlocal, p.d).unwrap();
    let e = principal_eigenpair(&op, p.a).unwrap();
    match find_periodic_solution(&p, &op, &e, &StepControl::with_steps(&p, 200)).unwrap() {
        PeriodicOutcome::Extinction(ev) => {
            assert!(ev.lambda1 > 0.0 && ev.reached_floor && ev.monotone_decay);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn slow_runs_near_threshold_are_flagged() {
    let k = KernelSpec::laplace(20.0).unwrap();
    let opts = PeriodicOptions {
        max_periods: 50,
        ..PeriodicOptions::default()
    };
    let run = |p: SeasonParams| {
        let op = assemble(&k, &Grid::centered(8.0, 8).unwrap(), BoundaryCondition::NeumannNonlocal, p.d).unwrap();
        let e = principal_eigenpair(&op, p.a).unwrap();
        find_periodic_solution_with(&p, &op, &e, &StepControl::with_steps(&p, 50), &opts).unwrap()
    };
    // zero margin: decay is monotone but far from the floor
    match run(p3()) {
        PeriodicOutcome::Extinction(ev) => {
            assert!(!ev.reached_floor && ev.monotone_decay && ev.near_threshold);
        }
        other => panic!("{other:?}"),
    }
    // tiny positive margin: the sandwich has not closed
    let out = run(SeasonParams { delta: 0.7995, ..p1() });
    assert!(matches!(out, PeriodicOutcome::IndeterminateSlow { lambda1, .. } if lambda1 < 0.0), "{out:?}");
}

#[test]
fn classification_agrees_with_dynamics() {
    // sign of lambda1 against the outcome of the period map, on random
    // parameters away from the threshold
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 12 {
        let p = SeasonParams::new(
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.3..2.0),
            rng.gen_range(0.3..2.0),
            rng.gen_range(0.1..1.5),
            rng.gen_range(0.1..0.8),
            1.0,
        )
        .unwrap();
        let k = KernelSpec::laplace(rng.gen_range(0.5..3.0)).unwrap();
        let grid = Grid::centered(rng.gen_range(0.5..8.0), 16).unwrap();
        let op = assemble(&k, &grid, BoundaryCondition::DirichletNonlocal, p.d).unwrap();
        let lambda1 = threshold(&p, &op).unwrap().lambda1;
        if lambda1.abs() < 0.02 {
            continue;
        }
        let c = classify(&p, &k, BoundaryCondition::DirichletNonlocal, Some(&grid)).unwrap();
        assert_eq!(c.domain_persists, Some(lambda1 < 0.0));
        let e = principal_eigenpair(&op, p.a).unwrap();
        let out = find_periodic_solution(&p, &op, &e, &StepControl::with_steps(&p, 100)).unwrap();
        match out {
            PeriodicOutcome::Periodic { solution, .. } => {
                assert!(lambda1 < 0.0);
                assert!(solution.initial().min() > 0.0);
            }
            PeriodicOutcome::Extinction(_) => assert!(lambda1 > 0.0),
            other => panic!("{other:?}"),
        }
        match c.regime {
            Regime::PersistAllDomains => assert!(lambda1 < 0.0),
            Regime::ExtinctAllDomains => assert!(lambda1 > 0.0),
            Regime::CriticalLength(cl) => {
                assert_eq!(grid.length() > cl.ell_star, lambda1 < 0.0);
            }
            other => panic!("{other:?}"),
        }
        checked += 1;
    }
}

#[test]
fn small_habitat_attractor_peaks_inside() {
    let (p, grid, k) = p1_small();
    let op = assemble(&k, &grid, BoundaryCondition::DirichletNonlocal, p.d).unwrap();
    let e = principal_eigenpair(&op, p.a).unwrap();
    let out = find_periodic_solution(&p, &op, &e, &StepControl::with_steps(&p, 400)).unwrap();
    let u = &out.solution().unwrap().initial().values;
    let interior = u.iter().cloned().fold(0.0, f64::max);
    assert!(u.iter().all(|v| *v > 0.0));
    assert!(interior > u[0] && interior > u[u.len() - 1]);
}

#[test]
fn profile_deviation_decays_exactly_in_bad_season() {
    use seasonal_dispersal::periodic::{asymptotic_profile_study, ProfileOptions};
    let p = p1();
    let study = asymptotic_profile_study(&p, &KernelSpec::laplace(1.0).unwrap(), &[4.0, 8.0], &ProfileOptions::default()).unwrap();
    let z0 = study.z_star.z0;
    for row in &study.rows {
        assert!(row.deviation >= 0.0);
        let s = &row.solution;
        let dev0: Vec<f64> = s.initial().values.iter().map(|u| (u - z0).abs()).collect();
        for state in s.samples.iter().filter(|x| x.time <= p.rho * p.omega) {
            let f = (-p.delta * state.time).exp();
            let z = study.z_star.value(state.time);
            for (u, d0) in state.values.iter().zip(&dev0) {
                assert!(((u - z).abs() - f * d0).abs() < 1e-9);
            }
        }
    }
}
