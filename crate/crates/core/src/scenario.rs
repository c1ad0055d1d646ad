//! Subcommand pipelines driven by a [`ScenarioConfig`].

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::evolution::{evolve, StepControl};
use crate::model::{BoundaryCondition, TOL_POS};
use crate::operator::assemble;
use crate::output::{export_periodic, export_profile, export_trajectory, fmt_num};
use crate::periodic::{
    asymptotic_profile_study, classify, find_periodic_solution, ode_periodic_solution,
    DynamicsClassification, OdeReference, PeriodicOutcome, ProfileOptions, Regime,
};
use crate::spectral::{critical_length, principal_eigenpair, threshold, CriticalLengthOutcome};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analysis {
    Simulate,
    Classify,
    Spectrum,
    CriticalLength,
    Periodic,
    ProfileStudy,
    OdeReference,
}

impl Analysis {
    pub const ALL: [Analysis; 7] = [
        Analysis::Simulate,
        Analysis::Classify,
        Analysis::Spectrum,
        Analysis::CriticalLength,
        Analysis::Periodic,
        Analysis::ProfileStudy,
        Analysis::OdeReference,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Simulate => "simulate",
            Analysis::Classify => "classify",
            Analysis::Spectrum => "spectrum",
            Analysis::CriticalLength => "critical-length",
            Analysis::Periodic => "periodic",
            Analysis::ProfileStudy => "profile-study",
            Analysis::OdeReference => "ode-reference",
        }
    }
}

impl FromStr for Analysis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Analysis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown subcommand `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok,
    Failed(String),
}

/// Scalar results of one run. Fields that do not apply stay `None`.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub analysis: Analysis,
    pub status: RunStatus,
    pub preset: Option<&'static str>,
    pub bc: BoundaryCondition,
    pub growth_margin: f64,
    pub classification: Option<DynamicsClassification>,
    pub sigma1: Option<f64>,
    pub lambda1: Option<f64>,
    pub ell_star: Option<f64>,
    pub ell_lower: Option<f64>,
    pub ell_upper: Option<f64>,
    pub final_sup_norm: Option<f64>,
    pub final_time: Option<f64>,
    pub eigen_residual: Option<f64>,
    pub eigen_iterations: Option<usize>,
    pub periodic_outcome: Option<&'static str>,
    pub periodic_residual: Option<f64>,
    pub periodic_sup_norm: Option<f64>,
    pub periods: Option<usize>,
    pub z_star0: Option<f64>,
    pub profile_deviation: Option<f64>,
    pub profile_bound: Option<f64>,
    pub profile_non_increasing: Option<bool>,
    pub grid_n: usize,
    pub l1: f64,
    pub l2: f64,
    pub dt_good: f64,
    pub n_periods: usize,
    pub wall_time_s: f64,
    /// Artifacts left on disk by this run.
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    fn new(cfg: &ScenarioConfig, analysis: Analysis) -> Self {
        RunSummary {
            analysis,
            status: RunStatus::Ok,
            preset: cfg.preset.map(|p| p.name()),
            bc: cfg.bc,
            growth_margin: cfg.params.growth_margin(),
            classification: None,
            sigma1: None,
            lambda1: None,
            ell_star: None,
            ell_lower: None,
            ell_upper: None,
            final_sup_norm: None,
            final_time: None,
            eigen_residual: None,
            eigen_iterations: None,
            periodic_outcome: None,
            periodic_residual: None,
            periodic_sup_norm: None,
            periods: None,
            z_star0: None,
            profile_deviation: None,
            profile_bound: None,
            profile_non_increasing: None,
            grid_n: cfg.grid.len(),
            l1: cfg.grid.l1(),
            l2: cfg.grid.l2(),
            dt_good: cfg.dt_good,
            n_periods: cfg.n_periods,
            wall_time_s: 0.0,
            files: Vec::new(),
        }
    }

    pub fn succeeded(&self) -> bool {
        self.status == RunStatus::Ok
    }

    pub fn regime(&self) -> Option<&Regime> {
        self.classification.as_ref().map(|c| &c.regime)
    }

    /// `key = value` lines. Non-finite numbers are left out.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("schema_version", SCHEMA_VERSION.to_string());
        line("subcommand", self.analysis.name().into());
        match &self.status {
            RunStatus::Ok => line("status", "ok".into()),
            RunStatus::Failed(msg) => {
                line("status", "failed".into());
                line("error", msg.replace('\n', " "));
            }
        }
        if let Some(p) = self.preset {
            line("preset", p.into());
        }
        line("bc", self.bc.name().into());
        if let Some(c) = &self.classification {
            line("classification", c.regime.name().into());
            if let Some(persists) = c.domain_persists {
                line("domain_persists", persists.to_string());
            }
        }
        let nums = [
            ("growth_margin", Some(self.growth_margin)),
            ("sigma1", self.sigma1),
            ("lambda1", self.lambda1),
            ("ell_star", self.ell_star),
            ("ell_lower", self.ell_lower),
            ("ell_upper", self.ell_upper),
            ("final_time", self.final_time),
            ("final_sup_norm", self.final_sup_norm),
            ("eigen_residual", self.eigen_residual),
            ("periodic_residual", self.periodic_residual),
            ("periodic_sup_norm", self.periodic_sup_norm),
            ("z_star0", self.z_star0),
            ("profile_deviation", self.profile_deviation),
            ("profile_bound", self.profile_bound),
        ];
        for (k, v) in nums {
            if let Some(v) = v.filter(|v| v.is_finite()) {
                line(k, fmt_num(v));
            }
        }
        if let Some(it) = self.eigen_iterations {
            line("eigen_iterations", it.to_string());
        }
        if let Some(o) = self.periodic_outcome {
            line("periodic_outcome", o.into());
        }
        if let Some(n) = self.periods {
            line("periods", n.to_string());
        }
        if let Some(b) = self.profile_non_increasing {
            line("profile_non_increasing", b.to_string());
        }
        line("grid_n", self.grid_n.to_string());
        line("domain_l1", fmt_num(self.l1));
        line("domain_l2", fmt_num(self.l2));
        line("dt_good", fmt_num(self.dt_good));
        line("n_periods", self.n_periods.to_string());
        line("wall_time_s", format!("{:.6}", self.wall_time_s));
        s
    }
}

/// Runs one analysis, writing the configured artifacts and summary.
///
/// Solver and I/O failures do not escape: they are recorded in the returned
/// summary, and any artifact this run already wrote is deleted.
pub fn run_scenario(cfg: &ScenarioConfig, analysis: Analysis) -> RunSummary {
    let start = Instant::now();
    let mut summary = RunSummary::new(cfg, analysis);
    if let Err(err) = execute(cfg, analysis, &mut summary) {
        for f in summary.files.drain(..) {
            let _ = fs::remove_file(f);
        }
        summary.status = RunStatus::Failed(err.to_string());
    }
    summary.wall_time_s = start.elapsed().as_secs_f64();
    if let Some(path) = &cfg.outputs.summary {
        if let Err(e) = fs::write(path, summary.to_text()) {
            summary.status = RunStatus::Failed(Error::io(path, e).to_string());
        }
    }
    summary
}

fn step_control(cfg: &ScenarioConfig) -> StepControl {
    let steps = (cfg.params.good_season_length() / cfg.dt_good).round().max(1.0) as usize;
    StepControl {
        dt_good: cfg.dt_good,
        sample_stride: (steps / 20).max(1),
        tol_pos: TOL_POS,
    }
}

fn record_classification(s: &mut RunSummary, c: DynamicsClassification) {
    if let Regime::CriticalLength(cl) = c.regime {
        s.ell_star = Some(cl.ell_star);
        s.ell_lower = Some(cl.lower);
        s.ell_upper = Some(cl.upper);
    }
    s.sigma1 = c.sigma1;
    s.lambda1 = c.lambda1;
    s.classification = Some(c);
}

fn execute(cfg: &ScenarioConfig, analysis: Analysis, s: &mut RunSummary) -> Result<()> {
    let p = &cfg.params;
    match analysis {
        Analysis::Simulate => {
            let op = assemble(&cfg.kernel, &cfg.grid, cfg.bc, p.d)?;
            let u0 = cfg.ic.sample(&cfg.grid)?;
            let tr = evolve(&u0, p, &op, &step_control(cfg), cfg.n_periods as f64 * p.omega)?;
            if let Some(path) = &cfg.outputs.trajectory {
                s.files.push(path.clone());
                export_trajectory(&tr, path)?;
            }
            let last = tr.last().expect("trajectory holds the initial state");
            s.final_time = Some(last.time);
            s.final_sup_norm = Some(last.sup_norm());
            record_classification(s, classify(p, &cfg.kernel, cfg.bc, Some(&cfg.grid))?);
        }
        Analysis::Classify => {
            record_classification(s, classify(p, &cfg.kernel, cfg.bc, Some(&cfg.grid))?);
        }
        Analysis::Spectrum => {
            let op = assemble(&cfg.kernel, &cfg.grid, cfg.bc, p.d)?;
            let e = principal_eigenpair(&op, p.a)?;
            let report = threshold(p, &op)?;
            s.sigma1 = Some(e.sigma1);
            s.lambda1 = Some(report.lambda1);
            s.eigen_residual = Some(e.residual);
            s.eigen_iterations = Some(e.iterations);
        }
        Analysis::CriticalLength => {
            if cfg.bc == BoundaryCondition::NeumannNonlocal {
                return Err(Error::Regime(
                    "critical length is defined for the Dirichlet-type operator only".into(),
                ));
            }
            let c = critical_length(p, &cfg.kernel, crate::periodic::DEFAULT_LENGTH_TOL)?;
            let regime = match c {
                CriticalLengthOutcome::PersistAllDomains => Regime::PersistAllDomains,
                CriticalLengthOutcome::ExtinctAllDomains => Regime::ExtinctAllDomains,
                CriticalLengthOutcome::Critical(c) => Regime::CriticalLength(c),
            };
            record_classification(
                s,
                DynamicsClassification {
                    bc: cfg.bc,
                    regime,
                    lambda1: None,
                    sigma1: None,
                    growth_margin: p.growth_margin(),
                    domain_persists: None,
                },
            );
        }
        Analysis::Periodic => {
            let op = assemble(&cfg.kernel, &cfg.grid, cfg.bc, p.d)?;
            let e = principal_eigenpair(&op, p.a)?;
            s.sigma1 = Some(e.sigma1);
            s.eigen_residual = Some(e.residual);
            let outcome = find_periodic_solution(p, &op, &e, &step_control(cfg))?;
            match &outcome {
                PeriodicOutcome::Periodic { solution, trace } => {
                    s.periodic_outcome = Some("periodic");
                    s.lambda1 = Some(solution.lambda1);
                    s.periodic_residual = Some(solution.residual);
                    s.periodic_sup_norm = Some(solution.sup_norm());
                    s.periods = Some(trace.records.len());
                    if let Some(path) = &cfg.outputs.periodic {
                        s.files.push(path.clone());
                        export_periodic(solution, path)?;
                    }
                }
                PeriodicOutcome::Extinction(ev) => {
                    s.periodic_outcome = Some("extinction");
                    s.lambda1 = Some(ev.lambda1);
                    s.periods = Some(ev.periods);
                    s.final_sup_norm = Some(ev.final_sup_norm);
                }
                PeriodicOutcome::IndeterminateSlow { lambda1, periods, .. } => {
                    s.periodic_outcome = Some("indeterminate");
                    s.lambda1 = Some(*lambda1);
                    s.periods = Some(*periods);
                }
            }
        }
        Analysis::ProfileStudy => {
            let study = asymptotic_profile_study(
                p,
                &cfg.kernel,
                &cfg.profile_lengths,
                &ProfileOptions::default(),
            )?;
            if let Some(path) = &cfg.outputs.profile {
                s.files.push(path.clone());
                export_profile(&study, path)?;
            }
            s.z_star0 = Some(study.z_star.z0);
            s.profile_deviation = study.rows.last().map(|r| r.deviation);
            s.profile_bound = Some(study.bound);
            s.profile_non_increasing = Some(study.non_increasing);
        }
        Analysis::OdeReference => match ode_periodic_solution(p) {
            OdeReference::Periodic(z) => s.z_star0 = Some(z.z0),
            OdeReference::NoPositiveSolution => s.z_star0 = Some(0.0),
        },
    }
    Ok(())
}
