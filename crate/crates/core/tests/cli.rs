mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use common::*;
use seasonal_dispersal::config::{parse_config, parse_config_with_overrides, InitialCondition};
use seasonal_dispersal::model::{BoundaryCondition, KernelSpec};
use seasonal_dispersal::operator::assemble;
use seasonal_dispersal::output::{fmt_num, parse_csv3, SummaryText};
use seasonal_dispersal::periodic::Regime;
use seasonal_dispersal::scenario::{run_scenario, Analysis};
use tempfile::tempdir;

const BIN: &str = env!("CARGO_BIN_EXE_seasonal-dispersal");

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    fs::write(&path, body).unwrap();
    path
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn presets_expand() {
    let cfg = parse_config("preset = P1\nic.l = 0.2").unwrap();
    assert_eq!((cfg.params.delta, cfg.params.d, cfg.params.a, cfg.params.b), (0.2, 0.6, 1.2, 0.6));
    assert_eq!((cfg.params.rho, cfg.params.omega), (0.6, 1.0));
    assert_eq!(cfg.kernel, KernelSpec::Laplace { scale: 20.0 });
    assert_eq!(parse_config("preset = P2\nic.l = 0.2").unwrap().params.d, 1.0);
    assert!(parse_config("preset = P1\nic.l = 0.2\nrho = 1.5").is_err());
}

#[test]
fn simulate_p1_small_habitat_persists() {
    let dir = tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let summary = dir.path().join("summary.txt");
    let cfg = parse_config(&format!(
        "preset = P1\nic.l = 0.2\ngrid.n = 32\nrun.n_periods = 60\nout.trajectory = {}\nout.summary = {}",
        traj.display(),
        summary.display()
    ))
    .unwrap();
    let s = run_scenario(&cfg, Analysis::Simulate);
    assert!(s.succeeded(), "{:?}", s.status);
    assert_eq!(s.regime(), Some(&Regime::PersistAllDomains));
    assert!(s.final_sup_norm.unwrap() >= 1e-2);

    // the summary's sup-norm is the max over the last time block of the CSV
    let rows = parse_csv3(&fs::read_to_string(&traj).unwrap()).unwrap();
    let t_last = rows.last().unwrap()[0];
    let max_last = rows
        .iter()
        .filter(|r| r[0] == t_last)
        .map(|r| r[2].abs())
        .fold(0.0, f64::max);
    let text = SummaryText::parse(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(text.get("final_sup_norm"), Some(fmt_num(max_last).as_str()));
    assert_eq!(text.get("schema_version"), Some("1"));
    assert_eq!(text.get("classification"), Some("PersistAllDomains"));
    for (k, v) in &text.entries {
        if let Ok(x) = v.parse::<f64>() {
            assert!(x.is_finite(), "{k} = {v}");
        }
    }
}

#[test]
fn simulate_p3_dies_out() {
    let cfg = parse_config("preset = P3\nic.l = 4\ngrid.n = 32\nrun.n_periods = 60").unwrap();
    let s = run_scenario(&cfg, Analysis::Simulate);
    assert!(s.succeeded());
    assert_eq!(s.regime(), Some(&Regime::ExtinctAllDomains));
    assert!(s.final_sup_norm.unwrap() < 1e-4);
}

#[test]
fn classify_p2_at_two_lengths() {
    let mut lambdas = Vec::new();
    for l in ["0.2", "4"] {
        let cfg = parse_config(&format!("preset = P2\nic.l = {l}\ngrid.n = 64")).unwrap();
        let s = run_scenario(&cfg, Analysis::Classify);
        let lambda = s.lambda1.unwrap();
        // dense eigendecomposition of the same discretization
        let op = assemble(&cfg.kernel, &cfg.grid, BoundaryCondition::DirichletNonlocal, cfg.params.d).unwrap();
        let dense = (1.0 - cfg.params.rho) * dense_sigma1(&op, cfg.params.a) + cfg.params.rho * cfg.params.delta;
        assert!((lambda - dense).abs() < 1e-10);
        lambdas.push(lambda);
    }
    assert!(lambdas[0] > 0.0 && lambdas[1] < 0.0, "{lambdas:?}");
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let cfg = parse_config(&format!(
            "preset = P2\nic.l = 1\ngrid.n = 16\nrun.n_periods = 3\nout.trajectory = {}",
            path.display()
        ))
        .unwrap();
        assert!(run_scenario(&cfg, Analysis::Simulate).succeeded());
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn periodic_csv_has_expected_layout() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("ustar.csv");
    let cfg = parse_config(&format!(
        "preset = P1\nic.l = 0.2\ngrid.n = 8\ntime.dt_good = 0.002\nout.periodic = {}",
        path.display()
    ))
    .unwrap();
    let s = run_scenario(&cfg, Analysis::Periodic);
    assert!(s.succeeded(), "{:?}", s.status);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,x,ustar\n"));
    let rows = parse_csv3(&text).unwrap();
    assert_eq!(rows.len() % 8, 0);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0] || (w[1][0] == w[0][0] && w[1][1] > w[0][1])));
    assert!(rows.iter().all(|r| r[2] > 0.0));
}

#[test]
fn cli_exit_codes() {
    let dir = tempdir().unwrap();
    let cfg = write_config(dir.path(), "preset = P1\nic.l = 0.2\ngrid.n = 8\n");
    let cfg = cfg.to_str().unwrap();

    let (code, out, _) = cli(&["ode-reference", "--config", cfg]);
    assert_eq!(code, 0);
    assert!(out.contains("schema_version = 1"));
    assert!(out.contains("z_star0 = 1.586"));

    let (code, out, _) = cli(&["classify", "--config", cfg, "--override", "d=1"]);
    assert_eq!(code, 0);
    assert!(out.contains("classification = CriticalLength"), "{out}");

    let (code, _, err) = cli(&["simulate", "--config", cfg, "--override", "rho=1.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("rho"), "{err}");

    let (code, _, err) = cli(&["simulate", "--config", cfg, "--override", "kernel.shape=gauss"]);
    assert_eq!(code, 2);
    assert!(err.contains("kernel.shape"));

    let (code, _, _) = cli(&["simulate", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(code, 2);

    let (code, _, _) = cli(&["critical-length", "--config", cfg, "--override", "bc=neumann"]);
    assert_eq!(code, 3);
}

#[test]
fn failed_runs_leave_no_artifacts() {
    let dir = tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let summary = dir.path().join("summary.txt");
    // one huge step drives the solution negative
    let cfg = write_config(
        dir.path(),
        &format!(
            "delta = 0.2\na = 40\nb = 40\nd = 0.6\nrho = 0.6\nomega = 1\nkernel.scale = 20\n\
             ic.type = constant\nic.c = 3\ndomain.l1 = -1\ndomain.l2 = 1\ngrid.n = 4\n\
             time.dt_good = 0.4\nout.trajectory = {}\nout.summary = {}\n",
            traj.display(),
            summary.display()
        ),
    );
    let (code, out, err) = cli(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 3, "{out}{err}");
    assert!(!traj.exists());
    let text = SummaryText::parse(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(text.get("status"), Some("failed"));
    assert!(text.get("error").unwrap().contains("positivity"));
}

#[test]
fn table_inputs() {
    let dir = tempdir().unwrap();
    let kernel = dir.path().join("kernel.txt");
    // triangle kernel on [-1, 1]
    fs::write(&kernel, "# J(k/4)\n1\n0.75\n0.5\n0.25\n0\n").unwrap();
    let ic = dir.path().join("ic.txt");
    fs::write(&ic, "0.1\n0.2\n0.3\n0.4\n").unwrap();
    let cfg = parse_config(&format!(
        "preset = P1\nkernel.type = table\nkernel.scale = 1\nkernel.table_path = {}\n\
         ic.type = table\nic.table_path = {}\ndomain.l1 = 0\ndomain.l2 = 2\ngrid.n = 4",
        kernel.display(),
        ic.display()
    ))
    .unwrap();
    assert_eq!(cfg.ic, InitialCondition::NodeTable(vec![0.1, 0.2, 0.3, 0.4]));
    assert_eq!(cfg.kernel.length_scale(), 1.0);
    assert!(run_scenario(&cfg, Analysis::Simulate).succeeded());

    let bad = parse_config_with_overrides(
        &format!("preset = P1\nic.type = table\nic.table_path = {}\ndomain.l1 = 0\ndomain.l2 = 2", ic.display()),
        &["grid.n=5".into()],
    );
    assert!(bad.is_err());
}
