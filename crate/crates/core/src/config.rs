//! Scenario configuration: flat `key = value` text with dotted sections.
//!
//! ```text
//! # Figure 1 setup
//! preset = P1
//! ic.type = cosine
//! ic.l = 0.2
//! run.n_periods = 60
//! out.trajectory = p1_traj.csv
//! ```
//!
//! A preset fills in the six rates and the Laplace kernel with `D = 20`;
//! explicit keys override it. Later `--override key=value` pairs override
//! both.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{validate_params, BoundaryCondition, Grid, KernelSpec, SeasonParams, StateVector, TabulatedKernel};

pub const KNOWN_KEYS: &[&str] = &[
    "preset",
    "delta",
    "a",
    "b",
    "d",
    "rho",
    "omega",
    "kernel.type",
    "kernel.scale",
    "kernel.table_path",
    "bc",
    "domain.l1",
    "domain.l2",
    "grid.n",
    "time.dt_good",
    "run.n_periods",
    "ic.type",
    "ic.l",
    "ic.c",
    "ic.table_path",
    "profile.lengths",
    "out.trajectory",
    "out.summary",
    "out.periodic",
    "out.profile",
];

pub const DEFAULT_GRID_NODES: usize = 128;
pub const DEFAULT_PERIODS: usize = 60;

/// Parameter sets used for the published simulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    P1,
    P2,
    P3,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Preset> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Some(Preset::P1),
            "P2" => Some(Preset::P2),
            "P3" => Some(Preset::P3),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::P1 => "P1",
            Preset::P2 => "P2",
            Preset::P3 => "P3",
        }
    }

    pub fn params(&self) -> SeasonParams {
        let (delta, d) = match self {
            Preset::P1 => (0.2, 0.6),
            Preset::P2 => (0.2, 1.0),
            Preset::P3 => (0.8, 0.6),
        };
        SeasonParams {
            delta,
            a: 1.2,
            b: 0.6,
            d,
            rho: 0.6,
            omega: 1.0,
        }
    }

    pub fn kernel(&self) -> KernelSpec {
        KernelSpec::Laplace { scale: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// `max(cos(pi x / l), 0)` on `[-l, l]`.
    Cosine { l: f64 },
    Constant { c: f64 },
    /// One value per grid node.
    NodeTable(Vec<f64>),
}

impl InitialCondition {
    pub fn sample(&self, grid: &Grid) -> Result<StateVector> {
        let values = match self {
            InitialCondition::Cosine { l } => grid
                .nodes()
                .iter()
                .map(|x| (std::f64::consts::PI * x / l).cos().max(0.0))
                .collect(),
            InitialCondition::Constant { c } => vec![*c; grid.len()],
            InitialCondition::NodeTable(v) => {
                if v.len() != grid.len() {
                    return Err(Error::config(
                        "ic.table_path",
                        format!("table has {} values but the grid has {} nodes", v.len(), grid.len()),
                    ));
                }
                v.clone()
            }
        };
        Ok(StateVector::new(values, 0.0))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outputs {
    pub trajectory: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub periodic: Option<PathBuf>,
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub preset: Option<Preset>,
    pub params: SeasonParams,
    pub kernel: KernelSpec,
    pub bc: BoundaryCondition,
    pub grid: Grid,
    pub dt_good: f64,
    pub ic: InitialCondition,
    pub n_periods: usize,
    /// Habitat lengths for the profile study; defaults to `{10, 20, 40} D`.
    pub profile_lengths: Vec<f64>,
    pub outputs: Outputs,
}

/// Parses and validates a config; relative file references resolve against
/// the working directory.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_with_overrides(text, &[])
}

/// Like [`parse_config`], then applies `key=value` overrides in order.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut entries = parse_entries(text)?;
    for o in overrides {
        let (key, value) = o
            .split_once('=')
            .ok_or_else(|| Error::config(o.trim(), "override must look like key=value"))?;
        let key = key.trim();
        check_known(key)?;
        entries.insert(key.to_string(), unquote(value.trim()).to_string());
    }
    build(&entries)
}

/// Reads a config file, applying overrides.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_with_overrides(&text, overrides)
}

fn check_known(key: &str) -> Result<()> {
    if KNOWN_KEYS.contains(&key) {
        Ok(())
    } else {
        Err(Error::config(key, "unknown key"))
    }
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(line, format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        check_known(key)?;
        if out
            .insert(key.to_string(), unquote(value.trim()).to_string())
            .is_some()
        {
            return Err(Error::config(key, format!("line {}: duplicate key", lineno + 1)));
        }
    }
    Ok(out)
}

struct Entries<'a>(&'a BTreeMap<String, String>);

impl Entries<'_> {
    fn str(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.str(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::config(key, format!("expected a number, got `{v}`")))
            })
            .transpose()
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.str(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    Error::config(key, format!("expected a nonnegative integer, got `{v}`"))
                })
            })
            .transpose()
    }

    fn path(&self, key: &str) -> Result<Option<PathBuf>> {
        self.str(key)
            .map(|v| {
                if v.is_empty() {
                    Err(Error::config(key, "empty path"))
                } else {
                    Ok(PathBuf::from(v))
                }
            })
            .transpose()
    }
}

fn build(map: &BTreeMap<String, String>) -> Result<ScenarioConfig> {
    let e = Entries(map);

    let preset = e
        .str("preset")
        .map(|v| Preset::parse(v).ok_or_else(|| Error::config("preset", format!("unknown preset `{v}`"))))
        .transpose()?;

    let base = preset.map(|p| p.params());
    let rate = |key: &'static str, from_preset: Option<f64>| -> Result<f64> {
        e.f64(key)?
            .or(from_preset)
            .ok_or_else(|| Error::config(key, "missing (no preset given)"))
    };
    let params = SeasonParams {
        delta: rate("delta", base.map(|p| p.delta))?,
        a: rate("a", base.map(|p| p.a))?,
        b: rate("b", base.map(|p| p.b))?,
        d: rate("d", base.map(|p| p.d))?,
        rho: rate("rho", base.map(|p| p.rho))?,
        omega: rate("omega", base.map(|p| p.omega))?,
    };
    let params = validate_params(params).map_err(|err| match err {
        Error::InvalidParameter { field, reason } => Error::config(field, reason),
        other => other,
    })?;

    let kernel = build_kernel(&e, preset)?;

    let bc = match e.str("bc").unwrap_or("dirichlet") {
        "dirichlet" => BoundaryCondition::DirichletNonlocal,
        "neumann" => BoundaryCondition::NeumannNonlocal,
        other => {
            return Err(Error::config(
                "bc",
                format!("expected `dirichlet` or `neumann`, got `{other}`"),
            ))
        }
    };

    let (l1, l2) = (e.f64("domain.l1")?, e.f64("domain.l2")?);
    let ic_type = e.str("ic.type").unwrap_or("cosine");
    let (ic, domain) = match ic_type {
        "cosine" => {
            let l = match (e.f64("ic.l")?, l1, l2) {
                (Some(l), _, _) => l,
                (None, Some(a), Some(b)) if (a + b).abs() <= 1e-12 * (b - a).abs() => b,
                (None, _, _) => {
                    return Err(Error::config(
                        "ic.l",
                        "cosine initial data needs ic.l or a symmetric domain",
                    ))
                }
            };
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::config("ic.l", format!("must be positive, got {l}")));
            }
            let domain = match (l1, l2) {
                (None, None) => (-l, l),
                (Some(a), Some(b)) => {
                    if (a + l).abs() > 1e-12 * l || (b - l).abs() > 1e-12 * l {
                        return Err(Error::config(
                            "ic.l",
                            format!("cosine initial data requires the domain [-{l}, {l}], got [{a}, {b}]"),
                        ));
                    }
                    (a, b)
                }
                (Some(_), None) => return Err(Error::config("domain.l2", "missing")),
                (None, Some(_)) => return Err(Error::config("domain.l1", "missing")),
            };
            (InitialCondition::Cosine { l }, domain)
        }
        "constant" | "table" => {
            let domain = match (l1, l2) {
                (Some(a), Some(b)) => (a, b),
                (None, _) => return Err(Error::config("domain.l1", "missing")),
                (_, None) => return Err(Error::config("domain.l2", "missing")),
            };
            let ic = if ic_type == "constant" {
                let c = e
                    .f64("ic.c")?
                    .ok_or_else(|| Error::config("ic.c", "missing for constant initial data"))?;
                if !(c.is_finite() && c >= 0.0) {
                    return Err(Error::config("ic.c", format!("must be nonnegative, got {c}")));
                }
                InitialCondition::Constant { c }
            } else {
                let path = e
                    .path("ic.table_path")?
                    .ok_or_else(|| Error::config("ic.table_path", "missing for table initial data"))?;
                let values = read_column(&path, "ic.table_path")?;
                if values.iter().any(|v| *v < 0.0) {
                    return Err(Error::config("ic.table_path", "initial data must be nonnegative"));
                }
                InitialCondition::NodeTable(values)
            };
            (ic, domain)
        }
        other => {
            return Err(Error::config(
                "ic.type",
                format!("expected cosine, constant or table, got `{other}`"),
            ))
        }
    };

    let n = e.usize("grid.n")?.unwrap_or(DEFAULT_GRID_NODES);
    let grid = Grid::new(domain.0, domain.1, n).map_err(|err| Error::config("grid.n", err.to_string()))?;
    if let InitialCondition::NodeTable(v) = &ic {
        if v.len() != n {
            return Err(Error::config(
                "ic.table_path",
                format!("table has {} values but grid.n = {n}", v.len()),
            ));
        }
    }

    let dt_good = e
        .f64("time.dt_good")?
        .unwrap_or(params.good_season_length() / crate::evolution::DEFAULT_GOOD_STEPS as f64);
    if !(dt_good.is_finite() && dt_good > 0.0) {
        return Err(Error::config("time.dt_good", format!("must be positive, got {dt_good}")));
    }
    if dt_good > params.good_season_length() {
        return Err(Error::config("time.dt_good", "longer than the good season"));
    }

    let n_periods = e.usize("run.n_periods")?.unwrap_or(DEFAULT_PERIODS);
    if n_periods == 0 {
        return Err(Error::config("run.n_periods", "must be at least 1"));
    }

    let profile_lengths = match e.str("profile.lengths") {
        Some(list) => {
            let lengths = list
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::config("profile.lengths", format!("bad number `{}`", s.trim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if lengths.iter().any(|l| *l <= 0.0) || lengths.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::config("profile.lengths", "must be positive and increasing"));
            }
            lengths
        }
        None => [10.0, 20.0, 40.0].iter().map(|m| m * kernel.length_scale()).collect(),
    };

    let outputs = Outputs {
        trajectory: e.path("out.trajectory")?,
        summary: e.path("out.summary")?,
        periodic: e.path("out.periodic")?,
        profile: e.path("out.profile")?,
    };
    for (key, path) in [
        ("out.trajectory", &outputs.trajectory),
        ("out.summary", &outputs.summary),
        ("out.periodic", &outputs.periodic),
        ("out.profile", &outputs.profile),
    ] {
        if let Some(p) = path {
            check_writable(key, p)?;
        }
    }

    Ok(ScenarioConfig {
        preset,
        params,
        kernel,
        bc,
        grid,
        dt_good,
        ic,
        n_periods,
        profile_lengths,
        outputs,
    })
}

fn build_kernel(e: &Entries<'_>, preset: Option<Preset>) -> Result<KernelSpec> {
    let kind = e.str("kernel.type");
    let scale = e.f64("kernel.scale")?;
    let wrap = |err: Error| Error::config("kernel.scale", err.to_string());
    match (kind, preset) {
        (None, Some(p)) | (Some("laplace"), Some(p)) => match scale {
            Some(s) => KernelSpec::laplace(s).map_err(wrap),
            None => Ok(p.kernel()),
        },
        (Some("laplace"), None) | (None, None) => {
            let s = scale.ok_or_else(|| Error::config("kernel.scale", "missing"))?;
            KernelSpec::laplace(s).map_err(wrap)
        }
        (Some("table"), _) => {
            let half_width = scale
                .ok_or_else(|| Error::config("kernel.scale", "table kernels need their half-width here"))?;
            let path = e
                .path("kernel.table_path")?
                .ok_or_else(|| Error::config("kernel.table_path", "missing for a table kernel"))?;
            let samples = read_column(&path, "kernel.table_path")?;
            TabulatedKernel::new(samples, half_width)
                .map(KernelSpec::Tabulated)
                .map_err(|err| Error::config("kernel.table_path", err.to_string()))
        }
        (Some(other), _) => Err(Error::config(
            "kernel.type",
            format!("expected `laplace` or `table`, got `{other}`"),
        )),
    }
}

/// One number per non-empty, non-comment line.
fn read_column(path: &Path, key: &str) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|err| Error::config(key, format!("cannot read {}: {err}", path.display())))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Error::config(key, format!("bad number `{l}` in {}", path.display())))
        })
        .collect()
}

fn check_writable(key: &str, path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let meta = fs::metadata(parent).map_err(|_| {
        Error::config(key, format!("directory {} does not exist", parent.display()))
    })?;
    if !meta.is_dir() || meta.permissions().readonly() {
        return Err(Error::config(
            key,
            format!("{} is not a writable directory", parent.display()),
        ));
    }
    if path.is_dir() {
        return Err(Error::config(key, format!("{} is a directory", path.display())));
    }
    Ok(())
}
