//! CSV and summary persistence.
//!
//! Numbers are written with 17 significant digits so that a round trip
//! through text reproduces every `f64` exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::periodic::{PeriodicSolution, ProfileStudy};

pub const TRAJECTORY_HEADER: &str = "t,x,u";
pub const PERIODIC_HEADER: &str = "t,x,ustar";
pub const PROFILE_HEADER: &str = "L,deviation";

/// Scientific notation with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trajectory_csv<W: Write>(tr: &Trajectory, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    let x = tr.grid.nodes();
    for state in &tr.states {
        write_block(w, state.time, &x, &state.values)?;
    }
    Ok(())
}

pub fn write_periodic_csv<W: Write>(s: &PeriodicSolution, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{PERIODIC_HEADER}")?;
    let x = s.grid.nodes();
    for state in &s.samples {
        write_block(w, state.time, &x, &state.values)?;
    }
    Ok(())
}

pub fn write_profile_csv<W: Write>(study: &ProfileStudy, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{PROFILE_HEADER}")?;
    for row in &study.rows {
        writeln!(w, "{},{}", fmt_num(row.length), fmt_num(row.deviation))?;
    }
    Ok(())
}

fn write_block<W: Write>(w: &mut W, t: f64, x: &[f64], u: &[f64]) -> std::io::Result<()> {
    let t = fmt_num(t);
    for (xi, ui) in x.iter().zip(u) {
        writeln!(w, "{t},{},{}", fmt_num(*xi), fmt_num(*ui))?;
    }
    Ok(())
}

fn to_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn export_trajectory(tr: &Trajectory, path: &Path) -> Result<()> {
    to_file(path, |w| write_trajectory_csv(tr, w))
}

pub fn export_periodic(s: &PeriodicSolution, path: &Path) -> Result<()> {
    to_file(path, |w| write_periodic_csv(s, w))
}

pub fn export_profile(study: &ProfileStudy, path: &Path) -> Result<()> {
    to_file(path, |w| write_profile_csv(study, w))
}

/// Parses any of the three-column CSVs written here into `(t, x, value)` rows.
pub fn parse_csv3(text: &str) -> Result<Vec<[f64; 3]>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRAJECTORY_HEADER || h == PERIODIC_HEADER => {}
        other => {
            return Err(Error::config(
                "csv",
                format!("unexpected header {:?}", other.unwrap_or("")),
            ))
        }
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let mut row = [0.0; 3];
            let mut fields = line.split(',');
            for slot in row.iter_mut() {
                *slot = fields
                    .next()
                    .and_then(|f| f.parse().ok())
                    .ok_or_else(|| Error::config("csv", format!("bad row {}: {line}", i + 2)))?;
            }
            if fields.next().is_some() {
                return Err(Error::config("csv", format!("extra field on row {}", i + 2)));
            }
            Ok(row)
        })
        .collect()
}

/// Flat `key = value` pairs, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SummaryText {
    pub entries: Vec<(String, String)>,
}

impl SummaryText {
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| Error::config(l, "expected `key = value`"))
            })
            .collect::<Result<_>>()?;
        Ok(SummaryText { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }
}
