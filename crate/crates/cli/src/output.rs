//! Deterministic JSON and CSV artifacts.
//!
//! Floats are always written with 17 significant digits so that identical
//! configurations produce byte-identical files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::CliError;

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// `d.dddddddddddddddde±x`, 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser)?;
    Ok(out)
}

/// What was left out of a computation by truncation to finite data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Residual {
    /// Input intervals removed by `set_truncation`.
    pub dropped_intervals: usize,
    pub dropped_mass: f64,
    /// Length of the compact hull not covered by enumerated gaps.
    pub residual_length: f64,
    /// Largest target mass carried by a cell the gap enumeration did not resolve.
    pub unresolved_mass: f64,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    scenario: &'a str,
    config_hash: &'a str,
    residual: Residual,
    result: &'a T,
}

/// Where and under which provenance artifacts are written.
pub struct Sink<'a> {
    pub dir: &'a Path,
    pub command: &'a str,
    pub scenario: &'a str,
    pub config_hash: &'a str,
    pub residual: Residual,
    pub written: Vec<PathBuf>,
}

impl<'a> Sink<'a> {
    pub fn new(dir: &'a Path, command: &'a str, scenario: &'a str, config_hash: &'a str) -> Self {
        Self {
            dir,
            command,
            scenario,
            config_hash,
            residual: Residual::default(),
            written: Vec::new(),
        }
    }

    fn path(&mut self, name: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(self.dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", self.dir.display())))?;
        let p = self.dir.join(name);
        self.written.push(p.clone());
        Ok(p)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, result: &T) -> Result<(), CliError> {
        let env = Envelope {
            command: self.command,
            scenario: self.scenario,
            config_hash: self.config_hash,
            residual: self.residual,
            result,
        };
        let mut bytes =
            to_json_bytes(&env).map_err(|e| CliError::Config(format!("serialize: {e}")))?;
        bytes.push(b'\n');
        let p = self.path(name)?;
        fs::write(&p, bytes)?;
        Ok(())
    }

    /// CSV with `#` comment lines carrying the config hash and residuals.
    pub fn csv(
        &mut self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let mut buf = Vec::new();
        writeln!(buf, "# command: {}", self.command)?;
        writeln!(buf, "# scenario: {}", self.scenario)?;
        writeln!(buf, "# config_hash: {}", self.config_hash)?;
        let r = &self.residual;
        writeln!(
            buf,
            "# residual: dropped_intervals={} dropped_mass={} residual_length={} unresolved_mass={}",
            r.dropped_intervals,
            fmt_f64(r.dropped_mass),
            fmt_f64(r.residual_length),
            fmt_f64(r.unresolved_mass)
        )?;
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        let p = self.path(name)?;
        fs::write(&p, buf)?;
        Ok(())
    }

    /// Generic matplotlib script plotting column `y` against column `x`.
    pub fn plot_script(
        &mut self,
        csv_name: &str,
        x: &str,
        y: &str,
        group: Option<&str>,
    ) -> Result<(), CliError> {
        let stem = csv_name.trim_end_matches(".csv");
        let group = group.map_or("None".to_string(), |g| format!("{g:?}"));
        let script = format!(
            r##"import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv_name:?}
with open(path) as fh:
    rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))

series = defaultdict(list)
for row in rows:
    key = row[{group}] if {group} else ""
    series[key].append((float(row[{x:?}]), float(row[{y:?}])))

fig, ax = plt.subplots()
for key, pts in sorted(series.items()):
    pts.sort()
    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=".", label=key or None)
ax.set_xlabel({x:?})
ax.set_ylabel({y:?})
if len(series) > 1:
    ax.legend()
fig.savefig({png:?}, dpi=150)
"##,
            png = format!("{stem}.png"),
        );
        let p = self.path(&format!("plot_{stem}.py"))?;
        fs::write(&p, script)?;
        Ok(())
    }
}
