//! Scenario configuration: one JSON document, overridable from the command
//! line.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use skelflow::inverse_compact::{CantorMeasure, GapTruncation, MiddleCantor};
use skelflow::oracle::Scheme;
use skelflow::{Atom, AtomicMeasure, Interval, IntervalUnion, Polynomial, Truncation};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSpec {
    Atoms(Vec<Atom>),
    Cantor(CantorSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorSpec {
    #[serde(default = "unit_hull")]
    pub hull: Interval,
    /// Removed middle fraction of every cell.
    #[serde(default = "one_third")]
    pub middle: f64,
    #[serde(default = "two")]
    pub total_mass: f64,
    #[serde(default = "default_resolution")]
    pub resolution: u32,
}

impl Default for CantorSpec {
    fn default() -> Self {
        Self {
            hull: unit_hull(),
            middle: one_third(),
            total_mass: two(),
            resolution: default_resolution(),
        }
    }
}

impl CantorSpec {
    pub fn build(&self) -> Result<(MiddleCantor, CantorMeasure), CliError> {
        let set = MiddleCantor::new(self.hull, self.middle)?;
        let mu = CantorMeasure::new(set, self.total_mass, self.resolution)?;
        Ok((set, mu))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub id: String,
    pub coefficients: Polynomial,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// Also write a plotting script next to the data.
    pub plot: bool,
}

/// Effective configuration. Every field has a default, so `{}` is valid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub scenario: String,
    pub set: IntervalUnion,
    pub measure: MeasureSpec,
    pub t_grid: Vec<f64>,
    pub depth: u32,
    pub truncation: GapTruncation,
    pub set_truncation: Truncation,
    pub particles: usize,
    pub t_final: f64,
    pub dt: Option<f64>,
    pub scheme: Scheme,
    pub cluster_tol: f64,
    pub ladder: Option<Vec<f64>>,
    pub k_max: u32,
    pub test_functions: Vec<TestFunction>,
    pub seed: Option<u64>,
    pub outputs: Outputs,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            scenario: "two-interval".into(),
            set: IntervalUnion::from_pairs(&[(0.0, 1.0), (2.0, 3.0)]).expect("valid pairs"),
            measure: MeasureSpec::Cantor(CantorSpec::default()),
            t_grid: (1..=20).map(|k| 1.0 - (-(k as f64)).exp2()).collect(),
            depth: 8,
            truncation: GapTruncation::default(),
            set_truncation: Truncation::default(),
            particles: 10_000,
            t_final: 1.0 - 1e-3,
            dt: None,
            scheme: Scheme::Rk4,
            cluster_tol: 1e-2,
            ladder: None,
            k_max: 20,
            test_functions: default_test_functions(),
            seed: None,
            outputs: Outputs::default(),
        }
    }
}

/// Values given on the command line take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub depth: Option<u32>,
    pub particles: Option<usize>,
    pub t_final: Option<f64>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn load(path: Option<&Path>, overrides: Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => Config::default(),
        };
        if let Some(d) = overrides.depth {
            cfg.depth = d;
        }
        if let Some(n) = overrides.particles {
            cfg.particles = n;
        }
        if let Some(t) = overrides.t_final {
            cfg.t_final = t;
        }
        if let Some(s) = overrides.seed {
            cfg.seed = Some(s);
        }
        Ok(cfg)
    }

    /// Hex SHA-256 of the effective configuration's canonical JSON.
    pub fn hash(&self) -> String {
        let bytes = crate::output::to_json_bytes(self).expect("config serializes");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn atoms(&self) -> Result<AtomicMeasure, CliError> {
        match &self.measure {
            MeasureSpec::Atoms(a) => Ok(AtomicMeasure::from_unsorted(a.clone())?),
            MeasureSpec::Cantor(_) => Err(CliError::Config(
                "this command needs `measure.atoms`".into(),
            )),
        }
    }

    pub fn cantor(&self) -> Result<(MiddleCantor, CantorMeasure), CliError> {
        match &self.measure {
            MeasureSpec::Cantor(c) => c.build(),
            MeasureSpec::Atoms(_) => Err(CliError::Config(
                "this command needs `measure.cantor`".into(),
            )),
        }
    }

    /// The input set after `set_truncation`, with what was dropped.
    pub fn open_set(&self) -> Result<skelflow::Truncated<IntervalUnion>, CliError> {
        if self.set.is_empty() {
            return Err(CliError::Config(
                "`set` must contain at least one interval".into(),
            ));
        }
        Ok(self.set.truncate(&self.set_truncation))
    }
}

fn default_test_functions() -> Vec<TestFunction> {
    let mono = |k: usize| Polynomial::monomial(k).expect("degree below cap");
    vec![
        TestFunction {
            id: "x".into(),
            coefficients: mono(1),
        },
        TestFunction {
            id: "x2".into(),
            coefficients: mono(2),
        },
        TestFunction {
            id: "x3".into(),
            coefficients: mono(3),
        },
        TestFunction {
            id: "cos".into(),
            coefficients: Polynomial::cos_surrogate(),
        },
    ]
}

fn unit_hull() -> Interval {
    Interval::new(0.0, 1.0).expect("ordered")
}

fn one_third() -> f64 {
    1.0 / 3.0
}

fn two() -> f64 {
    2.0
}

fn default_resolution() -> u32 {
    CantorMeasure::DEFAULT_RESOLUTION
}
