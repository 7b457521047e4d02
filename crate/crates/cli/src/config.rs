//! JSON run configuration.
//!
//! ```json
//! {
//!   "model": { "kind": "lattice", "gamma": 0.005, "j0": 0, "N": 100, "t": 1 },
//!   "bc": "pbc",
//!   "spectrum": {},
//!   "output": { "directory": "out", "format": "csv", "points": 2001 }
//! }
//! ```
//!
//! Each subcommand reads its own task section (`spectrum`, `states`,
//! `winding`, `edge`, `sweep`); sections for other tasks are ignored.

use std::path::{Path, PathBuf};

use nhspec_core::{Boundary, ContinuumModel, LatticeModel};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_SWEEP_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub bc: Bc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<StatesTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<WindingTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepTask>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Obc,
    Pbc,
}

impl Bc {
    pub fn boundary(self) -> Boundary {
        match self {
            Bc::Obc => Boundary::Open,
            Bc::Pbc => Boundary::Periodic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSection {
    Continuum {
        gamma: f64,
        #[serde(default)]
        x0: f64,
        #[serde(alias = "L")]
        length: f64,
        #[serde(default = "default_order", alias = "m")]
        order: u32,
    },
    Lattice {
        gamma: f64,
        #[serde(default)]
        j0: f64,
        #[serde(alias = "N")]
        sites: usize,
        #[serde(default = "default_hopping")]
        t: f64,
    },
}

fn default_order() -> u32 {
    1
}

fn default_hopping() -> f64 {
    1.0
}

/// Model parameters resolved against the boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Continuum(ContinuumModel),
    Lattice(LatticeModel),
}

impl ModelSection {
    pub fn build(&self, bc: Bc) -> CliResult<Model> {
        Ok(match *self {
            ModelSection::Continuum {
                gamma,
                x0,
                length,
                order,
            } => Model::Continuum(ContinuumModel::with_order(gamma, x0, length, order)?),
            ModelSection::Lattice { gamma, j0, sites, t } => {
                Model::Lattice(LatticeModel::new(t, gamma, j0, sites, bc.boundary())?)
            }
        })
    }
}

/// Index range; defaults to `1..=50` for OBC and `-25..=25` for PBC, and to
/// every site for lattices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumTask {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesTask {
    pub indices: Vec<i64>,
}

/// Either an explicit list of base energies or a vertical scan at fixed
/// `Re E_B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindingTask {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<Scan>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Half-width of the parameter range of an open curve (default π).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
}

fn default_samples() -> usize {
    nhspec_core::topology::DEFAULT_SAMPLES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scan {
    pub re: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub steps: usize,
}

impl Scan {
    pub fn bases(&self) -> Vec<[f64; 2]> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![[self.re, self.im_min]],
            s => (0..s)
                .map(|i| {
                    let f = i as f64 / (s - 1) as f64;
                    [self.re, self.im_min + (self.im_max - self.im_min) * f]
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeTask {
    pub base: [f64; 2],
    /// Defaults to the model's `gamma`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
    /// Defaults to `2L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
}

/// Cartesian sweep; a missing axis keeps the model value, an empty axis
/// yields no points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepTask {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    /// `x0` for continuum models, `j0` for lattices.
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "x0", alias = "j0")]
    pub center: Option<Vec<f64>>,
    /// `L` for continuum models, `N` for lattices.
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "L", alias = "N")]
    pub size: Option<Vec<f64>>,
    /// State whose pinning and envelope are summarised.
    #[serde(default = "default_sweep_state")]
    pub state: i64,
    #[serde(default)]
    pub reference_base: [f64; 2],
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_sweep_state() -> i64 {
    13
}

fn default_cap() -> usize {
    DEFAULT_SWEEP_CAP
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_points")]
    pub points: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            format: Format::default(),
            points: DEFAULT_POINTS,
        }
    }
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Validation(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> CliResult<()> {
        let mut values: Vec<(&str, f64)> = Vec::new();
        match &self.model {
            ModelSection::Continuum { gamma, x0, length, .. } => {
                values.extend([("model.gamma", *gamma), ("model.x0", *x0), ("model.length", *length)]);
            }
            ModelSection::Lattice { gamma, j0, t, .. } => {
                values.extend([("model.gamma", *gamma), ("model.j0", *j0), ("model.t", *t)]);
            }
        }
        if let Some(w) = &self.winding {
            for b in w.bases.iter().flatten() {
                values.extend([("winding.bases", b[0]), ("winding.bases", b[1])]);
            }
            if let Some(s) = &w.scan {
                values.extend([("winding.scan.re", s.re), ("winding.scan.im_min", s.im_min), ("winding.scan.im_max", s.im_max)]);
            }
            if let Some(c) = w.cutoff {
                values.push(("winding.cutoff", c));
            }
        }
        if let Some(e) = &self.edge {
            values.extend([("edge.base", e.base[0]), ("edge.base", e.base[1])]);
            values.extend(e.gamma2.map(|g| ("edge.gamma2", g)));
            values.extend(e.x_max.map(|x| ("edge.x_max", x)));
        }
        if let Some(s) = &self.sweep {
            for v in s.gamma.iter().flatten() {
                values.push(("sweep.gamma", *v));
            }
            for v in s.center.iter().flatten() {
                values.push(("sweep.center", *v));
            }
            for v in s.size.iter().flatten() {
                values.push(("sweep.size", *v));
            }
            values.extend([("sweep.reference_base", s.reference_base[0]), ("sweep.reference_base", s.reference_base[1])]);
        }
        if let Some((name, v)) = values.iter().find(|(_, v)| !v.is_finite()) {
            return Err(CliError::Validation(format!("{name} must be finite, got {v}")));
        }
        if self.output.points < 5 {
            return Err(CliError::Validation(format!(
                "output.points must be at least 5, got {}",
                self.output.points
            )));
        }
        Ok(())
    }
}
