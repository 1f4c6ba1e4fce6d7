//! Run configuration: built-in defaults, then an optional TOML file, then flags.

use std::path::{Path, PathBuf};

use anyhow::Context;
use orlicz_lab::admit::MuckenhouptGrid;
use orlicz_lab::eigen::{EigenOptions, Init};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Json,
    Csv,
}

/// Every tunable, with its default. Serialized into JSON output as the effective config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub phi: String,
    pub psi: Option<String>,
    pub weight: String,
    pub dim: u32,
    /// Domain measure, a number or `"inf"`.
    pub omega: String,
    pub emit: Emit,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub muckenhoupt: MuckenhouptGrid,
    /// Also run the Muckenhoupt sup in `check`.
    pub muckenhoupt_enabled: bool,
    pub capacity: CapacityConfig,
    pub verify: VerifyConfig,
    pub eigen: EigenConfig,
    pub conjugate: ConjugateConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacityConfig {
    /// Evaluate the capacity criterion in `check`.
    pub enabled: bool,
    /// Outer ball radius `R`.
    pub radius: f64,
    /// Inner radii `lo:hi:n`, log-spaced, inside `(0, R)`.
    pub a_grid: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// `cones`, `bumps`, `dilate`, `amplitude` or `all`.
    pub family: String,
    /// Route to compare against; the first admissible route when absent.
    pub route: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenConfig {
    pub radius: f64,
    /// A level `r` or a sweep `lo:hi:n` (log-spaced).
    pub level: String,
    pub nodes: usize,
    pub max_iter: usize,
    pub residual_tol: f64,
    pub decrease_tol: f64,
    /// Profile samples kept in JSON output.
    pub profile_samples: usize,
    /// Relative disagreement between cone- and bump-initialized runs that is reported.
    pub init_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConjugateConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            phi: "pow:p=2".into(),
            psi: None,
            weight: "hardy:a=2".into(),
            dim: 3,
            omega: "inf".into(),
            emit: Emit::Json,
            output: None,
            threads: None,
            muckenhoupt: MuckenhouptGrid::default(),
            muckenhoupt_enabled: false,
            capacity: CapacityConfig::default(),
            verify: VerifyConfig::default(),
            eigen: EigenConfig::default(),
            conjugate: ConjugateConfig::default(),
        }
    }
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig { enabled: false, radius: 1.0, a_grid: "1e-3:0.99:40".into() }
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { family: "all".into(), route: None }
    }
}

impl Default for EigenConfig {
    fn default() -> Self {
        let o = EigenOptions::default();
        EigenConfig {
            radius: 1.0,
            level: "1".into(),
            nodes: o.nodes,
            max_iter: o.max_iter,
            residual_tol: o.residual_tol,
            decrease_tol: o.decrease_tol,
            profile_samples: 101,
            init_tol: 1e-6,
        }
    }
}

impl Default for ConjugateConfig {
    fn default() -> Self {
        ConjugateConfig { t_min: 1e-3, t_max: 1e3, points: 13 }
    }
}

impl EigenConfig {
    pub fn options(&self, init: Init) -> EigenOptions {
        EigenOptions { nodes: self.nodes, max_iter: self.max_iter, residual_tol: self.residual_tol, decrease_tol: self.decrease_tol, init }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<RunConfig> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("malformed config {}", path.display()))
    }

    /// The psi spec, defaulting to phi.
    pub fn psi_spec(&self) -> &str {
        self.psi.as_deref().unwrap_or(&self.phi)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let positive = [
            ("eigen.radius", self.eigen.radius),
            ("eigen.residual_tol", self.eigen.residual_tol),
            ("eigen.decrease_tol", self.eigen.decrease_tol),
            ("eigen.init_tol", self.eigen.init_tol),
            ("capacity.radius", self.capacity.radius),
            ("conjugate.t_min", self.conjugate.t_min),
            ("muckenhoupt.decades", self.muckenhoupt.decades),
        ];
        for (name, v) in positive {
            anyhow::ensure!(v > 0.0 && v.is_finite(), "{name} must be positive and finite, got {v}");
        }
        anyhow::ensure!(self.dim >= 1, "dim must be at least 1");
        anyhow::ensure!(self.conjugate.t_max > self.conjugate.t_min, "conjugate.t_max must exceed conjugate.t_min");
        anyhow::ensure!(self.muckenhoupt.per_decade >= 1, "muckenhoupt.per_decade must be at least 1");
        anyhow::ensure!(self.eigen.nodes >= 3, "eigen.nodes must be at least 3");
        anyhow::ensure!(self.threads != Some(0), "threads must be at least 1");
        Ok(())
    }
}
