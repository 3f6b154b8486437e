//! Run configuration: one TOML file, unknown keys rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::audit::AuditOptions;
use crate::error::{Error, Result};
use crate::potential::{self, Potential2D, SampledPotential, StripGeometry};
use crate::solver::SolverConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometrySection,
    pub flux: FluxSection,
    pub potential: PotentialSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inequalities: Option<InequalitySection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    /// Half-length `L` of the `x1` truncation.
    pub x1_extent: f64,
    pub x1_points: usize,
    pub x2_points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            x1_extent: 20.0,
            x1_points: 2001,
            x2_points: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InequalitySection {
    pub hardy_functions: usize,
    pub hardy_p: Vec<f64>,
    pub magnetic_functions: usize,
    pub magnetic_m: Vec<i64>,
    pub magnetic_alpha: Vec<f64>,
    pub cutoffs: Vec<f64>,
}

impl Default for InequalitySection {
    fn default() -> Self {
        Self {
            hardy_functions: 100,
            hardy_p: vec![2.0],
            magnetic_functions: 100,
            magnetic_m: (-5..=5).collect(),
            magnetic_alpha: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            cutoffs: (2..=12).map(|k| 10f64.powi(-k)).collect(),
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    /// Reads a `.toml` file, or a `.json` file such as the config embedded
    /// in a report header. Relative CSV paths resolve against the file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?
        };
        if let Some(csv) = &cfg.potential.csv {
            if csv.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.potential.csv = Some(base.join(csv));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.geometry.width > 0.0 && self.geometry.width.is_finite()) {
            return Err(config_err(format!("geometry.width must be positive, got {}", self.geometry.width)));
        }
        match (&self.flux.psi, &self.flux.psi_list) {
            (None, None) => return Err(config_err("flux needs psi or psi_list")),
            (Some(_), Some(_)) => return Err(config_err("flux takes psi or psi_list, not both")),
            _ => {}
        }
        if let Some(bad) = self.psi_values().iter().find(|p| !p.is_finite()) {
            return Err(config_err(format!("flux value {bad} is not finite")));
        }
        let p = &self.potential;
        match (&p.family, &p.csv) {
            (Some(_), Some(_)) => return Err(config_err("potential takes family or csv, not both")),
            (None, None) => return Err(config_err("potential needs family or csv")),
            (None, Some(path)) => {
                if !p.params.is_empty() {
                    return Err(config_err("potential.params only apply to a family"));
                }
                if !path.is_file() {
                    return Err(config_err(format!("potential csv {} does not exist", path.display())));
                }
            }
            (Some(_), None) => {}
        }
        let g = &self.grid;
        if !(g.x1_extent > 0.0 && g.x1_extent.is_finite()) {
            return Err(config_err(format!("grid.x1_extent must be positive, got {}", g.x1_extent)));
        }
        if g.x1_points < 2 || g.x2_points < 1 {
            return Err(config_err("grid needs x1_points >= 2 and x2_points >= 1"));
        }
        self.solver.validate().map_err(|e| config_err(format!("solver: {e}")))?;
        if let Some(ineq) = &self.inequalities {
            if let Some(p) = ineq.hardy_p.iter().find(|p| !(**p > 1.0)) {
                return Err(config_err(format!("inequalities.hardy_p must exceed 1, got {p}")));
            }
        }
        Ok(())
    }

    pub fn psi_values(&self) -> Vec<f64> {
        match (&self.flux.psi, &self.flux.psi_list) {
            (Some(p), _) => vec![*p],
            (None, Some(list)) => list.clone(),
            (None, None) => Vec::new(),
        }
    }

    pub fn geometry(&self) -> Result<StripGeometry> {
        StripGeometry::new(self.geometry.width)
    }

    pub fn potential(&self) -> Result<Potential2D> {
        match (&self.potential.family, &self.potential.csv) {
            (Some(name), None) => potential::builtin_family(name, &self.potential.params),
            (None, Some(path)) => Ok(Potential2D::Sampled(SampledPotential::from_csv(path)?)),
            _ => Err(config_err("potential needs exactly one of family or csv")),
        }
    }

    pub fn audit_options(&self) -> AuditOptions {
        AuditOptions {
            half_length: self.grid.x1_extent,
            x1_points: self.grid.x1_points,
            ..AuditOptions::default()
        }
    }

    pub fn inequalities(&self) -> InequalitySection {
        self.inequalities.clone().unwrap_or_default()
    }

    /// The fully resolved config as one line of JSON.
    pub fn resolved_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.resolved_json().as_bytes()))
    }
}
