//! Scenario files.
//!
//! A scenario is one JSON document:
//!
//! ```json
//! {
//!   "model": { "name": "born", "b": 1.0 },
//!   "background": { "units": "natural", "E": [0.0, 0.0, 0.3], "B": [0.0, 0.2, 0.1] },
//!   "direction": [1.0, 0.0, 0.0],
//!   "solver": { "s_range": [0.05, 3.0], "grid_points": 2000 },
//!   "output": { "format": "human" },
//!   "seed": 7
//! }
//! ```
//!
//! With `"units": "si"` the fields are read in V/m and T, `model.b` is the
//! field-strength constant in tesla, and a top-level `"units": {"c": ..., "mu0": ...}`
//! block is required.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use super::CliError;
use crate::lagrangian::{CustomLagrangian, LagrangianModel, ModelKind};
use crate::minkowski::{si_to_natural, FieldTensor3P, UnitSystem};
use crate::optics::{Background, SolverSettings};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelConfig,
    pub background: BackgroundConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<UnitsConfig>,
    pub direction: [f64; 3],
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub output: OutputConfig,
    /// Seed for the canned scenarios of `verify`.
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    7
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: ModelKind,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomLagrangian>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldUnits {
    #[default]
    Natural,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackgroundConfig {
    #[serde(default)]
    pub units: FieldUnits,
    #[serde(rename = "E")]
    pub e: [f64; 3],
    #[serde(rename = "B")]
    pub b: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsConfig {
    pub c: f64,
    pub mu0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(super::located)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |path: &str, msg: String| Err(CliError::Config(format!("{path}: {msg}")));
        if !(self.model.b > 0.0 && self.model.b.is_finite()) {
            return bad("model.b", format!("must be positive, got {}", self.model.b));
        }
        match (self.model.name, &self.model.custom) {
            (ModelKind::PlebanskiCustom, None) => {
                return bad("model.custom", "required for plebanski_custom".into());
            }
            (ModelKind::PlebanskiCustom, Some(_)) | (_, None) => {}
            (_, Some(_)) => return bad("model.custom", "only allowed for plebanski_custom".into()),
        }
        let d = self.direction;
        if !d.iter().all(|x| x.is_finite()) || d.iter().all(|x| *x == 0.0) {
            return bad("direction", "must be a finite nonzero vector".into());
        }
        if !self.background.e.iter().chain(self.background.b.iter()).all(|x| x.is_finite()) {
            return bad("background", "field components must be finite".into());
        }
        if self.background.units == FieldUnits::Si {
            let Some(u) = self.units else {
                return bad("units", "SI fields require explicit c and mu0".into());
            };
            if let Err(e) = self.unit_system(u).validate() {
                return bad("units", e.to_string());
            }
        }
        if let Err(e) = self.solver.validate() {
            return bad("solver", e.to_string());
        }
        Ok(())
    }

    fn unit_system(&self, u: UnitsConfig) -> UnitSystem {
        UnitSystem { c: u.c, mu0: u.mu0, b: self.model.b }
    }

    pub fn model(&self) -> LagrangianModel {
        match self.model.name {
            ModelKind::Maxwell => LagrangianModel::Maxwell,
            ModelKind::Born => LagrangianModel::Born,
            ModelKind::BornInfeld => LagrangianModel::BornInfeld,
            ModelKind::PlebanskiCustom => {
                LagrangianModel::Custom(self.model.custom.clone().expect("validated custom Lagrangian"))
            }
        }
    }

    /// Background field in natural units.
    pub fn field(&self) -> Result<FieldTensor3P, CliError> {
        let raw = FieldTensor3P::new(self.background.e, self.background.b);
        match (self.background.units, self.units) {
            (FieldUnits::Natural, _) => Ok(raw),
            (FieldUnits::Si, Some(u)) => {
                si_to_natural(&raw, &self.unit_system(u)).map_err(|e| CliError::Config(format!("units: {e}")))
            }
            (FieldUnits::Si, None) => Err(CliError::Config("units: SI fields require explicit c and mu0".into())),
        }
    }

    pub fn background(&self) -> Result<Background, CliError> {
        Background::new(self.model(), self.field()?).map_err(|e| CliError::Solver(e.to_string()))
    }
}
