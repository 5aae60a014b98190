//! Parameter sweeps written as CSV.
//!
//! ```json
//! { "parameter": "background.B[2]", "start": 0.0, "stop": 0.5, "steps": 11,
//!   "quantities": ["s_plus", "s_minus", "birefringence_gap"] }
//! ```
//!
//! Sweepable parameters: `background.E[i]`, `background.B[i]`, `direction[i]`,
//! `direction.azimuth`, `direction.polar` (radians, the other angle held) and
//! `model.b`. Values are in the units of the scenario file.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::config::ScenarioConfig;
use super::{CliError, SCHEMA_VERSION};
use crate::optics::{solve_characteristics, Characteristics, WaveSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    SPlus,
    SMinus,
    KappaPlus,
    KappaMinus,
    LambdaPlus,
    LambdaMinus,
    RankPlus,
    RankMinus,
    BirefringenceGap,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::SPlus,
        Quantity::SMinus,
        Quantity::KappaPlus,
        Quantity::KappaMinus,
        Quantity::LambdaPlus,
        Quantity::LambdaMinus,
        Quantity::RankPlus,
        Quantity::RankMinus,
        Quantity::BirefringenceGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::SPlus => "s_plus",
            Quantity::SMinus => "s_minus",
            Quantity::KappaPlus => "kappa_plus",
            Quantity::KappaMinus => "kappa_minus",
            Quantity::LambdaPlus => "lambda_plus",
            Quantity::LambdaMinus => "lambda_minus",
            Quantity::RankPlus => "rank_plus",
            Quantity::RankMinus => "rank_minus",
            Quantity::BirefringenceGap => "birefringence_gap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterPath {
    E(usize),
    B(usize),
    Direction(usize),
    Azimuth,
    Polar,
    FieldConstant,
}

impl FromStr for ParameterPath {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let indexed = |prefix: &str| -> Option<usize> {
            let rest = s.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']')?;
            rest.parse().ok().filter(|i| *i < 3)
        };
        let path = match s {
            "direction.azimuth" => ParameterPath::Azimuth,
            "direction.polar" => ParameterPath::Polar,
            "model.b" => ParameterPath::FieldConstant,
            _ => {
                if let Some(i) = indexed("background.E") {
                    ParameterPath::E(i)
                } else if let Some(i) = indexed("background.B") {
                    ParameterPath::B(i)
                } else if let Some(i) = indexed("direction") {
                    ParameterPath::Direction(i)
                } else {
                    return Err(CliError::Config(format!("parameter: unknown sweep parameter `{s}`")));
                }
            }
        };
        Ok(path)
    }
}

impl fmt::Display for ParameterPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParameterPath::E(i) => write!(f, "background.E[{i}]"),
            ParameterPath::B(i) => write!(f, "background.B[{i}]"),
            ParameterPath::Direction(i) => write!(f, "direction[{i}]"),
            ParameterPath::Azimuth => f.write_str("direction.azimuth"),
            ParameterPath::Polar => f.write_str("direction.polar"),
            ParameterPath::FieldConstant => f.write_str("model.b"),
        }
    }
}

impl ParameterPath {
    /// The scenario with this parameter set to `value`.
    pub fn apply(self, config: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut c = config.clone();
        let d = c.direction;
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let polar = (d[2] / r).clamp(-1.0, 1.0).acos();
        let azimuth = d[1].atan2(d[0]);
        let spherical = |polar: f64, azimuth: f64| {
            [polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos()]
        };
        match self {
            ParameterPath::E(i) => c.background.e[i] = value,
            ParameterPath::B(i) => c.background.b[i] = value,
            ParameterPath::Direction(i) => c.direction[i] = value,
            ParameterPath::Azimuth => c.direction = spherical(polar, value),
            ParameterPath::Polar => c.direction = spherical(value, azimuth),
            ParameterPath::FieldConstant => c.model.b = value,
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    #[serde(default = "all_quantities")]
    pub quantities: Vec<Quantity>,
}

fn all_quantities() -> Vec<Quantity> {
    Quantity::ALL.to_vec()
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: Self = serde_path_to_error::deserialize(de).map_err(super::located)?;
        spec.path()?;
        if spec.steps < 2 {
            return Err(CliError::Config(format!("steps: must be at least 2, got {}", spec.steps)));
        }
        if !(spec.start.is_finite() && spec.stop.is_finite()) {
            return Err(CliError::Config("start/stop: must be finite".into()));
        }
        if spec.quantities.is_empty() {
            return Err(CliError::Config("quantities: at least one quantity is required".into()));
        }
        Ok(spec)
    }

    pub fn path(&self) -> Result<ParameterPath, CliError> {
        self.parameter.parse()
    }

    /// Evenly spaced values; the last is exactly `stop`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| if i + 1 == n { self.stop } else { self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64 })
            .collect()
    }
}

struct Row {
    value: f64,
    cells: Vec<String>,
    diagnostics: Vec<String>,
}

fn evaluate_point(config: &ScenarioConfig, spec: &SweepSpec, path: ParameterPath, value: f64) -> Row {
    let point = path.apply(config, value);
    let solved: Result<Characteristics, String> = point
        .validate()
        .and_then(|_| point.background())
        .map_err(|e| e.to_string())
        .and_then(|bg| solve_characteristics(&bg, point.direction, &point.solver).map_err(|e| e.to_string()));
    let mut diagnostics = Vec::new();
    let c = match solved {
        Ok(c) => Some(c),
        Err(e) => {
            diagnostics.push(e);
            None
        }
    };
    if let Some(c) = &c {
        for (name, r) in [("plus", &c.plus), ("minus", &c.minus)] {
            match r {
                Err(e) => diagnostics.push(format!("{name}: {e}")),
                Ok(w) if w.roots.len() > 1 => diagnostics.push(format!("{name}: {} roots", w.roots.len())),
                Ok(_) => {}
            }
        }
    }
    let branch = |plus: bool| -> Option<&WaveSolution> {
        let c = c.as_ref()?;
        if plus { c.plus.as_ref().ok() } else { c.minus.as_ref().ok() }
    };
    let num = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let cells = spec
        .quantities
        .iter()
        .map(|q| match q {
            Quantity::SPlus => num(branch(true).map(|w| w.s_root)),
            Quantity::SMinus => num(branch(false).map(|w| w.s_root)),
            Quantity::KappaPlus => num(branch(true).and_then(|w| w.polarization.angle())),
            Quantity::KappaMinus => num(branch(false).and_then(|w| w.polarization.angle())),
            Quantity::LambdaPlus => num(branch(true).map(|w| w.lambda)),
            Quantity::LambdaMinus => num(branch(false).map(|w| w.lambda)),
            Quantity::RankPlus => branch(true).map(|w| w.rank_n.to_string()).unwrap_or_default(),
            Quantity::RankMinus => branch(false).map(|w| w.rank_n.to_string()).unwrap_or_default(),
            Quantity::BirefringenceGap => num(c.as_ref().and_then(|c| c.root_gap())),
        })
        .collect();
    for (plus, name) in [(true, "kappa_plus"), (false, "kappa_minus")] {
        let wanted = spec.quantities.contains(if plus { &Quantity::KappaPlus } else { &Quantity::KappaMinus });
        if wanted && branch(plus).is_some_and(|w| w.polarization.is_free()) {
            diagnostics.push(format!("{name} free"));
        }
    }
    Row { value, cells, diagnostics }
}

/// The sweep as CSV text: `#` metadata lines, a header, one row per value.
///
/// Points are evaluated in parallel; rows are always in input order.
pub fn sweep(config: &ScenarioConfig, spec: &SweepSpec) -> Result<String, CliError> {
    let path = spec.path()?;
    let rows: Vec<Row> = spec.values().par_iter().map(|&v| evaluate_point(config, spec, path, v)).collect();

    let mut out = String::new();
    out.push_str("# nlshock sweep\n");
    out.push_str(&format!("# schema_version: {SCHEMA_VERSION}\n"));
    out.push_str(&format!("# model: {}\n", config.model.name));
    out.push_str(&format!("# parameter: {path}\n"));
    out.push_str(&format!("# units: {}\n", if config.units.is_some() && config.background.units == super::config::FieldUnits::Si { "si" } else { "natural" }));

    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["parameter_value".to_string()];
    header.extend(spec.quantities.iter().map(|q| q.name().to_string()));
    header.push("diagnostics".into());
    w.write_record(&header).map_err(io)?;
    for row in rows {
        let mut record = vec![row.value.to_string()];
        record.extend(row.cells);
        record.push(row.diagnostics.join("; "));
        w.write_record(&record).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
    Ok(out)
}
