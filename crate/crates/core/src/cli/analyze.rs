use serde::Serialize;
use std::fmt::Write as _;

use super::config::{Format, ScenarioConfig};
use super::{matrix_rows, CliError, SCHEMA_VERSION};
use crate::optics::{
    born_polarization, polarization_tan, solve_characteristics, Branch, Characteristics, SolverSettings,
    WaveSolution, BIREFRINGENCE_GAP,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldReport {
    #[serde(rename = "E")]
    pub e: [f64; 3],
    #[serde(rename = "B")]
    pub b: [f64; 3],
    pub invariant_f: f64,
    pub invariant_g: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct BranchReport {
    pub branch: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_speed: Option<f64>,
    /// All bracketed roots; more than one is reported, the first is used.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_free: Option<bool>,
    /// `Y/X` from the general polarization condition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tan_2kappa: Option<f64>,
    /// `tan 2κ` from the squared contraction form, for `L(F)` models only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tan_2kappa_squared_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_parameters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optical_metric: Option<[[f64; 4]; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub model: &'static str,
    /// Background in natural units.
    pub field: FieldReport,
    pub direction: [f64; 3],
    pub solver: SolverSettings,
    pub branches: Vec<BranchReport>,
    pub root_gap: Option<f64>,
    pub birefringent: Option<bool>,
}

impl AnalysisReport {
    pub fn has_failures(&self) -> bool {
        self.branches.iter().any(|b| b.error.is_some())
    }
}

fn branch_report(config: &ScenarioConfig, branch: Branch, result: &crate::Result<WaveSolution>) -> BranchReport {
    let w = match result {
        Ok(w) => w,
        Err(e) => return BranchReport { branch: branch.name(), error: Some(e.to_string()), ..Default::default() },
    };
    let bg = config.background().ok();
    let squared = bg
        .as_ref()
        .filter(|bg| !bg.model.depends_on_g())
        .and_then(|bg| born_polarization(&bg.field, &w.tetrad).ok())
        .map(|k| (2.0 * k).tan());
    BranchReport {
        branch: branch.name(),
        error: None,
        s: Some(w.s_root),
        p: Some(w.scalar_p),
        phase_speed: Some(w.phase_speed),
        roots: if w.roots.len() > 1 { w.roots.clone() } else { Vec::new() },
        kappa: w.polarization.angle(),
        kappa_free: Some(w.polarization.is_free()),
        tan_2kappa: if w.polarization.is_free() { None } else { bg.as_ref().and_then(|bg| polarization_tan(bg, &w.tetrad)) },
        tan_2kappa_squared_form: squared,
        lambda: Some(w.lambda),
        rank_n: Some(w.rank_n),
        free_parameters: Some(w.free_parameters),
        kernel_residual: Some(w.kernel_residual),
        optical_metric: w.optical_metric.as_ref().map(matrix_rows),
    }
}

pub(crate) fn analyze_solved(config: &ScenarioConfig, c: &Characteristics) -> Result<AnalysisReport, CliError> {
    let field = config.field()?;
    let n = nalgebra::Vector3::from(config.direction).normalize();
    let root_gap = c.root_gap();
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        model: config.model.name.name(),
        field: FieldReport {
            e: field.e.into(),
            b: field.b.into(),
            invariant_f: field.invariant_f(),
            invariant_g: field.invariant_g(),
        },
        direction: n.into(),
        solver: config.solver,
        branches: Branch::BOTH.iter().map(|&b| branch_report(config, b, c.branch(b))).collect(),
        root_gap,
        birefringent: root_gap.map(|g| g > BIREFRINGENCE_GAP),
    })
}

pub fn analyze(config: &ScenarioConfig) -> Result<AnalysisReport, CliError> {
    let bg = config.background()?;
    let c = solve_characteristics(&bg, config.direction, &config.solver).map_err(|e| CliError::Solver(e.to_string()))?;
    analyze_solved(config, &c)
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn render(report: &AnalysisReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(report),
        Format::Human => Ok(render_human(report)),
    }
}

fn render_csv(report: &AnalysisReport) -> Result<String, CliError> {
    let mut out = format!("# nlshock analyze\n# schema_version: {}\n# model: {}\n", report.schema_version, report.model);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["branch", "s", "p", "phase_speed", "kappa", "lambda", "rank_n", "free_parameters", "diagnostics"])
        .map_err(io)?;
    for b in &report.branches {
        let mut diag = b.error.clone().unwrap_or_default();
        if b.kappa_free == Some(true) {
            diag = "kappa free".into();
        }
        w.write_record([
            b.branch.to_string(),
            cell(b.s),
            cell(b.p),
            cell(b.phase_speed),
            cell(b.kappa),
            cell(b.lambda),
            b.rank_n.map(|r| r.to_string()).unwrap_or_default(),
            b.free_parameters.map(|r| r.to_string()).unwrap_or_default(),
            diag,
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
    Ok(out)
}

fn render_human(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model       {}", r.model);
    let _ = writeln!(s, "field       E = {:?}  B = {:?}  (natural units)", r.field.e, r.field.b);
    let _ = writeln!(s, "invariants  F = {}  G = {}", r.field.invariant_f, r.field.invariant_g);
    let _ = writeln!(s, "direction   {:?}", r.direction);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<7} {:>20} {:>22} {:>20} {:>22} {:>22} {:>6} {:>6}",
        "branch", "s", "p", "phase speed", "kappa", "lambda (J=1)", "rank", "free"
    );
    for b in &r.branches {
        if let Some(e) = &b.error {
            let _ = writeln!(s, "{:<7} error: {e}", b.branch);
            continue;
        }
        let kappa = if b.kappa_free == Some(true) { "free".to_string() } else { cell(b.kappa) };
        let _ = writeln!(
            s,
            "{:<7} {:>20} {:>22} {:>20} {:>22} {:>22} {:>6} {:>6}",
            b.branch,
            cell(b.s),
            cell(b.p),
            cell(b.phase_speed),
            kappa,
            cell(b.lambda),
            b.rank_n.unwrap_or(0),
            b.free_parameters.unwrap_or(0)
        );
    }
    for b in &r.branches {
        if b.roots.len() > 1 {
            let _ = writeln!(s, "note: {} branch has several roots {:?}; the first is used", b.branch, b.roots);
        }
        if let (Some(t), Some(q)) = (b.tan_2kappa, b.tan_2kappa_squared_form) {
            let _ = writeln!(s, "{} branch tan 2kappa: general {t}, squared form {q}", b.branch);
        }
    }
    for b in &r.branches {
        if let Some(g) = &b.optical_metric {
            let _ = writeln!(s, "\noptical metric ({} branch):", b.branch);
            for row in g {
                let _ = writeln!(s, "  {:>22} {:>22} {:>22} {:>22}", row[0], row[1], row[2], row[3]);
            }
        }
    }
    let _ = writeln!(s);
    match (r.root_gap, r.birefringent) {
        (Some(gap), Some(true)) => {
            let _ = writeln!(s, "birefringent: yes (root gap {gap})");
        }
        (Some(gap), _) => {
            let _ = writeln!(s, "birefringent: no (root gap {gap})");
        }
        _ => {
            let _ = writeln!(s, "birefringent: unknown (a branch failed)");
        }
    }
    s
}
