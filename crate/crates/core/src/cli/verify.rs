//! Invariant checks on the configured scenario and on a few seeded random ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;

use super::config::ScenarioConfig;
use super::{CliError, SCHEMA_VERSION};
use crate::jump::{born_identities, spectral_norm};
use crate::lagrangian::derivative_deviation;
use crate::minkowski::FieldTensor3P;
use crate::optics::{solve_characteristics, Background, Polarization, SolverSettings, WaveSolution};
use crate::shockseries::step_derivative_check;
use crate::tetrad::{metric_decomposition, tetrad_deviations};

/// Random scenarios added to the configured one.
pub const CANNED_SCENARIOS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// Worst value over all scenarios and branches.
    pub measured: f64,
    pub tolerance: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub scenarios: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotApplicable => "N/A ",
            };
            let _ = writeln!(s, "{status}  {:<34} measured {:<24e} tolerance {:e}", c.name, c.measured, c.tolerance);
        }
        let _ = writeln!(
            s,
            "{} of {} checks passed over {} scenarios",
            self.checks.iter().filter(|c| c.status == Status::Pass).count(),
            self.checks.iter().filter(|c| c.status != Status::NotApplicable).count(),
            self.scenarios
        );
        s
    }
}

/// Nonzero, non-parallel `E` and `B` with magnitudes in `[0.1, 0.5]`, away from null fields.
pub fn random_generic_field<R: Rng>(rng: &mut R) -> FieldTensor3P {
    loop {
        let mut v = || {
            let dir = nalgebra::Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let mag = rng.gen_range(0.1..0.5);
            (dir, mag)
        };
        let ((e, me), (b, mb)) = (v(), v());
        if e.norm() < 0.1 || b.norm() < 0.1 {
            continue;
        }
        let (e, b) = (e.normalize() * me, b.normalize() * mb);
        if e.cross(&b).norm() < 0.05 * me * mb {
            continue;
        }
        let f = FieldTensor3P { e, b };
        if f.invariant_f().powi(2) + f.invariant_g().powi(2) > 1e-4 {
            return f;
        }
    }
}

pub fn random_direction<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.2 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

#[derive(Default)]
struct Worst {
    tetrad: f64,
    metric: f64,
    symmetry: f64,
    annihilation: f64,
    born: f64,
    kernel: f64,
    rank_mismatches: f64,
    null: f64,
    rescaling: f64,
    derivatives: f64,
    subluminal: f64,
    root_failures: f64,
}

fn check_solution(w: &WaveSolution, bg: &Background, worst: &mut Worst) {
    let t = &w.tetrad;
    worst.tetrad = worst.tetrad.max(tetrad_deviations(t).iter().map(|(_, d)| *d).fold(0.0, f64::max));
    match metric_decomposition(t) {
        Ok(r) => worst.metric = worst.metric.max(r.max_deviation),
        Err(_) => worst.metric = f64::INFINITY,
    }
    let bb = &w.data.bb;
    let bb_scale = bb.amax().max(f64::MIN_POSITIVE);
    worst.symmetry = worst.symmetry.max((bb - bb.transpose()).amax() / bb_scale);
    let p = t.p.components;
    let n_scale = spectral_norm(&w.data.n).max(f64::MIN_POSITIVE) * p.norm();
    let ann = (w.data.n * p).amax().max((p.transpose() * w.data.n).amax());
    worst.annihilation = worst.annihilation.max(ann / n_scale);
    if !bg.model.depends_on_g() {
        worst.born = worst.born.max(born_identities(&w.data.scalars).into_iter().fold(0.0, f64::max));
    }
    worst.kernel = worst.kernel.max(w.kernel_residual);
    let expected_rank = match w.polarization {
        Polarization::Free => 1,
        Polarization::Angle(_) => 2,
    };
    if w.rank_n != expected_rank {
        worst.rank_mismatches += 1.0;
    }
    if let Some(g) = &w.optical_metric {
        let v = (p.transpose() * g * p)[0].abs() / (g.amax() * p.norm_squared());
        worst.null = worst.null.max(v);
    }
    worst.subluminal = worst.subluminal.max(w.phase_speed - 1.0);
}

fn check_scenario(bg: &Background, direction: [f64; 3], settings: &SolverSettings, worst: &mut Worst) {
    let c = match solve_characteristics(bg, direction, settings) {
        Ok(c) => c,
        Err(_) => {
            worst.root_failures += 2.0;
            return;
        }
    };
    for r in [&c.plus, &c.minus] {
        match r {
            Ok(w) => check_solution(w, bg, worst),
            Err(_) => worst.root_failures += 1.0,
        }
    }
    for factor in [1e-3, 1e3] {
        match solve_characteristics(&bg.scaled(factor), direction, settings) {
            Ok(other) => {
                for (a, b) in [(&c.plus, &other.plus), (&c.minus, &other.minus)] {
                    if let (Ok(a), Ok(b)) = (a, b) {
                        worst.rescaling = worst.rescaling.max((a.s_root - b.s_root).abs());
                    }
                }
            }
            Err(_) => worst.rescaling = f64::INFINITY,
        }
    }
    let (f, g) = (bg.field.invariant_f(), bg.field.invariant_g());
    match derivative_deviation(&bg.model, f, g, 1e-5) {
        Ok(d) => worst.derivatives = worst.derivatives.max(d),
        Err(_) => worst.derivatives = f64::INFINITY,
    }
}

pub fn verify(config: &ScenarioConfig) -> Result<VerifyReport, CliError> {
    let mut worst = Worst::default();
    let bg = config.background()?;
    check_scenario(&bg, config.direction, &config.solver, &mut worst);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..CANNED_SCENARIOS {
        let field = random_generic_field(&mut rng);
        let direction = random_direction(&mut rng);
        let bg = Background::new(config.model(), field).map_err(|e| CliError::Solver(e.to_string()))?;
        check_scenario(&bg, direction, &config.solver, &mut worst);
    }

    let step = [(2, 1.0, 1e-5), (5, 2.0, 1e-4), (3, -0.7, 1e-4), (4, 0.8, 1e-4)]
        .iter()
        .map(|&(m, s, h)| step_derivative_check(m, s, h).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);

    let check = |name, measured: f64, tolerance: f64| Check {
        name,
        measured,
        tolerance,
        status: if measured <= tolerance { Status::Pass } else { Status::Fail },
    };
    let born = if config.model().depends_on_g() {
        Check { name: "Born identities", measured: 0.0, tolerance: 1e-10, status: Status::NotApplicable }
    } else {
        check("Born identities", worst.born, 1e-10)
    };
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        scenarios: 1 + CANNED_SCENARIOS,
        checks: vec![
            check("characteristic roots found", worst.root_failures, 0.0),
            check("tetrad conditions", worst.tetrad, 1e-12),
            check("metric reconstruction", worst.metric, 1e-10),
            check("contracted B^b symmetry", worst.symmetry, 1e-12),
            check("normal annihilation of N", worst.annihilation, 1e-12),
            born,
            check("kernel residual |N phi'|", worst.kernel, 1e-9),
            check("rank of N vs free parameters", worst.rank_mismatches, 0.0),
            check("optical-metric null condition", worst.null, 1e-9),
            check("phase speed <= 1", worst.subluminal, 1e-9),
            check("rescaling invariance of roots", worst.rescaling, 1e-9),
            check("Lagrangian derivatives vs FD", worst.derivatives, 1e-6),
            check("step-function chain rule", step, 1e-6),
        ],
    })
}
