//! Characteristic analysis: front speeds, optical metrics, polarization and
//! the temporal amplitude of the first discontinuous coefficient.
//!
//! For a front `p_α = (1, s n̂)` the ω-component of the jump conditions is
//!
//! ```text
//! 0 = -B^a K p + (K B_ω + BB_ωd) + e^{2iκ} (X - iY)
//! ```
//!
//! with `K = B_ab_d` and `X`, `Y` from [`TetradScalars`]. Eliminating κ gives
//! one real equation per sign of the modulus,
//!
//! ```text
//! r_±(s) = -B^a K p + (K B_ω + BB_ωd) ± √(X² + Y²)
//! ```
//!
//! which is solved for `s` by grid bracketing and bisection. The branch sign
//! fixes the phase: `2κ = atan2(Y, X)` on the plus branch and
//! `2κ = atan2(Y, X) + π` on the minus branch.

use nalgebra::{Complex, Matrix4, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::jump::{born_identities, numerical_rank, spectral_norm, BackgroundData, TetradScalars};
use crate::lagrangian::{BackgroundTensorCoefficients, LagrangianModel};
use crate::minkowski::{metric, FieldTensor3P};
use crate::tetrad::{assemble_phi, build_tetrad, JumpParams, Tetrad};

/// Threshold on the Born identities for emitting the general optical metric.
pub const BORN_IDENTITY_TOL: f64 = 1e-10;

/// Root gap above which a background counts as birefringent.
pub const BIREFRINGENCE_GAP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// κ in `(-π/2, π/2]`.
    Angle(f64),
    /// The polarization condition is identically satisfied; κ is a free parameter.
    Free,
}

impl Polarization {
    pub fn angle(self) -> Option<f64> {
        match self {
            Polarization::Angle(k) => Some(k),
            Polarization::Free => None,
        }
    }

    pub fn is_free(self) -> bool {
        matches!(self, Polarization::Free)
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::Angle(k) => write!(f, "{k}"),
            Polarization::Free => f.write_str("free"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    /// Search interval for `s`; both ends positive.
    pub s_range: [f64; 2],
    pub grid_points: usize,
    /// Bisection stops once the bracket is narrower than this.
    pub bisection_tol: f64,
    /// Relative singular-value cutoff for the rank of `N`.
    pub rank_tol: f64,
    /// Relative cutoff below which the polarization condition counts as vacuous.
    pub free_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { s_range: [0.05, 3.0], grid_points: 2000, bisection_tol: 1e-12, rank_tol: 1e-9, free_tol: 1e-10 }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.s_range;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!("s_range must satisfy 0 < lo < hi, got [{lo}, {hi}]")));
        }
        if self.grid_points < 2 {
            return Err(Error::InvalidArgument("grid_points must be at least 2".into()));
        }
        for (name, v) in [("bisection_tol", self.bisection_tol), ("rank_tol", self.rank_tol), ("free_tol", self.free_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// A model evaluated on a constant background field.
#[derive(Debug, Clone, PartialEq)]
pub struct Background {
    pub model: LagrangianModel,
    pub field: FieldTensor3P,
    pub coeffs: BackgroundTensorCoefficients,
}

impl Background {
    pub fn new(model: LagrangianModel, field: FieldTensor3P) -> Result<Self> {
        let coeffs = model.background_tensors(&field)?;
        Ok(Self { model, field, coeffs })
    }

    /// Same background with `(B^a, B^b)` multiplied by `factor`; the characteristics are unchanged.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { coeffs: self.coeffs.scaled(factor), ..self.clone() }
    }

    pub fn data(&self, t: &Tetrad) -> BackgroundData {
        BackgroundData::from_coefficients(&self.coeffs, &self.field, t)
    }

    /// `(|B^a| + max|B^b|)²`, the natural size of `X` and `Y`.
    fn scale(&self, data: &BackgroundData) -> f64 {
        (data.ba.abs() + data.bb.amax()).powi(2)
    }
}

fn residual_from(data: &BackgroundData, t: &Tetrad, branch: Branch) -> f64 {
    let s = &data.scalars;
    -data.ba * s.b_ab_d * t.scalar_p + s.isotropic() + branch.sign() * s.x().hypot(s.y())
}

/// `r_±(s)` for the front `(1, s n̂)`.
pub fn characteristic_residual(bg: &Background, direction: [f64; 3], s: f64, branch: Branch) -> Result<f64> {
    let t = build_tetrad(direction, s)?;
    Ok(residual_from(&bg.data(&t), &t, branch))
}

fn polarization_from(bg: &Background, data: &BackgroundData, branch: Branch, free_tol: f64) -> Polarization {
    let (x, y) = (data.scalars.x(), data.scalars.y());
    if x.hypot(y) <= free_tol * bg.scale(data) {
        return Polarization::Free;
    }
    let mut kappa = 0.5 * y.atan2(x);
    if branch == Branch::Minus {
        kappa += FRAC_PI_2;
    }
    Polarization::Angle(wrap_half_pi(kappa))
}

/// Reduces an angle modulo π into `(-π/2, π/2]`.
pub fn wrap_half_pi(kappa: f64) -> f64 {
    let mut k = kappa.rem_euclid(PI);
    if k > FRAC_PI_2 {
        k -= PI;
    }
    k + 0.0
}

/// κ from `tan 2κ = Y/X` on the given branch, or [`Polarization::Free`] when
/// `√(X² + Y²) ≤ 1e-10 (|B^a| + max|B^b|)²`.
pub fn polarization_angle(bg: &Background, t: &Tetrad, branch: Branch) -> Polarization {
    polarization_from(bg, &bg.data(t), branch, SolverSettings::default().free_tol)
}

/// `tan 2κ` from the pipeline scalars, `Y/X`; `None` when `X = 0`.
pub fn polarization_tan(bg: &Background, t: &Tetrad) -> Option<f64> {
    let s: TetradScalars = bg.data(t).scalars;
    (s.x() != 0.0).then(|| s.y() / s.x())
}

/// κ from the squared contraction form valid for `L(F)` theories,
/// `tan 2κ = (Re(ω)_α p_β F^{αβ} / Im(ω)_γ p_δ F^{γδ})²`.
///
/// A vanishing denominator with a nonzero numerator gives the limit `π/4`;
/// both vanishing is [`Error::IndeterminatePolarization`].
pub fn born_polarization(field: &FieldTensor3P, t: &Tetrad) -> Result<f64> {
    let v = field.contract_first(&t.p);
    // ω is covariant and v contravariant, so no metric is needed.
    let a = t.omega.re().components.dot(&v);
    let b = t.omega.im().components.dot(&v);
    let tiny = 1e-14 * v.amax();
    match (a.abs() <= tiny, b.abs() <= tiny) {
        (true, true) => Err(Error::IndeterminatePolarization),
        (false, true) => Ok(FRAC_PI_4),
        _ => Ok(0.5 * ((a / b).powi(2)).atan()),
    }
}

/// The closed form for a front along x̂ in a field with `E_x = B_x = 0`:
/// `tan 2κ = ((E_z + s B_y) / (E_y + s B_z))²`.
pub fn example_polarization_tan(e: [f64; 3], b: [f64; 3], s: f64) -> Result<f64> {
    let den = e[1] + s * b[2];
    if den == 0.0 {
        return Err(Error::VanishingDenominator("E_y + s B_z"));
    }
    Ok(((e[2] + s * b[1]) / den).powi(2))
}

/// `λ = √J (e^{iκ} ω B d + e^{-iκ} ω̄ B d) / (B^a (d² - p) - d B d)`.
pub fn temporal_lambda(bg: &Background, t: &Tetrad, j: f64, kappa: f64) -> Result<f64> {
    lambda_from(&bg.data(t), j, kappa)
}

fn lambda_from(data: &BackgroundData, j: f64, kappa: f64) -> Result<f64> {
    if !(j >= 0.0) {
        return Err(Error::InvalidArgument(format!("shock excitation must be ≥ 0, got {j}")));
    }
    let k = data.scalars.b_ab_d;
    if k == 0.0 {
        return Err(Error::VanishingDenominator("B^a (d² - p) - d B d"));
    }
    let num = Complex::from_polar(1.0, kappa) * data.scalars.omega_d;
    Ok(2.0 * j.sqrt() * num.re / k)
}

/// `g^{αβ} = (1 + F) η^{αβ} + F^{αγ} η_{γδ} F^{δβ}`, the second Born optical metric.
pub fn optical_metric_born2(field: &FieldTensor3P) -> Result<Matrix4<f64>> {
    let f = field.invariant_f();
    if !(1.0 + f > 0.0) {
        return Err(Error::OutOfDomain { model: "born", f, g: field.invariant_g(), detail: "requires 1 + F > 0" });
    }
    Ok(closed_form_metric(field))
}

/// Born-Infeld optical metric; both branches share it, and it has the same form as the Born one.
pub fn optical_metric_bi(field: &FieldTensor3P) -> Result<Matrix4<f64>> {
    let (f, g) = (field.invariant_f(), field.invariant_g());
    if !(1.0 + f - g * g > 0.0) {
        return Err(Error::OutOfDomain { model: "born_infeld", f, g, detail: "requires 1 + F - G² > 0" });
    }
    Ok(closed_form_metric(field))
}

fn closed_form_metric(field: &FieldTensor3P) -> Matrix4<f64> {
    let eta = metric();
    let up = field.contravariant();
    (1.0 + field.invariant_f()) * eta + up * eta * up
}

/// `B^a η + B^{γα}{}_γ{}^β`, the optical metric of the birefringent branch of an `L(F)` theory.
pub fn general_optical_metric(coeffs: &BackgroundTensorCoefficients, field: &FieldTensor3P) -> Matrix4<f64> {
    coeffs.c_a * metric() + coeffs.trace_13(field)
}

/// Positive `s` with `g^{αβ} p_α p_β = 0` for `p_α = (1, s n̂)`, ascending.
pub fn null_condition_roots(g: &Matrix4<f64>, direction: [f64; 3]) -> Result<Vec<f64>> {
    let n = unit(direction)?;
    let c = g[(0, 0)];
    let b = 2.0 * (0..3).map(|i| g[(0, i + 1)] * n[i]).sum::<f64>();
    let a = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| g[(i + 1, j + 1)] * n[i] * n[j]).sum::<f64>();
    let mut roots = Vec::new();
    if a == 0.0 {
        if b != 0.0 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    roots.retain(|s| *s > 0.0);
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

fn unit(direction: [f64; 3]) -> Result<Vector3<f64>> {
    let n = Vector3::from(direction);
    let len = n.norm();
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::ZeroDirection);
    }
    Ok(n / len)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveSolution {
    pub branch: Branch,
    pub s_root: f64,
    /// `1 - s²`.
    pub scalar_p: f64,
    /// `1/s`.
    pub phase_speed: f64,
    /// Every bracketed root of the branch, ascending; `s_root` is the first.
    pub roots: Vec<f64>,
    pub optical_metric: Option<Matrix4<f64>>,
    pub polarization: Polarization,
    /// λ at `J = 1`, using `κ = 0` when the polarization is free.
    pub lambda: f64,
    pub rank_n: usize,
    /// Dimension of `ker N` minus the gauge direction.
    pub free_parameters: usize,
    /// `‖N φ'‖ / (‖N‖ ‖φ'‖)` for the assembled `J = 1` coefficient.
    pub kernel_residual: f64,
    pub tetrad: Tetrad,
    pub data: BackgroundData,
}

impl WaveSolution {
    /// κ used for the reported λ and φ'.
    pub fn kappa_or_zero(&self) -> f64 {
        self.polarization.angle().unwrap_or(0.0)
    }

    /// `φ'` for the given excitation at this root.
    pub fn phi(&self, j: f64) -> Result<crate::minkowski::FourVector> {
        let kappa = self.kappa_or_zero();
        let lambda = lambda_from(&self.data, j, kappa)?;
        assemble_phi(&self.tetrad, &JumpParams { excitation: j, kappa, lambda, normal_amplitude: 0.0 }, true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Characteristics {
    pub plus: Result<WaveSolution>,
    pub minus: Result<WaveSolution>,
}

impl Characteristics {
    pub fn branch(&self, b: Branch) -> &Result<WaveSolution> {
        match b {
            Branch::Plus => &self.plus,
            Branch::Minus => &self.minus,
        }
    }

    /// `|s₊ - s₋|` when both branches have a root.
    pub fn root_gap(&self) -> Option<f64> {
        match (&self.plus, &self.minus) {
            (Ok(a), Ok(b)) => Some((a.s_root - b.s_root).abs()),
            _ => None,
        }
    }
}

/// Sign-change brackets of `f` on the grid, refined by bisection.
fn bracket_roots(f: impl Fn(f64) -> Result<f64>, settings: &SolverSettings) -> Result<Vec<f64>> {
    let [lo, hi] = settings.s_range;
    let n = settings.grid_points;
    let step = (hi - lo) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| if i + 1 == n { hi } else { lo + i as f64 * step }).collect();
    let values = grid.iter().map(|&s| f(s)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for i in 0..n {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < n && values[i] * values[i + 1] < 0.0 {
            let (mut a, mut b, mut fa) = (grid[i], grid[i + 1], values[i]);
            for _ in 0..200 {
                if b - a <= settings.bisection_tol {
                    break;
                }
                let m = 0.5 * (a + b);
                let fm = f(m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }
    Ok(roots)
}

fn optical_metric_for(bg: &Background, branch: Branch, scalars: &TetradScalars) -> Option<Matrix4<f64>> {
    if bg.coeffs.is_pure_f() && born_identities(scalars).iter().all(|r| *r <= BORN_IDENTITY_TOL) {
        if branch.sign() * bg.coeffs.c_ff <= 0.0 {
            return Some(metric());
        }
        return Some(general_optical_metric(&bg.coeffs, &bg.field));
    }
    if matches!(bg.model, LagrangianModel::BornInfeld) {
        return optical_metric_bi(&bg.field).ok();
    }
    None
}

fn solve_branch(bg: &Background, direction: [f64; 3], branch: Branch, settings: &SolverSettings) -> Result<WaveSolution> {
    let roots = bracket_roots(|s| characteristic_residual(bg, direction, s, branch), settings)?;
    let s_root = *roots
        .first()
        .ok_or(Error::NoRoot { branch: branch.name(), lo: settings.s_range[0], hi: settings.s_range[1] })?;
    let tetrad = build_tetrad(direction, s_root)?;
    let data = bg.data(&tetrad);
    let polarization = polarization_from(bg, &data, branch, settings.free_tol);
    let kappa = polarization.angle().unwrap_or(0.0);
    let lambda = lambda_from(&data, 1.0, kappa)?;
    let phi = assemble_phi(&tetrad, &JumpParams { excitation: 1.0, kappa, lambda, normal_amplitude: 0.0 }, true)?;
    let norm_n = spectral_norm(&data.n);
    let kernel_residual = if norm_n == 0.0 {
        0.0
    } else {
        (data.n * phi.components).norm() / (norm_n * phi.components.norm())
    };
    let rank_n = numerical_rank(&data.n, settings.rank_tol);
    Ok(WaveSolution {
        branch,
        s_root,
        scalar_p: tetrad.scalar_p,
        phase_speed: 1.0 / s_root,
        roots,
        optical_metric: optical_metric_for(bg, branch, &data.scalars),
        polarization,
        lambda,
        rank_n,
        free_parameters: 3usize.saturating_sub(rank_n),
        kernel_residual,
        tetrad,
        data,
    })
}

/// Both branches of the characteristic equation along `direction`.
pub fn solve_characteristics(bg: &Background, direction: [f64; 3], settings: &SolverSettings) -> Result<Characteristics> {
    settings.validate()?;
    unit(direction)?;
    Ok(Characteristics {
        plus: solve_branch(bg, direction, Branch::Plus, settings),
        minus: solve_branch(bg, direction, Branch::Minus, settings),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionBirefringence {
    pub direction: [f64; 3],
    pub s_plus: f64,
    pub s_minus: f64,
    pub root_gap: f64,
    /// `|κ₊ - κ₋|` when both are determined.
    pub kappa_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirefringenceReport {
    pub directions: Vec<DirectionBirefringence>,
    pub birefringent: bool,
}

/// Root and polarization gaps per direction, evaluated in parallel and reported in input order.
pub fn detect_birefringence(
    bg: &Background,
    directions: &[[f64; 3]],
    settings: &SolverSettings,
) -> Result<BirefringenceReport> {
    let entries = directions
        .par_iter()
        .map(|&direction| {
            let c = solve_characteristics(bg, direction, settings)?;
            let plus = c.plus?;
            let minus = c.minus?;
            let kappa_gap = match (plus.polarization, minus.polarization) {
                (Polarization::Angle(a), Polarization::Angle(b)) => Some((a - b).abs()),
                _ => None,
            };
            Ok(DirectionBirefringence {
                direction,
                s_plus: plus.s_root,
                s_minus: minus.s_root,
                root_gap: (plus.s_root - minus.s_root).abs(),
                kappa_gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let birefringent = entries.iter().any(|e| e.root_gap > BIREFRINGENCE_GAP);
    Ok(BirefringenceReport { directions: entries, birefringent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tetrad::gauge_rotate;

    fn crossed() -> FieldTensor3P {
        FieldTensor3P::new([0.0, 0.0, 0.3], [0.0, 0.2, 0.1])
    }

    fn generic() -> FieldTensor3P {
        FieldTensor3P::new([0.1, -0.3, 0.25], [0.2, 0.15, -0.1])
    }

    fn solve(model: LagrangianModel, field: FieldTensor3P, dir: [f64; 3]) -> Characteristics {
        let bg = Background::new(model, field).unwrap();
        solve_characteristics(&bg, dir, &SolverSettings::default()).unwrap()
    }

    /// Null root of `(1 + F)η + FηF` by hand, for `n̂ = x̂` and `E_x = B_x = 0`.
    fn born2_root_x(e: [f64; 3], b: [f64; 3]) -> f64 {
        let field = FieldTensor3P::new(e, b);
        let g = optical_metric_born2(&field).unwrap();
        let (a, bq, c) = (g[(1, 1)], 2.0 * g[(0, 1)], g[(0, 0)]);
        let disc = (bq * bq - 4.0 * a * c).sqrt();
        [(-bq + disc) / (2.0 * a), (-bq - disc) / (2.0 * a)].into_iter().filter(|s| *s > 0.0).fold(f64::NAN, f64::min)
    }

    #[test]
    fn vacuum_is_lightlike() {
        for model in [LagrangianModel::Maxwell, LagrangianModel::Born, LagrangianModel::BornInfeld] {
            let bg = Background::new(model.clone(), FieldTensor3P::zero()).unwrap();
            assert_eq!(characteristic_residual(&bg, [0.0, 1.0, 0.0], 1.0, Branch::Plus).unwrap(), 0.0);
            let c = solve(model, FieldTensor3P::zero(), [0.3, 0.4, -0.2]);
            for b in Branch::BOTH {
                let w = c.branch(b).as_ref().unwrap();
                assert!((w.s_root - 1.0).abs() < 1e-10);
                assert_eq!(w.lambda, 0.0);
                assert!(w.polarization.is_free());
            }
        }
    }

    #[test]
    fn born_branch_residuals_at_light_cone() {
        let bg = Background::new(LagrangianModel::Born, crossed()).unwrap();
        let plus = characteristic_residual(&bg, [1.0, 0.0, 0.0], 1.0, Branch::Plus).unwrap();
        let minus = characteristic_residual(&bg, [1.0, 0.0, 0.0], 1.0, Branch::Minus).unwrap();
        assert!(plus.abs() < 1e-15, "{plus}");
        assert!(minus.abs() > 1e-3, "{minus}");
    }

    #[test]
    fn born_example_roots() {
        let c = solve(LagrangianModel::Born, crossed(), [1.0, 0.0, 0.0]);
        let plus = c.plus.unwrap();
        let minus = c.minus.unwrap();
        assert!((plus.s_root - 1.0).abs() < 1e-9);
        let oracle = born2_root_x([0.0, 0.0, 0.3], [0.0, 0.2, 0.1]);
        assert!((minus.s_root - oracle).abs() < 1e-9, "{} vs {oracle}", minus.s_root);
        assert!(minus.s_root > 1.0, "subluminal front");
        assert_eq!(plus.rank_n, 2);
        assert_eq!(minus.rank_n, 2);
        assert_eq!(minus.free_parameters, 1);
        assert!(plus.kernel_residual < 1e-12 && minus.kernel_residual < 1e-12);
        assert_eq!(plus.optical_metric, Some(metric()));
        let g = minus.optical_metric.unwrap();
        let p = minus.tetrad.p.components;
        assert!((p.transpose() * g * p)[0].abs() < 1e-9);
    }

    #[test]
    fn bi_roots_coincide() {
        let c = solve(LagrangianModel::BornInfeld, generic(), [0.3, -0.5, 0.8]);
        let (plus, minus) = (c.plus.unwrap(), c.minus.unwrap());
        assert!((plus.s_root - minus.s_root).abs() < 1e-9);
        assert_eq!(plus.rank_n, 1);
        assert_eq!(plus.free_parameters, 2);
        assert!(plus.polarization.is_free() && minus.polarization.is_free());
        let g = optical_metric_bi(&generic()).unwrap();
        let roots = null_condition_roots(&g, [0.3, -0.5, 0.8]).unwrap();
        assert!(roots.iter().any(|r| (r - plus.s_root).abs() < 1e-9), "{roots:?} vs {}", plus.s_root);
        // Any κ lies in the kernel once λ follows it.
        for k in 0..6 {
            let kappa = 0.5 * k as f64;
            let lambda = lambda_from(&plus.data, 1.0, kappa).unwrap();
            let phi = assemble_phi(&plus.tetrad, &JumpParams { excitation: 1.0, kappa, lambda, normal_amplitude: 0.0 }, true)
                .unwrap();
            assert!((plus.data.n * phi.components).amax() < 1e-10);
        }
    }

    #[test]
    fn bi_and_born_closed_forms_coincide() {
        assert_eq!(optical_metric_bi(&generic()).unwrap(), optical_metric_born2(&generic()).unwrap());
        assert_eq!(optical_metric_born2(&FieldTensor3P::zero()).unwrap(), metric());
        let g = optical_metric_born2(&generic()).unwrap();
        assert_eq!(g, g.transpose());
        assert!(optical_metric_born2(&FieldTensor3P::new([1.2, 0.0, 0.0], [0.0; 3])).is_err());
    }

    #[test]
    fn born2_metric_pure_magnetic_oracle() {
        // B = ẑ: F = 1, F^{12} = -1, F^{21} = 1. (FηF)^{11} = F^{12} η_{22} F^{21} = 1.
        let g = optical_metric_born2(&FieldTensor3P::new([0.0; 3], [0.0, 0.0, 1.0])).unwrap();
        let mut expected = 2.0 * metric();
        expected[(1, 1)] += 1.0;
        expected[(2, 2)] += 1.0;
        assert_eq!(g, expected);
    }

    #[test]
    fn maxwell_not_birefringent() {
        let bg = Background::new(LagrangianModel::Maxwell, generic()).unwrap();
        let r = detect_birefringence(&bg, &[[1.0, 0.0, 0.0], [0.0, 0.3, 1.0]], &SolverSettings::default()).unwrap();
        assert!(!r.birefringent);
        assert!(r.directions.iter().all(|d| (d.s_plus - 1.0).abs() < 1e-10 && (d.s_minus - 1.0).abs() < 1e-10));
        let bg = Background::new(LagrangianModel::Born, generic()).unwrap();
        assert!(detect_birefringence(&bg, &[[0.0, 0.3, 1.0]], &SolverSettings::default()).unwrap().birefringent);
        let bg = Background::new(LagrangianModel::BornInfeld, generic()).unwrap();
        assert!(!detect_birefringence(&bg, &[[0.0, 0.3, 1.0]], &SolverSettings::default()).unwrap().birefringent);
    }

    #[test]
    fn lambda_cases() {
        let t = build_tetrad([1.0, 0.0, 0.0], 0.9).unwrap();
        let vac = Background::new(LagrangianModel::Born, FieldTensor3P::zero()).unwrap();
        assert_eq!(temporal_lambda(&vac, &t, 1.0, 0.3).unwrap(), 0.0);
        let bg = Background::new(LagrangianModel::Born, crossed()).unwrap();
        assert_eq!(temporal_lambda(&bg, &t, 0.0, 0.3).unwrap(), 0.0);
        assert!(temporal_lambda(&bg, &t, -1.0, 0.3).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let t = example_polarization_tan([0.0, 0.1, 0.1], [0.0, 0.2, 0.3], 1.0).unwrap();
        assert!((t - 0.5625).abs() < 1e-15);
        assert!(example_polarization_tan([0.0, 0.0, 0.1], [0.0; 3], 1.0).is_err());

        let tetrad = build_tetrad([1.0, 0.0, 0.0], 1.0).unwrap();
        // E along ẑ only: the ω-imaginary contraction survives, the real one vanishes.
        let k = born_polarization(&FieldTensor3P::new([0.0, 0.0, 0.4], [0.0; 3]), &tetrad).unwrap();
        assert_eq!(k, 0.0);
        let k = born_polarization(&FieldTensor3P::new([0.0, 0.4, 0.0], [0.0; 3]), &tetrad).unwrap();
        assert_eq!(k, FRAC_PI_4);
        assert!(matches!(
            born_polarization(&FieldTensor3P::new([0.4, 0.0, 0.0], [0.0; 3]), &tetrad),
            Err(Error::IndeterminatePolarization)
        ));
    }

    #[test]
    fn pure_magnetic_polarizations_agree() {
        let field = FieldTensor3P::new([0.0; 3], [0.0, 0.25, -0.15]);
        let c = solve(LagrangianModel::Born, field, [1.0, 0.0, 0.0]);
        let (plus, minus) = (c.plus.unwrap(), c.minus.unwrap());
        let bg = Background::new(LagrangianModel::Born, field).unwrap();
        let tp = polarization_tan(&bg, &plus.tetrad).unwrap();
        let tm = polarization_tan(&bg, &minus.tetrad).unwrap();
        assert!((tp - tm).abs() < 1e-9);
        let d = wrap_half_pi(plus.kappa_or_zero() - minus.kappa_or_zero() + FRAC_PI_2 / 2.0);
        let d = (d - FRAC_PI_2 / 2.0).rem_euclid(FRAC_PI_2);
        assert!(d < 1e-9 || FRAC_PI_2 - d < 1e-9);
    }

    #[test]
    fn gauge_rotation_shifts_kappa() {
        let bg = Background::new(LagrangianModel::Born, generic()).unwrap();
        let c = solve_characteristics(&bg, [0.2, 0.7, -0.1], &SolverSettings::default()).unwrap();
        let minus = c.minus.unwrap();
        let theta = 0.3;
        let k0 = minus.kappa_or_zero();
        let rotated = gauge_rotate(&minus.tetrad, theta);
        let k1 = polarization_angle(&bg, &rotated, Branch::Minus).angle().unwrap();
        assert!((wrap_half_pi(k1 - (k0 - theta))).abs() < 1e-12);
    }

    #[test]
    fn rescaling_leaves_results() {
        let bg = Background::new(LagrangianModel::Born, generic()).unwrap();
        let dir = [0.2, 0.7, -0.1];
        let base = solve_characteristics(&bg, dir, &SolverSettings::default()).unwrap();
        for c in [1e-3, 1e3] {
            let other = solve_characteristics(&bg.scaled(c), dir, &SolverSettings::default()).unwrap();
            for b in Branch::BOTH {
                let (x, y) = (base.branch(b).as_ref().unwrap(), other.branch(b).as_ref().unwrap());
                assert!((x.s_root - y.s_root).abs() < 1e-9);
                assert_eq!(x.rank_n, y.rank_n);
                assert!((x.kappa_or_zero() - y.kappa_or_zero()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn null_roots_of_eta() {
        assert_eq!(null_condition_roots(&metric(), [0.0, 0.0, 2.0]).unwrap(), vec![1.0]);
        assert!(null_condition_roots(&metric(), [0.0; 3]).is_err());
    }

    #[test]
    fn no_root_reported_per_branch() {
        let bg = Background::new(LagrangianModel::Maxwell, FieldTensor3P::zero()).unwrap();
        let settings = SolverSettings { s_range: [1.5, 3.0], ..Default::default() };
        let c = solve_characteristics(&bg, [1.0, 0.0, 0.0], &settings).unwrap();
        assert!(matches!(c.plus, Err(Error::NoRoot { branch: "plus", .. })));
        assert!(matches!(c.minus, Err(Error::NoRoot { branch: "minus", .. })));
        let bad = SolverSettings { s_range: [2.0, 1.0], ..Default::default() };
        assert!(solve_characteristics(&bg, [1.0, 0.0, 0.0], &bad).is_err());
    }

    #[test]
    fn weak_fields_approach_light_cone() {
        let mut previous = f64::INFINITY;
        for k in [0.4, 0.2, 0.1, 0.05] {
            let c = solve(LagrangianModel::Born, generic().scaled(k), [0.2, 0.7, -0.1]);
            let m = c.minus.unwrap();
            let dev = (m.s_root - 1.0).abs();
            assert!(dev < previous);
            previous = dev;
        }
        assert!(previous < 1e-2);
    }
}
