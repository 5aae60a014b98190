//! First-order jump conditions: the contracted background tensor, the
//! coefficient matrix `N`, and its contractions with the tetrad.
//!
//! All matrices are contravariant and act on covariant vectors, so the jump
//! condition reads `N^{αβ} φ'_β = 0`.

use nalgebra::{Complex, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lagrangian::{BackgroundTensorCoefficients, LagrangianModel};
use crate::minkowski::{metric, Complex64, FieldTensor3P, FourVector};
use crate::tetrad::Tetrad;

/// `B^{βδ} = p_α p_γ B^{αβγδ}` from the outer-product form of the background tensor.
///
/// With `v^β = F^{αβ} p_α` and `w^β = *F^{αβ} p_α`:
/// `B = c_FF v⊗v + c_GG w⊗w + c_FG (v⊗w + w⊗v)`.
pub fn contracted_bb(coeffs: &BackgroundTensorCoefficients, field: &FieldTensor3P, p: &FourVector) -> Matrix4<f64> {
    let v = field.contract_first(p);
    let w = field.dual().contract_first(p);
    coeffs.c_ff * v * v.transpose()
        + coeffs.c_gg * w * w.transpose()
        + coeffs.c_fg * (v * w.transpose() + w * v.transpose())
}

/// `N^{αβ} = B^a (p η^{αβ} - p^α p^β) + B^{αβ}` with `p = p_α p^α`.
pub fn coefficient_matrix(ba: f64, bb: &Matrix4<f64>, p: &FourVector) -> Matrix4<f64> {
    let up = p.to_contravariant().components;
    let scalar = p.dot(p);
    ba * (scalar * metric() - up * up.transpose()) + bb
}

/// Tetrad contractions of `B^a` and the contracted `B^b`.
///
/// With `A = ω B ω`, `C = ω B ω̄` and `D = ω B d`:
///
/// ```text
/// B_ω   = 2 Re C        B_Rω   = 2 Re A       B_Iω   = -2 Im A
/// BB_ωd = 2 |D|²        BB_Rωd = 2 Re D²      BB_Iωd = -2 Im D²
/// B_d   = d B d         B_ab_d = B^a (d² - p) - B_d
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TetradScalars {
    pub b_omega: f64,
    pub b_r_omega: f64,
    pub b_i_omega: f64,
    pub b_d: f64,
    pub bb_omega_d: f64,
    pub bb_r_omega_d: f64,
    pub bb_i_omega_d: f64,
    pub b_ab_d: f64,
    /// `D = ω_α B^{αβ} d_β`, needed for the temporal amplitude.
    pub omega_d: Complex64,
}

impl TetradScalars {
    /// `X = B_ab_d B_Rω + BB_Rωd`, the real part of the polarization condition.
    pub fn x(&self) -> f64 {
        self.b_ab_d * self.b_r_omega + self.bb_r_omega_d
    }

    /// `Y = B_ab_d B_Iω + BB_Iωd`.
    pub fn y(&self) -> f64 {
        self.b_ab_d * self.b_i_omega + self.bb_i_omega_d
    }

    /// `K B_ω + BB_ωd`.
    pub fn isotropic(&self) -> f64 {
        self.b_ab_d * self.b_omega + self.bb_omega_d
    }

    /// Largest magnitude among the eight real scalars.
    pub fn magnitude(&self) -> f64 {
        [
            self.b_omega,
            self.b_r_omega,
            self.b_i_omega,
            self.b_d,
            self.bb_omega_d,
            self.bb_r_omega_d,
            self.bb_i_omega_d,
            self.b_ab_d,
        ]
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

pub fn tetrad_scalars(ba: f64, bb: &Matrix4<f64>, t: &Tetrad) -> TetradScalars {
    let w = t.omega;
    let d = t.d.to_complex();
    let a = w.sandwich(bb, &w);
    let c = w.sandwich(bb, &w.conj());
    let dd: Complex64 = w.sandwich(bb, &d);
    let b_d = d.sandwich(bb, &d).re;
    let d2 = dd * dd;
    TetradScalars {
        b_omega: 2.0 * c.re,
        b_r_omega: 2.0 * a.re,
        b_i_omega: -2.0 * a.im,
        b_d,
        bb_omega_d: 2.0 * dd.norm_sqr(),
        bb_r_omega_d: 2.0 * d2.re,
        bb_i_omega_d: -2.0 * d2.im,
        b_ab_d: ba * (t.scalar_d * t.scalar_d - t.scalar_p) - b_d,
        omega_d: dd,
    }
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(m: &Matrix4<f64>, rel_tol: f64) -> usize {
    let sv = m.singular_values();
    let largest = sv.max();
    if !(largest > 0.0) {
        return 0;
    }
    sv.iter().filter(|&&x| x > rel_tol * largest).count()
}

/// Largest singular value.
pub fn spectral_norm(m: &Matrix4<f64>) -> f64 {
    m.singular_values().max()
}

/// `N^{αβ} φ_β`, with `φ` lowered first if it was given contravariant.
pub fn jump_residual(n: &Matrix4<f64>, phi: &FourVector) -> Vector4<f64> {
    n * phi.to_covariant().components
}

/// Residuals of `B_ω B_d = BB_ωd`, `B_Rω B_d = BB_Rωd`, `B_Iω B_d = BB_Iωd`.
///
/// All three are divided by one common scale, the sum of the magnitudes of the
/// terms involved. A vanishing scale (no background) gives zero residuals.
pub fn born_identities(s: &TetradScalars) -> [f64; 3] {
    let scale = (s.b_omega.abs() + s.b_r_omega.abs() + s.b_i_omega.abs()) * s.b_d.abs()
        + s.bb_omega_d.abs()
        + s.bb_r_omega_d.abs()
        + s.bb_i_omega_d.abs();
    if scale == 0.0 {
        return [0.0; 3];
    }
    [
        (s.b_omega * s.b_d - s.bb_omega_d).abs() / scale,
        (s.b_r_omega * s.b_d - s.bb_r_omega_d).abs() / scale,
        (s.b_i_omega * s.b_d - s.bb_i_omega_d).abs() / scale,
    ]
}

/// Everything the first-order jump conditions need at one tetrad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundData {
    pub ba: f64,
    pub bb: Matrix4<f64>,
    pub scalars: TetradScalars,
    pub n: Matrix4<f64>,
}

impl BackgroundData {
    pub fn assemble(model: &LagrangianModel, field: &FieldTensor3P, t: &Tetrad) -> Result<Self> {
        let coeffs = model.background_tensors(field)?;
        Ok(Self::from_coefficients(&coeffs, field, t))
    }

    pub fn from_coefficients(coeffs: &BackgroundTensorCoefficients, field: &FieldTensor3P, t: &Tetrad) -> Self {
        let bb = contracted_bb(coeffs, field, &t.p);
        let scalars = tetrad_scalars(coeffs.c_a, &bb, t);
        let n = coefficient_matrix(coeffs.c_a, &bb, &t.p);
        Self { ba: coeffs.c_a, bb, scalars, n }
    }

    /// `(e^{iκ} ω + e^{-iκ} ω̄)` contracted into `N`, for checks that bypass λ.
    pub fn transverse_image(&self, t: &Tetrad, kappa: f64) -> Vector4<f64> {
        let w = t.omega.scale(Complex::from_polar(1.0, kappa));
        let v = w.components.map(|z| 2.0 * z.re);
        self.n * v
    }
}
