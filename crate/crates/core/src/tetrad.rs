//! The wavefront-adapted tetrad `(p, d, ω, ω̄)` and the gauged jump coefficient.
//!
//! The normal is parametrized as `p_α = (1, s n̂)` and the timelike leg is
//! fixed to the lab time axis `d_α = (1, 0, 0, 0)`, so `p·d = 1` for every
//! tetrad built here. The complex leg is `ω = (e₂ + i e₃)/2` with `{n̂, e₂, e₃}`
//! a right-handed orthonormal triad; all four legs are stored covariant.

use nalgebra::{Complex, Matrix4, Vector3};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::minkowski::{metric, ComplexFourVector, FourVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    /// Wavefront normal `p_α = ∂_α Σ`.
    pub p: FourVector,
    /// Timelike leg.
    pub d: FourVector,
    /// Complex spacelike leg.
    pub omega: ComplexFourVector,
    /// `p_α p^α`.
    pub scalar_p: f64,
    /// `p_α d^α`.
    pub scalar_d: f64,
}

impl Tetrad {
    pub fn omega_bar(&self) -> ComplexFourVector {
        self.omega.conj()
    }

    /// Unit spatial vectors `(e₂, e₃)` spanned by ω.
    pub fn transverse_axes(&self) -> (Vector3<f64>, Vector3<f64>) {
        let re = self.omega.re().components * 2.0;
        let im = self.omega.im().components * 2.0;
        (Vector3::new(re[1], re[2], re[3]), Vector3::new(im[1], im[2], im[3]))
    }

    /// Tetrad built from arbitrary legs; `scalar_p` and `scalar_d` are recomputed.
    pub fn from_legs(p: FourVector, d: FourVector, omega: ComplexFourVector) -> Self {
        let p = p.to_covariant();
        let d = d.to_covariant();
        let omega = match omega.variance {
            crate::minkowski::Variance::Covariant => omega,
            crate::minkowski::Variance::Contravariant => omega.raise_lower(),
        };
        Self { p, d, omega, scalar_p: p.dot(&p), scalar_d: p.dot(&d) }
    }
}

/// Builds the tetrad for a front moving along `direction` with normal `(1, s n̂)`.
///
/// `e₂` is the coordinate axis least aligned with `n̂` (lowest index on ties),
/// orthogonalized against `n̂`; `e₃ = n̂ × e₂`. A non-unit direction is
/// normalized. `s = 0` makes `p` parallel to `d` and is rejected.
pub fn build_tetrad(direction: [f64; 3], s: f64) -> Result<Tetrad> {
    let n = Vector3::from(direction);
    let len = n.norm();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::ZeroDirection);
    }
    let n = n / len;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::DegenerateTetrad(format!("s = {s}: the normal must have a nonzero spatial part")));
    }

    let mut axis = 0;
    for i in 1..3 {
        if n[i].abs() < n[axis].abs() {
            axis = i;
        }
    }
    let mut seed = Vector3::zeros();
    seed[axis] = 1.0;
    let e2 = (seed - n * n.dot(&seed)).normalize();
    let e3 = n.cross(&e2);

    let p = FourVector::covariant([1.0, s * n[0], s * n[1], s * n[2]]);
    let d = FourVector::covariant([1.0, 0.0, 0.0, 0.0]);
    let omega = ComplexFourVector::from_parts(
        &FourVector::covariant([0.0, 0.5 * e2[0], 0.5 * e2[1], 0.5 * e2[2]]),
        &FourVector::covariant([0.0, 0.5 * e3[0], 0.5 * e3[1], 0.5 * e3[2]]),
    );
    Ok(Tetrad { p, d, omega, scalar_p: 1.0 - s * s, scalar_d: 1.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TetradCondition {
    POmega,
    POmegaBar,
    PD,
    OmegaOmega,
    OmegaBarOmegaBar,
    OmegaOmegaBar,
    OmegaD,
    OmegaBarD,
    DD,
}

impl fmt::Display for TetradCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TetradCondition::POmega => "p·ω = 0",
            TetradCondition::POmegaBar => "p·ω̄ = 0",
            TetradCondition::PD => "p·d = d",
            TetradCondition::OmegaOmega => "ω·ω = 0",
            TetradCondition::OmegaBarOmegaBar => "ω̄·ω̄ = 0",
            TetradCondition::OmegaOmegaBar => "ω·ω̄ = -1/2",
            TetradCondition::OmegaD => "ω·d = 0",
            TetradCondition::OmegaBarD => "ω̄·d = 0",
            TetradCondition::DD => "d·d = 1",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetradViolation {
    pub condition: TetradCondition,
    /// `|actual - expected|`.
    pub deviation: f64,
}

/// All nine defining scalar products and their deviations from the required values.
pub fn tetrad_deviations(t: &Tetrad) -> [(TetradCondition, f64); 9] {
    let p = t.p.to_complex();
    let d = t.d.to_complex();
    let w = t.omega;
    let wb = t.omega_bar();
    let half = Complex::new(-0.5, 0.0);
    [
        (TetradCondition::POmega, p.dot(&w).norm()),
        (TetradCondition::POmegaBar, p.dot(&wb).norm()),
        (TetradCondition::PD, (t.p.dot(&t.d) - t.scalar_d).abs()),
        (TetradCondition::OmegaOmega, w.dot(&w).norm()),
        (TetradCondition::OmegaBarOmegaBar, wb.dot(&wb).norm()),
        (TetradCondition::OmegaOmegaBar, (w.dot(&wb) - half).norm()),
        (TetradCondition::OmegaD, w.dot(&d).norm()),
        (TetradCondition::OmegaBarD, wb.dot(&d).norm()),
        (TetradCondition::DD, (t.d.dot(&t.d) - 1.0).abs()),
    ]
}

/// Conditions violated by more than `tol`; empty for a valid tetrad.
pub fn verify_tetrad(t: &Tetrad, tol: f64) -> Vec<TetradViolation> {
    tetrad_deviations(t)
        .into_iter()
        .filter(|(_, dev)| !(*dev <= tol))
        .map(|(condition, deviation)| TetradViolation { condition, deviation })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReconstruction {
    /// `η_{αβ}` rebuilt from the tetrad legs.
    pub metric: Matrix4<f64>,
    /// Largest absolute deviation from `diag(1, -1, -1, -1)`.
    pub max_deviation: f64,
}

/// Rebuilds the covariant Minkowski metric from the tetrad:
///
/// ```text
/// η = p/(p - d²) d⊗d - (d d⊗p + d p⊗d - p⊗p)/(p - d²) - 2(ω⊗ω̄ + ω̄⊗ω)
/// ```
///
/// The pole at `p = d²` (for the built-in tetrads, `s → 0`) is an error.
pub fn metric_decomposition(t: &Tetrad) -> Result<MetricReconstruction> {
    let (ps, ds) = (t.scalar_p, t.scalar_d);
    let denom = ps - ds * ds;
    let scale = 1.0f64.max(ps.abs()).max(ds * ds);
    if !(denom.abs() > 1e-10 * scale) {
        return Err(Error::DegenerateTetrad(format!("p - d² = {denom:e} vanishes; p and d are (nearly) parallel")));
    }
    let p = t.p.components;
    let d = t.d.components;
    let w = t.omega.components;
    let outer_w = Matrix4::from_fn(|a, b| (w[a] * w[b].conj() + w[a].conj() * w[b]).re);
    let m = (ps / denom) * d * d.transpose()
        - (ds * d * p.transpose() + ds * p * d.transpose() - p * p.transpose()) / denom
        - 2.0 * outer_w;
    let max_deviation = (m - metric()).amax();
    Ok(MetricReconstruction { metric: m, max_deviation })
}

/// Rephases the complex leg, `ω → e^{iθ} ω`.
pub fn gauge_rotate(t: &Tetrad, theta: f64) -> Tetrad {
    Tetrad { omega: t.omega.scale(Complex::from_polar(1.0, theta)), ..*t }
}

/// Free parameters of a jump coefficient in the tetrad basis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JumpParams {
    /// Shock excitation `J ≥ 0`.
    pub excitation: f64,
    /// Polarization angle κ in radians.
    pub kappa: f64,
    /// Temporal amplitude λ.
    pub lambda: f64,
    /// Normal amplitude; dropped by the gauge.
    pub normal_amplitude: f64,
}

/// `φ_α = √J (e^{iκ} ω_α + e^{-iκ} ω̄_α) + λ d_α (+ a p_α)`, covariant.
pub fn assemble_phi(t: &Tetrad, params: &JumpParams, gauged: bool) -> Result<FourVector> {
    let complex = assemble_phi_complex(t, params)?;
    let mut phi = complex.re();
    if !gauged {
        phi.components += t.p.components * params.normal_amplitude;
    }
    Ok(phi)
}

fn assemble_phi_complex(t: &Tetrad, params: &JumpParams) -> Result<ComplexFourVector> {
    if !(params.excitation >= 0.0) {
        return Err(Error::InvalidArgument(format!("shock excitation must be ≥ 0, got {}", params.excitation)));
    }
    let rotated = t.omega.scale(Complex::from_polar(params.excitation.sqrt(), params.kappa));
    let transverse = rotated.components + rotated.conj().components;
    let temporal = t.d.to_complex().components * Complex::new(params.lambda, 0.0);
    Ok(ComplexFourVector { components: transverse + temporal, variance: t.p.variance })
}
