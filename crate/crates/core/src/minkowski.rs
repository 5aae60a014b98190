//! Flat-spacetime tensor algebra with signature (+, -, -, -).
//!
//! Everything here has fixed dimension four. Vectors are [`Vector4`], rank-2
//! objects are dense [`Matrix4`]. A field tensor is stored as its electric and
//! magnetic 3-vectors and expanded on demand using
//!
//! ```text
//! F_{0i} = E_i,    F_{ij} = -ε_{ijk} B_k,    ε^{0123} = +1
//! ```
//!
//! With this embedding the invariants are `F = ½ F_{αβ}F^{αβ} = |B|² - |E|²`
//! and `G = ¼ F_{αβ}*F^{αβ} = -E·B`, and the dual maps `(E, B)` to `(B, -E)`.
//! All sign-sensitive results in the crate are tied to this one convention.

use nalgebra::{Complex, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum magnetic permeability, N/A² (CODATA 2018).
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// The Minkowski metric `diag(1, -1, -1, -1)`; it is its own inverse.
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn flipped(self) -> Self {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }
}

/// A real 4-vector tagged with its index position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub components: Vector4<f64>,
    pub variance: Variance,
}

impl FourVector {
    pub fn covariant(c: [f64; 4]) -> Self {
        Self { components: Vector4::from(c), variance: Variance::Covariant }
    }

    pub fn contravariant(c: [f64; 4]) -> Self {
        Self { components: Vector4::from(c), variance: Variance::Contravariant }
    }

    pub fn zero(variance: Variance) -> Self {
        Self { components: Vector4::zeros(), variance }
    }

    /// Moves the index with η; spatial components change sign.
    pub fn raise_lower(&self) -> Self {
        Self { components: metric() * self.components, variance: self.variance.flipped() }
    }

    pub fn to_covariant(&self) -> Self {
        match self.variance {
            Variance::Covariant => *self,
            Variance::Contravariant => self.raise_lower(),
        }
    }

    pub fn to_contravariant(&self) -> Self {
        match self.variance {
            Variance::Contravariant => *self,
            Variance::Covariant => self.raise_lower(),
        }
    }

    /// Full contraction `a_α b^α`, inserting η when both indices sit at the same level.
    pub fn dot(&self, other: &FourVector) -> f64 {
        if self.variance == other.variance {
            self.components.dot(&(metric() * other.components))
        } else {
            self.components.dot(&other.components)
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { components: self.components * factor, variance: self.variance }
    }

    pub fn to_complex(&self) -> ComplexFourVector {
        ComplexFourVector { components: self.components.map(|x| Complex::new(x, 0.0)), variance: self.variance }
    }
}

/// Free-function form of [`FourVector::raise_lower`].
pub fn raise_lower(v: &FourVector) -> FourVector {
    v.raise_lower()
}

/// A complex 4-vector; used for the spacelike tetrad leg ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexFourVector {
    pub components: Vector4<Complex64>,
    pub variance: Variance,
}

impl ComplexFourVector {
    pub fn from_parts(re: &FourVector, im: &FourVector) -> Self {
        assert_eq!(re.variance, im.variance, "real and imaginary parts must share variance");
        let components = Vector4::from_fn(|i, _| Complex::new(re.components[i], im.components[i]));
        Self { components, variance: re.variance }
    }

    pub fn conj(&self) -> Self {
        Self { components: self.components.map(|z| z.conj()), variance: self.variance }
    }

    pub fn re(&self) -> FourVector {
        FourVector { components: self.components.map(|z| z.re), variance: self.variance }
    }

    pub fn im(&self) -> FourVector {
        FourVector { components: self.components.map(|z| z.im), variance: self.variance }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { components: self.components * factor, variance: self.variance }
    }

    pub fn raise_lower(&self) -> Self {
        let eta = metric().map(|x| Complex::new(x, 0.0));
        Self { components: eta * self.components, variance: self.variance.flipped() }
    }

    /// Bilinear contraction (no complex conjugation).
    pub fn dot(&self, other: &ComplexFourVector) -> Complex64 {
        let other = if self.variance == other.variance { other.raise_lower() } else { *other };
        self.components.iter().zip(other.components.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn dot_real(&self, other: &FourVector) -> Complex64 {
        self.dot(&other.to_complex())
    }

    /// `a_α M^{αβ} b_β` for a contravariant matrix and two covariant vectors.
    pub fn sandwich(&self, m: &Matrix4<f64>, other: &ComplexFourVector) -> Complex64 {
        let a = self.covariant_components();
        let b = other.covariant_components();
        let mut acc = Complex::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += a[i] * m[(i, j)] * b[j];
            }
        }
        acc
    }

    fn covariant_components(&self) -> Vector4<Complex64> {
        match self.variance {
            Variance::Covariant => self.components,
            Variance::Contravariant => self.raise_lower().components,
        }
    }
}

/// Antisymmetric field tensor in 3+1 form, natural units unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldTensor3P {
    pub e: Vector3<f64>,
    pub b: Vector3<f64>,
}

impl FieldTensor3P {
    pub fn new(e: [f64; 3], b: [f64; 3]) -> Self {
        Self { e: Vector3::from(e), b: Vector3::from(b) }
    }

    pub fn zero() -> Self {
        Self { e: Vector3::zeros(), b: Vector3::zeros() }
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().chain(self.b.iter()).all(|&x| x == 0.0)
    }

    /// `F_{αβ}`.
    pub fn covariant(&self) -> Matrix4<f64> {
        let (e, b) = (&self.e, &self.b);
        Matrix4::new(
            0.0, e[0], e[1], e[2], //
            -e[0], 0.0, -b[2], b[1], //
            -e[1], b[2], 0.0, -b[0], //
            -e[2], -b[1], b[0], 0.0,
        )
    }

    /// `F^{αβ} = η^{αγ} F_{γδ} η^{δβ}`.
    pub fn contravariant(&self) -> Matrix4<f64> {
        let eta = metric();
        eta * self.covariant() * eta
    }

    /// Reads `(E, B)` back from a covariant matrix; only the upper triangle is used.
    pub fn from_covariant(m: &Matrix4<f64>) -> Self {
        Self {
            e: Vector3::new(m[(0, 1)], m[(0, 2)], m[(0, 3)]),
            b: Vector3::new(-m[(2, 3)], -m[(3, 1)], -m[(1, 2)]),
        }
    }

    pub fn from_contravariant(m: &Matrix4<f64>) -> Self {
        let eta = metric();
        Self::from_covariant(&(eta * m * eta))
    }

    /// `*F^{αβ} = ½ ε^{αβγδ} F_{γδ}`, returned in the same embedding.
    pub fn dual(&self) -> Self {
        Self { e: self.b, b: -self.e }
    }

    /// `½ F_{αβ}F^{αβ} = |B|² - |E|²`.
    pub fn invariant_f(&self) -> f64 {
        self.b.norm_squared() - self.e.norm_squared()
    }

    /// `¼ F_{αβ}*F^{αβ} = -E·B`.
    pub fn invariant_g(&self) -> f64 {
        0.0 - self.e.dot(&self.b)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { e: self.e * factor, b: self.b * factor }
    }

    pub fn add(&self, other: &FieldTensor3P) -> Self {
        Self { e: self.e + other.e, b: self.b + other.b }
    }

    /// Applies a Lorentz transformation `x'^μ = Λ^μ_ν x^ν` to the field.
    pub fn transformed(&self, lambda: &Matrix4<f64>) -> Self {
        let f_up = self.contravariant();
        Self::from_contravariant(&(lambda * f_up * lambda.transpose()))
    }

    /// `F^{αβ} p_α`, the vector that builds the contracted background tensor.
    pub fn contract_first(&self, p: &FourVector) -> Vector4<f64> {
        self.contravariant().transpose() * p.to_covariant().components
    }
}

pub fn dual(f: &FieldTensor3P) -> FieldTensor3P {
    f.dual()
}

pub fn invariant_f(f: &FieldTensor3P) -> f64 {
    f.invariant_f()
}

pub fn invariant_g(f: &FieldTensor3P) -> f64 {
    f.invariant_g()
}

/// Pure boost with 3-velocity `v` (|v| < 1), acting on contravariant components.
pub fn boost(v: Vector3<f64>) -> Matrix4<f64> {
    let v2 = v.norm_squared();
    assert!(v2 < 1.0, "boost velocity must be subluminal");
    let gamma = 1.0 / (1.0 - v2).sqrt();
    let mut m = Matrix4::identity();
    m[(0, 0)] = gamma;
    for i in 0..3 {
        m[(0, i + 1)] = -gamma * v[i];
        m[(i + 1, 0)] = -gamma * v[i];
        for j in 0..3 {
            let extra = if v2 > 0.0 { (gamma - 1.0) * v[i] * v[j] / v2 } else { 0.0 };
            m[(i + 1, j + 1)] += extra;
        }
    }
    m
}

/// Spatial rotation by `angle` about `axis` (right-handed).
pub fn rotation(axis: Vector3<f64>, angle: f64) -> Matrix4<f64> {
    let r = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(r.matrix());
    m
}

/// Physical constants needed at the SI boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    /// Speed of light, m/s.
    pub c: f64,
    /// Magnetic permeability, N/A².
    pub mu0: f64,
    /// Born field constant, tesla.
    pub b: f64,
}

impl UnitSystem {
    pub fn codata(b: f64) -> Self {
        Self { c: SPEED_OF_LIGHT, mu0: VACUUM_PERMEABILITY, b }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("c", self.c), ("mu0", self.mu0), ("b", self.b)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidUnits(format!("{name} must be finite and positive, got {value}")));
            }
        }
        Ok(())
    }
}

/// `E → E/(c b)`, `B → B/b`: fields in units of the Born constant with c = 1.
pub fn si_to_natural(f_si: &FieldTensor3P, u: &UnitSystem) -> Result<FieldTensor3P> {
    u.validate()?;
    Ok(FieldTensor3P { e: f_si.e / (u.c * u.b), b: f_si.b / u.b })
}

pub fn natural_to_si(f: &FieldTensor3P, u: &UnitSystem) -> Result<FieldTensor3P> {
    u.validate()?;
    Ok(FieldTensor3P { e: f.e * (u.c * u.b), b: f.b * u.b })
}
