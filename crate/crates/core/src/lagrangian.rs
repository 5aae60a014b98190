//! Lagrangians `L(F, G)`, their derivatives, and the quantities built from them.
//!
//! All built-in models are written in natural units (c = μ0 = 1, fields in
//! units of the Born constant b, so b = 1):
//!
//! ```text
//! Maxwell      L = -F/2
//! Born         L = -(√(1 + F) - 1)
//! Born-Infeld  L = -(√(1 + F - G²) - 1)
//! ```
//!
//! The first-order background tensors are kept in the normalization
//! `B^a = -2 L_F`, `B^b = -4 L_FF F⊗F - L_GG *F⊗*F - 2 L_FG (F⊗*F + *F⊗F)`.
//! Rewriting the field equations (for example multiplying through by a power
//! of the square root) rescales both by one positive factor; nothing
//! downstream depends on that factor.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::minkowski::FieldTensor3P;

/// `L` and its derivatives with respect to the invariants, evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Derivatives {
    pub l: f64,
    pub l_f: f64,
    pub l_g: f64,
    pub l_ff: f64,
    pub l_fg: f64,
    pub l_gg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Maxwell,
    Born,
    BornInfeld,
    PlebanskiCustom,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] =
        [ModelKind::Maxwell, ModelKind::Born, ModelKind::BornInfeld, ModelKind::PlebanskiCustom];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Maxwell => "maxwell",
            ModelKind::Born => "born",
            ModelKind::BornInfeld => "born_infeld",
            ModelKind::PlebanskiCustom => "plebanski_custom",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown model `{s}`")))
    }
}

/// One monomial `coefficient · F^f_power · G^g_power` of a polynomial Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialTerm {
    pub f_power: u32,
    pub g_power: u32,
    pub coefficient: f64,
}

/// User-supplied Plebański-type theory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CustomLagrangian {
    /// The same derivative values at every background.
    Fixed(Derivatives),
    /// `L = Σ c F^i G^j`, differentiated term by term.
    Polynomial(Vec<PolynomialTerm>),
}

impl CustomLagrangian {
    /// Weak-field Heisenberg-Euler type form `L = -F/2 + a F² + b G²`.
    pub fn quartic(a: f64, b: f64) -> Self {
        CustomLagrangian::Polynomial(vec![
            PolynomialTerm { f_power: 1, g_power: 0, coefficient: -0.5 },
            PolynomialTerm { f_power: 2, g_power: 0, coefficient: a },
            PolynomialTerm { f_power: 0, g_power: 2, coefficient: b },
        ])
    }

    fn evaluate(&self, f: f64, g: f64) -> Derivatives {
        match self {
            CustomLagrangian::Fixed(d) => *d,
            CustomLagrangian::Polynomial(terms) => {
                // d^k/dx^k x^n evaluated at x
                fn dpow(x: f64, n: u32, k: u32) -> f64 {
                    if k > n {
                        return 0.0;
                    }
                    let falling: f64 = (0..k).map(|i| (n - i) as f64).product();
                    falling * x.powi((n - k) as i32)
                }
                let mut out = Derivatives::default();
                for t in terms {
                    let (i, j, c) = (t.f_power, t.g_power, t.coefficient);
                    out.l += c * dpow(f, i, 0) * dpow(g, j, 0);
                    out.l_f += c * dpow(f, i, 1) * dpow(g, j, 0);
                    out.l_g += c * dpow(f, i, 0) * dpow(g, j, 1);
                    out.l_ff += c * dpow(f, i, 2) * dpow(g, j, 0);
                    out.l_fg += c * dpow(f, i, 1) * dpow(g, j, 1);
                    out.l_gg += c * dpow(f, i, 0) * dpow(g, j, 2);
                }
                out
            }
        }
    }

    fn depends_on_g(&self) -> bool {
        match self {
            CustomLagrangian::Fixed(d) => d.l_g != 0.0 || d.l_fg != 0.0 || d.l_gg != 0.0,
            CustomLagrangian::Polynomial(terms) => terms.iter().any(|t| t.g_power > 0 && t.coefficient != 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LagrangianModel {
    Maxwell,
    Born,
    BornInfeld,
    Custom(CustomLagrangian),
}

impl LagrangianModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            LagrangianModel::Maxwell => ModelKind::Maxwell,
            LagrangianModel::Born => ModelKind::Born,
            LagrangianModel::BornInfeld => ModelKind::BornInfeld,
            LagrangianModel::Custom(_) => ModelKind::PlebanskiCustom,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Whether `L` has any dependence on `G`; Born-type theories do not.
    pub fn depends_on_g(&self) -> bool {
        match self {
            LagrangianModel::Maxwell | LagrangianModel::Born => false,
            LagrangianModel::BornInfeld => true,
            LagrangianModel::Custom(c) => c.depends_on_g(),
        }
    }

    pub fn evaluate(&self, f: f64, g: f64) -> Result<Derivatives> {
        match self {
            LagrangianModel::Maxwell => Ok(Derivatives { l: -0.5 * f, l_f: -0.5, ..Default::default() }),
            LagrangianModel::Born => {
                let r = 1.0 + f;
                if !(r > 0.0) {
                    return Err(Error::OutOfDomain { model: "born", f, g, detail: "requires 1 + F > 0" });
                }
                let sr = r.sqrt();
                Ok(Derivatives {
                    l: -(sr - 1.0),
                    l_f: -0.5 / sr,
                    l_ff: 0.25 / (r * sr),
                    ..Default::default()
                })
            }
            LagrangianModel::BornInfeld => {
                let r = 1.0 + f - g * g;
                if !(r > 0.0) {
                    return Err(Error::OutOfDomain {
                        model: "born_infeld",
                        f,
                        g,
                        detail: "requires 1 + F - G² > 0",
                    });
                }
                let sr = r.sqrt();
                let r32 = r * sr;
                Ok(Derivatives {
                    l: -(sr - 1.0),
                    l_f: -0.5 / sr,
                    l_g: g / sr,
                    l_ff: 0.25 / r32,
                    l_fg: -0.5 * g / r32,
                    l_gg: (1.0 + f) / r32,
                })
            }
            LagrangianModel::Custom(c) => Ok(c.evaluate(f, g)),
        }
    }

    /// `D^{αβ} = -2 (L_F F^{αβ} + ½ L_G *F^{αβ})`, contravariant.
    pub fn displacement(&self, field: &FieldTensor3P) -> Result<Matrix4<f64>> {
        let d = self.evaluate(field.invariant_f(), field.invariant_g())?;
        Ok(-2.0 * (d.l_f * field.contravariant() + 0.5 * d.l_g * field.dual().contravariant()))
    }

    pub fn background_tensors(&self, field: &FieldTensor3P) -> Result<BackgroundTensorCoefficients> {
        let d = self.evaluate(field.invariant_f(), field.invariant_g())?;
        Ok(BackgroundTensorCoefficients::from_derivatives(&d))
    }
}

/// `B^a` and the coefficients of `B^b` over `{F⊗F, *F⊗*F, F⊗*F + *F⊗F}`.
///
/// The rank-4 tensor is never materialized; every use contracts it with the
/// wavefront normal first (see [`crate::jump::contracted_bb`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackgroundTensorCoefficients {
    pub c_a: f64,
    pub c_ff: f64,
    pub c_gg: f64,
    pub c_fg: f64,
}

impl BackgroundTensorCoefficients {
    pub fn from_derivatives(d: &Derivatives) -> Self {
        Self { c_a: -2.0 * d.l_f, c_ff: -4.0 * d.l_ff, c_gg: -d.l_gg, c_fg: -2.0 * d.l_fg }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { c_a: self.c_a * factor, c_ff: self.c_ff * factor, c_gg: self.c_gg * factor, c_fg: self.c_fg * factor }
    }

    /// True when `B^b` is built from `F⊗F` alone, as for any `L(F)`.
    pub fn is_pure_f(&self) -> bool {
        self.c_gg == 0.0 && self.c_fg == 0.0
    }

    /// `B^{γα}{}_γ{}^β`: the trace of `B^b` over its first and third slots.
    pub fn trace_13(&self, field: &FieldTensor3P) -> Matrix4<f64> {
        let eta = crate::minkowski::metric();
        let f = field.contravariant();
        let s = field.dual().contravariant();
        self.c_ff * f.transpose() * eta * f
            + self.c_gg * s.transpose() * eta * s
            + self.c_fg * (f.transpose() * eta * s + s.transpose() * eta * f)
    }
}

/// Residual of the rewritten field equations and of the homogeneous equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEquationResidual {
    /// `φ^β`, the inhomogeneous field equations.
    pub phi: [f64; 4],
    /// `*F^{αβ}{}_{,α}`.
    pub homogeneous: [f64; 4],
}

impl FieldEquationResidual {
    pub fn norm(&self) -> f64 {
        self.phi.iter().chain(self.homogeneous.iter()).map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Evaluates the field equations of `model` for the field configuration
/// `field_fn` at `x0`, with every derivative taken by second-order central
/// differences of step `h`.
///
/// Born and Born-Infeld use the polynomial (square-root free) form of their
/// field equations, Maxwell uses `F^{αβ}{}_{,α}`, custom theories use the
/// divergence of the displacement tensor.
pub fn field_equation_residual<Fld>(
    model: &LagrangianModel,
    field_fn: Fld,
    x0: [f64; 4],
    h: f64,
) -> Result<FieldEquationResidual>
where
    Fld: Fn([f64; 4]) -> FieldTensor3P,
{
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {h}")));
    }
    let shifted = |axis: usize, sign: f64| {
        let mut x = x0;
        x[axis] += sign * h;
        field_fn(x)
    };

    let centre = field_fn(x0);
    let (f0, g0) = (centre.invariant_f(), centre.invariant_g());
    let f_up = centre.contravariant();
    let dual_up = centre.dual().contravariant();

    let mut div_f = [0.0; 4];
    let mut div_dual = [0.0; 4];
    let mut div_d = [0.0; 4];
    let mut grad_f = [0.0; 4];
    let mut grad_g = [0.0; 4];
    let custom = matches!(model, LagrangianModel::Custom(_));
    for alpha in 0..4 {
        let plus = shifted(alpha, 1.0);
        let minus = shifted(alpha, -1.0);
        let dfield = (plus.contravariant() - minus.contravariant()) / (2.0 * h);
        let ddual = (plus.dual().contravariant() - minus.dual().contravariant()) / (2.0 * h);
        grad_f[alpha] = (plus.invariant_f() - minus.invariant_f()) / (2.0 * h);
        grad_g[alpha] = (plus.invariant_g() - minus.invariant_g()) / (2.0 * h);
        if custom {
            let dd = (model.displacement(&plus)? - model.displacement(&minus)?) / (2.0 * h);
            for beta in 0..4 {
                div_d[beta] += dd[(alpha, beta)];
            }
        }
        for beta in 0..4 {
            div_f[beta] += dfield[(alpha, beta)];
            div_dual[beta] += ddual[(alpha, beta)];
        }
    }

    let mut phi = [0.0; 4];
    for beta in 0..4 {
        // Σ_α X^{αβ} Y_{,α}
        let along = |x: &Matrix4<f64>, grad: &[f64; 4]| (0..4).map(|a| x[(a, beta)] * grad[a]).sum::<f64>();
        phi[beta] = match model {
            LagrangianModel::Maxwell => div_f[beta],
            LagrangianModel::Born => {
                model.evaluate(f0, g0)?;
                div_f[beta] + f0 * div_f[beta] - 0.5 * along(&f_up, &grad_f)
            }
            LagrangianModel::BornInfeld => {
                model.evaluate(f0, g0)?;
                div_f[beta] + (f0 * div_f[beta] - 0.5 * along(&f_up, &grad_f) - along(&dual_up, &grad_g))
                    + (-g0 * g0 * div_f[beta] + 0.5 * g0 * along(&dual_up, &grad_f) + g0 * along(&f_up, &grad_g)
                        - f0 * along(&dual_up, &grad_g))
            }
            LagrangianModel::Custom(_) => div_d[beta],
        };
    }
    Ok(FieldEquationResidual { phi, homogeneous: div_dual })
}

/// First and second derivatives of `L` by central differences of `L` and of
/// the analytic first derivatives, step `h` in both invariants.
pub fn finite_difference_derivatives(model: &LagrangianModel, f: f64, g: f64, h: f64) -> Result<Derivatives> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {h}")));
    }
    let at = |df: f64, dg: f64| model.evaluate(f + df, g + dg);
    let (fp, fm, gp, gm) = (at(h, 0.0)?, at(-h, 0.0)?, at(0.0, h)?, at(0.0, -h)?);
    let c = 0.5 / h;
    Ok(Derivatives {
        l: at(0.0, 0.0)?.l,
        l_f: c * (fp.l - fm.l),
        l_g: c * (gp.l - gm.l),
        l_ff: c * (fp.l_f - fm.l_f),
        l_fg: c * (gp.l_f - gm.l_f),
        l_gg: c * (gp.l_g - gm.l_g),
    })
}

/// Largest relative deviation between analytic and finite-difference derivatives.
///
/// Each component is compared against `max(|analytic|, 1)`, so derivatives that
/// vanish identically are held to an absolute standard.
pub fn derivative_deviation(model: &LagrangianModel, f: f64, g: f64, h: f64) -> Result<f64> {
    let a = model.evaluate(f, g)?;
    let n = finite_difference_derivatives(model, f, g, h)?;
    let pairs = [(a.l_f, n.l_f), (a.l_g, n.l_g), (a.l_ff, n.l_ff), (a.l_fg, n.l_fg), (a.l_gg, n.l_gg)];
    Ok(pairs.iter().map(|(x, y)| (x - y).abs() / x.abs().max(1.0)).fold(0.0, f64::max))
}
