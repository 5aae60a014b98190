//! Step-function series for potentials and fields near a shock front.
//!
//! A front is the hypersurface `Σ(x) = 0`. Near it the potential is written as
//! `A = A⁻ + Σ_{m ≥ l} φ_m h_m(Σ)` with the step functions
//!
//! ```text
//! h_m(σ) = 0           σ < 0
//! h_m(σ) = σ^m / m!    σ ≥ 0
//! ```
//!
//! so `h_m` has `m - 1` continuous derivatives and its `m`-th derivative jumps
//! by one. The field series follows from `∂_α h_m = p_α h_{m-1}` with
//! `p_α = ∂_α Σ`; its first index drops to `l - 1`.
//!
//! Jump coefficients are recovered numerically from one-sided polynomial
//! stencils on either side of `σ = 0` ([`extract_jump`]).

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::minkowski::FourVector;

/// `h_m(σ)`.
pub fn step_h(m: u32, sigma: f64) -> f64 {
    if sigma < 0.0 {
        0.0
    } else {
        sigma.powi(m as i32) / factorial(m)
    }
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// `|d h_m/dσ - h_{m-1}|` with the derivative taken by central differences.
///
/// Evaluation at `σ = 0` is rejected: the stencil would straddle the jump.
pub fn step_derivative_check(m: u32, sigma: f64, h: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("h_0 has no lower-order partner".into()));
    }
    if sigma == 0.0 {
        return Err(Error::InvalidArgument("derivative check is undefined at σ = 0".into()));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let numeric = (step_h(m, sigma + h) - step_h(m, sigma - h)) / (2.0 * h);
    Ok((numeric - step_h(m - 1, sigma)).abs())
}

type VectorFn = dyn Fn(&[f64; 4]) -> Vector4<f64> + Send + Sync;

/// A jump coefficient `φ_m(x)`, covariant.
#[derive(Clone)]
pub enum Coefficient {
    Constant(Vector4<f64>),
    /// `φ_β(x) = base_β + Σ_α gradient[(α, β)] x^α`.
    Affine { base: Vector4<f64>, gradient: Matrix4<f64> },
    /// Arbitrary smooth, side-effect free closure; differentiated numerically.
    Closure(Arc<VectorFn>),
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            Coefficient::Affine { base, gradient } => {
                f.debug_struct("Affine").field("base", base).field("gradient", gradient).finish()
            }
            Coefficient::Closure(_) => f.write_str("Closure(..)"),
        }
    }
}

const CLOSURE_STEP: f64 = 1e-5;

impl Coefficient {
    pub fn eval(&self, x: &[f64; 4]) -> Vector4<f64> {
        match self {
            Coefficient::Constant(v) => *v,
            Coefficient::Affine { base, gradient } => base + gradient.transpose() * Vector4::from(*x),
            Coefficient::Closure(f) => f(x),
        }
    }

    /// `∂_α φ_β` as a matrix indexed `(α, β)`.
    pub fn gradient(&self, x: &[f64; 4]) -> Matrix4<f64> {
        match self {
            Coefficient::Constant(_) => Matrix4::zeros(),
            Coefficient::Affine { gradient, .. } => *gradient,
            Coefficient::Closure(f) => {
                let mut g = Matrix4::zeros();
                for alpha in 0..4 {
                    let (mut xp, mut xm) = (*x, *x);
                    xp[alpha] += CLOSURE_STEP;
                    xm[alpha] -= CLOSURE_STEP;
                    let d = (f(&xp) - f(&xm)) / (2.0 * CLOSURE_STEP);
                    g.set_row(alpha, &d.transpose());
                }
                g
            }
        }
    }
}

/// The perturbation part of a potential series.
#[derive(Debug, Clone)]
pub struct StepSeries {
    first_index: u32,
    coefficients: Vec<(u32, Coefficient)>,
    normal: FourVector,
}

impl StepSeries {
    /// `coefficients` must have strictly increasing orders, none below `first_index`,
    /// and `first_index ≥ 2` (an order-one start would carry surface charges).
    pub fn new(first_index: u32, coefficients: Vec<(u32, Coefficient)>, normal: FourVector) -> Result<Self> {
        if first_index < 2 {
            return Err(Error::InvalidSeries(format!("first index must be ≥ 2, got {first_index}")));
        }
        let mut prev = None;
        for (m, _) in &coefficients {
            if *m < first_index {
                return Err(Error::InvalidSeries(format!("order {m} is below the first index {first_index}")));
            }
            if prev.is_some_and(|p| p >= *m) {
                return Err(Error::InvalidSeries("coefficient orders must be strictly increasing".into()));
            }
            prev = Some(*m);
        }
        Ok(Self { first_index, coefficients, normal: normal.to_covariant() })
    }

    pub fn first_index(&self) -> u32 {
        self.first_index
    }

    pub fn normal(&self) -> &FourVector {
        &self.normal
    }

    pub fn coefficients(&self) -> &[(u32, Coefficient)] {
        &self.coefficients
    }

    fn coefficient(&self, m: u32) -> Option<&Coefficient> {
        self.coefficients.iter().find(|(k, _)| *k == m).map(|(_, c)| c)
    }

    fn max_order(&self) -> u32 {
        self.coefficients.last().map_or(self.first_index, |(m, _)| *m)
    }
}

/// `A_α(x) = A⁻_α(x) + Σ_{m=l}^{truncation} φ_m(x) h_m(Σ(x))`.
pub fn potential_series<Bg, Sig>(
    series: &StepSeries,
    background: Bg,
    x: &[f64; 4],
    sigma_of_x: Sig,
    truncation: u32,
) -> Result<Vector4<f64>>
where
    Bg: Fn(&[f64; 4]) -> Vector4<f64>,
    Sig: Fn(&[f64; 4]) -> f64,
{
    if truncation < series.first_index {
        return Err(Error::TruncationBelowFirstIndex { truncation, first: series.first_index });
    }
    let sigma = sigma_of_x(x);
    let mut a = background(x);
    for (m, phi) in series.coefficients.iter().filter(|(m, _)| *m <= truncation) {
        let weight = step_h(*m, sigma);
        if weight != 0.0 {
            a += phi.eval(x) * weight;
        }
    }
    Ok(a)
}

/// One coefficient `f_m` of the field series, evaluated lazily.
#[derive(Debug, Clone)]
pub struct FieldCoefficient {
    pub order: u32,
    own: Option<Coefficient>,
    next: Option<Coefficient>,
    normal: Vector4<f64>,
}

impl FieldCoefficient {
    /// `f_{m,αβ} = φ_{m,β,α} - φ_{m,α,β} + p_α φ_{m+1,β} - p_β φ_{m+1,α}` (covariant).
    pub fn eval(&self, x: &[f64; 4]) -> Matrix4<f64> {
        let mut f = Matrix4::zeros();
        if let Some(own) = &self.own {
            let g = own.gradient(x);
            f += g - g.transpose();
        }
        if let Some(next) = &self.next {
            let v = next.eval(x);
            f += self.normal * v.transpose() - v * self.normal.transpose();
        }
        f
    }
}

/// Coefficients of the field series, from order `l - 1` up to the highest potential order.
pub fn field_coefficients(series: &StepSeries) -> Vec<FieldCoefficient> {
    let p = series.normal.components;
    (series.first_index - 1..=series.max_order())
        .map(|m| FieldCoefficient {
            order: m,
            own: if m >= series.first_index { series.coefficient(m).cloned() } else { None },
            next: series.coefficient(m + 1).cloned(),
            normal: p,
        })
        .filter(|f| f.own.is_some() || f.next.is_some())
        .collect()
}

/// Both one-sided limits of a derivative at `σ = 0` and their difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpBracketSample {
    pub left_limit: f64,
    pub right_limit: f64,
    /// `right_limit - left_limit`.
    pub jump: f64,
    /// Rounding-error bound of the stencil evaluation for this sample.
    pub tolerance: f64,
}

/// Weights `w_j` such that `Σ_j w_j f(x_j) ≈ f^{(order)}(0)` for unit-spaced nodes `x_j`.
fn stencil_weights(nodes: &[f64], order: u32) -> Vec<f64> {
    let n = nodes.len();
    let vander = DMatrix::from_fn(n, n, |i, j| nodes[j].powi(i as i32));
    let mut rhs = DVector::zeros(n);
    rhs[order as usize] = factorial(order);
    vander.lu().solve(&rhs).expect("distinct stencil nodes").iter().copied().collect()
}

/// Estimates `[d^order f/dσ^order]` at `σ = 0`.
///
/// Each side uses `order + 3` nodes spaced by `h` (the right side starts at
/// `σ = 0`, which belongs to `σ ≥ 0`; the left side starts at `-h`), so the
/// estimate is exact for piecewise polynomials of degree `order + 2`. One
/// Richardson step with `h/2` removes the leading truncation term for smooth
/// non-polynomial sides.
///
/// `tolerance` bounds the floating-point error of the combined stencil,
/// `64 ε Σ|w| max|f| / (h/2)^order` propagated through the Richardson step.
/// Truncation error of non-polynomial sides is `O(h^4)` and is not included.
pub fn extract_jump<Fn1>(f: Fn1, order: u32, h: f64) -> JumpBracketSample
where
    Fn1: Fn(f64) -> f64,
{
    assert!(h > 0.0, "stencil step must be positive");
    let npts = order as usize + 3;
    let right_nodes: Vec<f64> = (0..npts).map(|j| j as f64).collect();
    let left_nodes: Vec<f64> = (1..=npts).map(|j| -(j as f64)).collect();
    let wr = stencil_weights(&right_nodes, order);
    let wl = stencil_weights(&left_nodes, order);
    let weight_sum = wr.iter().chain(wl.iter()).map(|w| w.abs()).sum::<f64>();

    let mut fmax = 0.0f64;
    let mut side = |weights: &[f64], nodes: &[f64], step: f64| -> f64 {
        let mut acc = 0.0;
        for (w, x) in weights.iter().zip(nodes) {
            let v = f(x * step);
            fmax = fmax.max(v.abs());
            acc += w * v;
        }
        acc / step.powi(order as i32)
    };
    let right = [side(&wr, &right_nodes, h), side(&wr, &right_nodes, 0.5 * h)];
    let left = [side(&wl, &left_nodes, h), side(&wl, &left_nodes, 0.5 * h)];

    // Leading truncation error of an (order + 3)-node stencil is O(h^3).
    let gain = 8.0;
    let richardson = |coarse: f64, fine: f64| (gain * fine - coarse) / (gain - 1.0);
    let right_limit = richardson(right[0], right[1]);
    let left_limit = richardson(left[0], left[1]);

    let fine_err = 64.0 * f64::EPSILON * weight_sum * fmax / (0.5 * h).powi(order as i32);
    let tolerance = (gain + 1.0) / (gain - 1.0) * fine_err;
    JumpBracketSample { left_limit, right_limit, jump: right_limit - left_limit, tolerance }
}
