//! First-order analysis of shock fronts in nonlinear vacuum electrodynamics.
//!
//! A front `Σ(x) = 0` across which the second derivatives of the potential
//! jump must satisfy a homogeneous linear system `N φ' = 0`. Its solvability
//! fixes the admissible front normals (one quadratic per branch), the
//! polarization angle of the jump and its temporal amplitude; the front
//! normals are the null covectors of one or two optical metrics.
//!
//! Modules, bottom-up:
//!
//! * [`minkowski`]: four-vectors, field tensors, duals, invariants, units.
//! * [`lagrangian`]: Maxwell, Born, Born-Infeld and custom `L(F, G)`.
//! * [`tetrad`]: the front-adapted frame `(p, d, ω, ω̄)`.
//! * [`shockseries`]: step-function expansions and numerical jump brackets.
//! * [`jump`]: contracted background tensor, `N`, tetrad scalars, rank.
//! * [`optics`]: characteristic roots, optical metrics, polarization, λ.
//! * [`cli`]: the `nlshock` binary.
//!
//! ```
//! use nlshock::lagrangian::LagrangianModel;
//! use nlshock::minkowski::FieldTensor3P;
//! use nlshock::optics::{solve_characteristics, Background, SolverSettings};
//!
//! let field = FieldTensor3P::new([0.0, 0.0, 0.3], [0.0, 0.2, 0.1]);
//! let bg = Background::new(LagrangianModel::Born, field)?;
//! let c = solve_characteristics(&bg, [1.0, 0.0, 0.0], &SolverSettings::default())?;
//! let (plus, minus) = (c.plus?, c.minus?);
//! assert!((plus.s_root - 1.0).abs() < 1e-9);
//! assert!(minus.s_root > 1.0);
//! # Ok::<(), nlshock::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod jump;
pub mod lagrangian;
pub mod minkowski;
pub mod optics;
pub mod shockseries;
pub mod tetrad;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/lagrangians.md")]
    mod lagrangians {}
    #[doc = include_str!("../../../book/src/tetrad.md")]
    mod tetrad {}
    #[doc = include_str!("../../../book/src/jump.md")]
    mod jump {}
    #[doc = include_str!("../../../book/src/optics.md")]
    mod optics {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
