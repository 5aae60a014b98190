use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{model} Lagrangian is undefined at F = {f}, G = {g}: {detail}")]
    OutOfDomain { model: &'static str, f: f64, g: f64, detail: &'static str },

    #[error("invalid unit system: {0}")]
    InvalidUnits(String),

    #[error("propagation direction has zero length")]
    ZeroDirection,

    #[error("degenerate tetrad: {0}")]
    DegenerateTetrad(String),

    #[error("series truncation {truncation} is below the first perturbation index {first}")]
    TruncationBelowFirstIndex { truncation: u32, first: u32 },

    #[error("invalid step series: {0}")]
    InvalidSeries(String),

    #[error("vanishing denominator in {0}")]
    VanishingDenominator(&'static str),

    #[error("polarization is indeterminate: both contractions vanish")]
    IndeterminatePolarization,

    #[error("no root of the {branch} branch in s ∈ [{lo}, {hi}]")]
    NoRoot { branch: &'static str, lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
