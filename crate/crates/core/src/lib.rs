//! Verification toolkit for the energy-reflection duality between
//! V₁ = ½ sin²x + γ cos x and V₂ = ½ sinh²x − γ cosh x at γ = 2j + ½.
//!
//! The same spectral data is produced by exact algebraic-sector
//! diagonalization ([`qes`]), weak-coupling perturbation theory ([`rspt`]),
//! higher-order WKB ([`wkb`]) and a brute-force Schrödinger solver
//! ([`oracle`]); [`report`] cross-checks them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod half;
pub mod model;
pub mod oracle;
pub mod qes;
pub mod report;
pub mod rspt;
pub mod series;
pub mod spectrum;
pub mod wkb;

pub use error::{Error, Result};
pub use half::HalfInt;
pub use model::{ModelParams, PotentialId};
pub use series::{PuiseuxSeries, Rational, SeriesValue};
pub use spectrum::{Level, Method, Parity, SpectralResult};
