//! Higher-order WKB for V₂ and the tunneling estimate for V₁.

pub mod contour;
pub mod potentials;
pub mod quantize;
pub mod series_fit;
pub mod tunneling;

pub use contour::{contour_integral, dunham_integrals, ContourSpec, ContourValue, WkbIntegrand, WkbPotential};
pub use potentials::{Harmonic, V2Potential};
pub use quantize::{solve_generic, solve_quantization, QuantizationProblem, WkbSolution};
pub use series_fit::{extract_energy_series, EnergySeriesFit};
pub use tunneling::{tunneling_action, TunnelingResult};
