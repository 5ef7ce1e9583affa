//! Brute-force Schrödinger eigensolvers used as ground truth: plane waves for
//! the periodic V₁, a sinc (or finite-difference) grid for the bound V₂.

pub mod bound;
pub mod convergence;
pub mod flux;
pub mod periodic;

pub use bound::{bound_levels_on_grid, bound_states, bound_states_gamma, BoundGrid, BoundSolveConfig, Discretization};
pub use convergence::{convergence_report, ConvergenceReport};
pub use flux::flux_band_gap;
pub use periodic::{periodic_band_edges, periodic_edges_gamma, BlochSector, PeriodicSolveConfig};
