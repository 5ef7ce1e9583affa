//! Band gap of the lowest V₁ band from the flux (Herring) formula, for gaps
//! too small to resolve by subtracting two plane-wave eigenvalues.
//!
//! A well function φ is grown from the barrier top x = 2π towards the well
//! at x = π with the decaying boundary condition φ′ = −q φ, and
//!
//! ```text
//! ΔE ≈ 4 |φ φ′|(2π) / (2 ∫_π^{2π} φ² dx).
//! ```

use crate::error::{Error, Result};
use crate::model::v1;

const STEPS: usize = 20_000;

pub fn flux_band_gap(gamma: f64, energy: f64) -> Result<f64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let q2 = 2.0 * (v1(two_pi, gamma) - energy);
    if q2 <= 0.0 {
        return Err(Error::Domain(format!(
            "energy {energy} is not below the barrier top {gamma}"
        )));
    }
    let q = q2.sqrt();
    let h = -std::f64::consts::PI / STEPS as f64;
    let f = |x: f64, y: [f64; 2]| [y[1], 2.0 * (v1(x, gamma) - energy) * y[0]];
    let mut x = two_pi;
    let mut y = [1.0, -q];
    let flux = (y[0] * y[1]).abs();
    // Simpson weights on the RK4 nodes.
    let mut norm = y[0] * y[0];
    for i in 1..=STEPS {
        let k1 = f(x, y);
        let k2 = f(x + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(x + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for d in 0..2 {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
        x += h;
        let w = if i == STEPS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        norm += w * y[0] * y[0];
    }
    norm *= h.abs() / 3.0;
    Ok(4.0 * flux / (2.0 * norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::periodic::{periodic_edges_gamma, BlochSector, PeriodicSolveConfig};

    fn edges(gamma: f64) -> (f64, f64) {
        let p = periodic_edges_gamma(gamma, &PeriodicSolveConfig::default()).unwrap();
        let a = periodic_edges_gamma(
            gamma,
            &PeriodicSolveConfig {
                bloch_sector: BlochSector::Antiperiodic,
                ..Default::default()
            },
        )
        .unwrap();
        (p.levels[0].energy, a.levels[0].energy)
    }

    #[test]
    fn matches_direct_gap_where_resolvable() {
        for gamma in [4.5, 6.5, 8.5] {
            let (p, a) = edges(gamma);
            let g = flux_band_gap(gamma, p).unwrap();
            let rel = (g - (a - p)).abs() / (a - p);
            assert!(rel < 1e-3, "gamma {gamma}: flux {g} direct {}", a - p);
        }
    }

    #[test]
    fn deep_barrier_value() {
        // adaptive RK (rtol 1e-12) reference at the periodic edge, γ = 12.5
        let (p, _) = edges(12.5);
        let g = flux_band_gap(12.5, p).unwrap();
        assert!((g / 2.275653040312909e-11 - 1.0).abs() < 1e-6, "{g}");
    }

    #[test]
    fn rejects_energy_above_barrier() {
        assert!(flux_band_gap(1.5, 2.0).is_err());
    }
}
