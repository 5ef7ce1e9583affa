//! Band edges of −½ d²/dx² + V₁ on the plane-wave basis e^{i(m+k)x}, |m| ≤ N.
//!
//! ½ sin²x + γ cos x = ¼ + (γ/2)(e^{ix} + e^{−ix}) − ⅛(e^{2ix} + e^{−2ix}),
//! so the Hamiltonian is real symmetric and pentadiagonal.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectrum::{Level, Method, SpectralResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlochSector {
    /// k = 0
    Periodic,
    /// k = ½
    Antiperiodic,
}

impl BlochSector {
    fn shift(self) -> f64 {
        match self {
            BlochSector::Periodic => 0.0,
            BlochSector::Antiperiodic => 0.5,
        }
    }
}

impl FromStr for BlochSector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" | "periodic" => Ok(BlochSector::Periodic),
            "ap" | "antiperiodic" => Ok(BlochSector::Antiperiodic),
            other => Err(Error::Parameter(format!("unknown Bloch sector {other:?}"))),
        }
    }
}

impl fmt::Display for BlochSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlochSector::Periodic => write!(f, "p"),
            BlochSector::Antiperiodic => write!(f, "ap"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSolveConfig {
    pub plane_wave_cutoff: usize,
    pub bloch_sector: BlochSector,
    pub count: usize,
    /// Largest accepted change of any level under N → 2N.
    pub tolerance: f64,
}

impl Default for PeriodicSolveConfig {
    fn default() -> Self {
        PeriodicSolveConfig {
            plane_wave_cutoff: 64,
            bloch_sector: BlochSector::Periodic,
            count: 1,
            tolerance: 1e-9,
        }
    }
}

fn eigenvalues(gamma: f64, cutoff: usize, shift: f64) -> Vec<f64> {
    let dim = 2 * cutoff + 1;
    let h = DMatrix::from_fn(dim, dim, |r, c| {
        let d = r.abs_diff(c);
        match d {
            0 => {
                let m = r as f64 - cutoff as f64 + shift;
                0.5 * m * m + 0.25
            }
            1 => gamma / 2.0,
            2 => -0.125,
            _ => 0.0,
        }
    });
    let mut e: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Lowest `count` levels in the chosen sector for an arbitrary real γ.
pub fn periodic_edges_gamma(gamma: f64, cfg: &PeriodicSolveConfig) -> Result<SpectralResult> {
    if cfg.plane_wave_cutoff < 8 {
        return Err(Error::Config(format!(
            "plane-wave cutoff {} is below the minimum of 8",
            cfg.plane_wave_cutoff
        )));
    }
    if cfg.count == 0 || cfg.count > 2 * cfg.plane_wave_cutoff + 1 {
        return Err(Error::Config(format!(
            "cannot return {} levels from cutoff {}",
            cfg.count, cfg.plane_wave_cutoff
        )));
    }
    let shift = cfg.bloch_sector.shift();
    let coarse = eigenvalues(gamma, cfg.plane_wave_cutoff, shift);
    let fine = eigenvalues(gamma, 2 * cfg.plane_wave_cutoff, shift);
    let mut levels = Vec::with_capacity(cfg.count);
    for i in 0..cfg.count {
        let diff = (fine[i] - coarse[i]).abs();
        if diff > cfg.tolerance * (1.0 + fine[i].abs()) {
            return Err(Error::Resolution(format!(
                "level {i} moved by {diff:.3e} under cutoff {} → {}",
                cfg.plane_wave_cutoff,
                2 * cfg.plane_wave_cutoff
            )));
        }
        let floor = 8.0 * f64::EPSILON * (gamma.abs() + fine[i].abs() + 1.0) * (fine.len() as f64).sqrt();
        levels.push(Level::new(fine[i], diff.max(floor)));
    }
    Ok(SpectralResult::new(Method::Oracle, levels))
}

pub fn periodic_band_edges(params: &ModelParams, cfg: &PeriodicSolveConfig) -> Result<SpectralResult> {
    periodic_edges_gamma(params.gamma_f64(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::half::HalfInt;

    fn cfg(sector: BlochSector, count: usize) -> PeriodicSolveConfig {
        PeriodicSolveConfig {
            bloch_sector: sector,
            count,
            ..Default::default()
        }
    }

    #[test]
    fn trivial_ground_state() {
        let p = ModelParams::new(HalfInt::ZERO).unwrap();
        let s = periodic_band_edges(&p, &cfg(BlochSector::Periodic, 1)).unwrap();
        assert!(s.levels[0].energy.abs() < 1e-12);
    }

    #[test]
    fn small_sectors() {
        let p = ModelParams::new(HalfInt::HALF).unwrap();
        let s = periodic_band_edges(&p, &cfg(BlochSector::Periodic, 1)).unwrap();
        assert!((s.levels[0].energy - (1.0 - 17f64.sqrt()) / 4.0).abs() < 1e-12);
        let p = ModelParams::new(HalfInt::ONE).unwrap();
        let s = periodic_band_edges(&p, &cfg(BlochSector::Periodic, 1)).unwrap();
        assert!((s.levels[0].energy + 1.6236516671378851).abs() < 1e-12);
    }

    #[test]
    fn periodic_below_antiperiodic() {
        for twice in [1, 4, 12] {
            let p = ModelParams::new(HalfInt::from_twice(twice)).unwrap();
            let a = periodic_band_edges(&p, &cfg(BlochSector::Periodic, 1)).unwrap();
            let b = periodic_band_edges(&p, &cfg(BlochSector::Antiperiodic, 1)).unwrap();
            assert!(a.levels[0].energy <= b.levels[0].energy);
        }
    }

    #[test]
    fn rejects_small_cutoff() {
        let c = PeriodicSolveConfig {
            plane_wave_cutoff: 4,
            ..Default::default()
        };
        assert!(matches!(periodic_edges_gamma(1.0, &c), Err(Error::Config(_))));
    }
}
