//! Two-resolution comparison of the same spectral problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::SpectralResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergedLevel {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub levels: Vec<ConvergedLevel>,
    /// Indices whose error estimate exceeds the requested tolerance.
    pub flagged: Vec<usize>,
}

/// Compares two solves. With `order = Some((p, ratio))` the levels are
/// Richardson-extrapolated assuming error ∝ h^p and h_coarse/h_fine = ratio;
/// with `None` the fine value is kept and the difference is the estimate.
pub fn convergence_report(
    coarse: &SpectralResult,
    fine: &SpectralResult,
    order: Option<(f64, f64)>,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if coarse.len() != fine.len() {
        return Err(Error::Usage(format!(
            "level counts differ: {} vs {}",
            coarse.len(),
            fine.len()
        )));
    }
    let mut levels = Vec::with_capacity(fine.len());
    let mut flagged = Vec::new();
    for (i, (c, f)) in coarse.levels.iter().zip(&fine.levels).enumerate() {
        let (extrapolated, error) = match order {
            Some((p, ratio)) => {
                let r = ratio.powf(p);
                let ex = (r * f.energy - c.energy) / (r - 1.0);
                (ex, (f.energy - c.energy).abs() / (r - 1.0))
            }
            None => (f.energy, (f.energy - c.energy).abs()),
        };
        if error > tolerance {
            flagged.push(i);
        }
        levels.push(ConvergedLevel {
            coarse: c.energy,
            fine: f.energy,
            extrapolated,
            error,
        });
    }
    Ok(ConvergenceReport { levels, flagged })
}
