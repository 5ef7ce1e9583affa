//! The algebraic sector: sl(2) generators, the sector matrices of V₁ and V₂,
//! their spectra, and the exact E → −E check between them.

pub mod eigen;
pub mod sector;
pub mod sl2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::model::{ModelParams, PotentialId};
use crate::spectrum::{Level, Method, SpectralResult};

pub use sector::{build_qes_matrix, QesMatrix};
pub use sl2::{sl2_generators, RatMatrix, Sl2Generators};

/// Dimension up to which the exact characteristic-polynomial route is the default.
pub const EXACT_DIM_LIMIT: usize = 3;

/// Spectrum of a sector matrix. `force_exact` selects the rational
/// characteristic polynomial regardless of size.
pub fn qes_spectrum(m: &QesMatrix, force_exact: bool) -> Result<SpectralResult> {
    if force_exact || m.dim() <= EXACT_DIM_LIMIT {
        let (poly, roots) = eigen::exact_eigenvalues(m, 1e-15)?;
        let levels = roots.into_iter().map(|(e, w)| Level::new(e, w)).collect();
        let mut res = SpectralResult::new(Method::Algebraic, levels);
        res.char_poly = Some(poly.iter().map(|c| c.to_string()).collect());
        Ok(res)
    } else {
        let roots = eigen::numeric_eigenvalues(&m.to_f64_rows())?;
        let levels = roots.into_iter().map(|(e, w)| Level::new(e, w)).collect();
        Ok(SpectralResult::new(Method::Algebraic, levels))
    }
}

/// Convenience: params → matrix → spectrum.
pub fn sector_spectrum(j: HalfInt, id: PotentialId) -> Result<SpectralResult> {
    let params = ModelParams::new(j)?;
    let m = build_qes_matrix(&params, id)?;
    qes_spectrum(&m, false)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub j: String,
    pub entries_negated: bool,
    pub v1_levels: Vec<f64>,
    pub v2_levels: Vec<f64>,
    /// max |E₂(i) + E₁(n−1−i)| / (1 + |E₁|)
    pub max_relative_deviation: f64,
    pub pass: bool,
}

/// Relative tolerance for the level-by-level reflection.
pub const DUALITY_TOL: f64 = 1e-10;

pub fn er_duality_check(j: HalfInt) -> Result<DualityReport> {
    let params = ModelParams::new(j)?;
    let m1 = build_qes_matrix(&params, PotentialId::V1)?;
    let m2 = build_qes_matrix(&params, PotentialId::V2)?;
    let n = m1.dim();
    let mut bad_entries = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let a = m1.entry(r, c);
            let b = m2.entry(r, c);
            if b != -&a {
                bad_entries.push(format!("({r},{c}): V1 {a}, V2 {b}"));
            }
        }
    }
    if !bad_entries.is_empty() {
        return Err(Error::Duality(format!(
            "j = {j}: entries not negated: {}",
            bad_entries.join("; ")
        )));
    }
    let s1 = qes_spectrum(&m1, false)?.energies();
    let s2 = qes_spectrum(&m2, false)?.energies();
    let mut worst = 0.0f64;
    let mut bad_levels = Vec::new();
    for (i, e2) in s2.iter().enumerate() {
        let e1 = s1[n - 1 - i];
        let dev = (e2 + e1).abs() / (1.0 + e1.abs());
        worst = worst.max(dev);
        if dev > DUALITY_TOL {
            bad_levels.push(format!("V2 level {i} = {e2} vs −({e1})"));
        }
    }
    if !bad_levels.is_empty() {
        return Err(Error::Duality(format!("j = {j}: {}", bad_levels.join("; "))));
    }
    Ok(DualityReport {
        j: j.to_string(),
        entries_negated: true,
        v1_levels: s1,
        v2_levels: s2,
        max_relative_deviation: worst,
        pass: true,
    })
}
