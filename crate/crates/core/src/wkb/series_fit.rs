//! Large-γ expansion of the highest algebraic level of V₂ extracted from
//! WKB energies by a least-squares fit in powers κ^{(2−m)/2}.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, StageExt};
use crate::fit::{nested_power_fit, FittedCoefficient};
use crate::model::ModelParams;
use crate::wkb::quantize::{solve_quantization, QuantizationProblem};

/// γ = 8.5, 9.5, …, 32.5.
pub fn default_fit_gammas() -> Vec<f64> {
    (0..25).map(|i| 8.5 + i as f64).collect()
}

pub const DEFAULT_FIT_TERMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySeriesFit {
    pub gammas: Vec<f64>,
    pub energies: Vec<f64>,
    pub order: u8,
    pub terms: usize,
    pub condition: f64,
    pub rms_residual: f64,
    /// Coefficients of κ^1, κ^{1/2}, κ^0, κ^{−1/2}, … with uncertainties.
    pub coefficients: Vec<FittedCoefficient>,
}

/// WKB energies of the top algebraic level of V₂ at each γ (each must be 2j + ½).
pub fn top_level_energies(gammas: &[f64], order: u8) -> Result<Vec<f64>> {
    gammas
        .par_iter()
        .map(|&g| {
            let params = ModelParams::from_gamma(g)?;
            let sol = solve_quantization(&QuantizationProblem::top_level(&params), order)
                .stage(|| format!("WKB solve at gamma = {g}"))?;
            Ok(sol.energy)
        })
        .collect()
}

/// Fits E⋆(κ) ≈ Σ_{m<terms} c_m κ^{(2−m)/2}; `terms` defaults to
/// min(10, #points − 2).
pub fn fit_energy_series(gammas: &[f64], energies: &[f64], order: u8, terms: Option<usize>) -> Result<EnergySeriesFit> {
    if gammas.len() < 4 {
        return Err(Error::Parameter(format!(
            "at least 4 gamma values are needed, got {}",
            gammas.len()
        )));
    }
    let terms = terms.unwrap_or_else(|| DEFAULT_FIT_TERMS.min(gammas.len() - 2));
    let kappas: Vec<f64> = gammas.iter().map(|g| g + 1.0).collect();
    let fit = nested_power_fit(&kappas, energies, |m| (2.0 - m as f64) / 2.0, terms, terms.min(6))?;
    Ok(EnergySeriesFit {
        gammas: gammas.to_vec(),
        energies: energies.to_vec(),
        order,
        terms,
        condition: fit.central.condition,
        rms_residual: fit.central.rms_residual,
        coefficients: fit.coefficients,
    })
}

pub fn extract_energy_series(gammas: &[f64], order: u8, terms: Option<usize>) -> Result<EnergySeriesFit> {
    let energies = top_level_energies(gammas, order)?;
    fit_energy_series(gammas, &energies, order, terms)
}
