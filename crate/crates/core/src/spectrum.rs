//! Labeled energy lists shared by every method.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Algebraic,
    Oracle,
    Wkb,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

impl Level {
    pub fn new(energy: f64, error: f64) -> Self {
        Level {
            energy,
            error,
            parity: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub method: Method,
    /// Ascending in energy.
    pub levels: Vec<Level>,
    /// Characteristic polynomial det(λ − M), ascending coefficients as exact
    /// fractions, when the levels came from the exact route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_poly: Option<Vec<String>>,
}

impl SpectralResult {
    pub fn new(method: Method, mut levels: Vec<Level>) -> Self {
        levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        SpectralResult {
            method,
            levels,
            char_poly: None,
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Index and distance of the level closest to `energy`.
    pub fn nearest(&self, energy: f64) -> Option<(usize, f64)> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l.energy - energy).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}
