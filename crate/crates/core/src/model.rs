//! The dual pair
//!
//! V₁(x) = ½ sin²x + γ cos x,   V₂(x) = ½ sinh²x − γ cosh x,   γ = 2j + ½,
//!
//! with Hamiltonian −½ d²/dx² + V and κ = γ + 1.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::series::{rat, rational_to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialId {
    V1,
    V2,
}

impl fmt::Display for PotentialId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialId::V1 => write!(f, "v1"),
            PotentialId::V2 => write!(f, "v2"),
        }
    }
}

impl FromStr for PotentialId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "v1" => Ok(PotentialId::V1),
            "v2" => Ok(PotentialId::V2),
            other => Err(Error::Parameter(format!("unknown potential {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    j: HalfInt,
    gamma: Rational,
    kappa: Rational,
}

impl ModelParams {
    pub fn new(j: HalfInt) -> Result<Self> {
        if j < HalfInt::ZERO {
            return Err(Error::Parameter(format!("j = {j} must be nonnegative")));
        }
        let gamma = j.to_rational() * rat(2, 1) + rat(1, 2);
        let kappa = &gamma + rat(1, 1);
        Ok(ModelParams { j, gamma, kappa })
    }

    /// Inverts γ = 2j + ½; fails unless j comes out a nonnegative half-integer.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        let j = HalfInt::from_f64((gamma - 0.5) / 2.0)
            .map_err(|_| Error::Parameter(format!("gamma = {gamma} is not 2j + 1/2 for half-integer j")))?;
        Self::new(j)
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn gamma(&self) -> &BigRational {
        &self.gamma
    }

    pub fn kappa(&self) -> &BigRational {
        &self.kappa
    }

    pub fn gamma_f64(&self) -> f64 {
        rational_to_f64(&self.gamma)
    }

    pub fn kappa_f64(&self) -> f64 {
        rational_to_f64(&self.kappa)
    }

    /// Dimension 2j + 1 of the algebraic sector.
    pub fn sector_dim(&self) -> usize {
        (self.j.twice() + 1) as usize
    }

    /// Index n = 2(γ − ½) of the highest algebraic level of V₂ in its full spectrum.
    pub fn top_level_index(&self) -> usize {
        (2 * self.j.twice()) as usize
    }
}

impl Serialize for ModelParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw {
            j: String,
            gamma: String,
            kappa: String,
        }
        Raw {
            j: self.j.to_string(),
            gamma: self.gamma.to_string(),
            kappa: self.kappa.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModelParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            j: String,
        }
        let raw = Raw::deserialize(d)?;
        let j: HalfInt = raw.j.parse().map_err(serde::de::Error::custom)?;
        ModelParams::new(j).map_err(serde::de::Error::custom)
    }
}

pub fn v1(x: f64, gamma: f64) -> f64 {
    let s = x.sin();
    0.5 * s * s + gamma * x.cos()
}

pub fn v2(x: f64, gamma: f64) -> f64 {
    let s = x.sinh();
    0.5 * s * s - gamma * x.cosh()
}
