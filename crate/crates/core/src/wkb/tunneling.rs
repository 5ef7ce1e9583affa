//! Under-barrier action of V₁ between neighbouring wells and the resulting
//! width of the lowest band.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, StageExt};
use crate::model::{v1, ModelParams};
use crate::oracle::flux::flux_band_gap;
use crate::oracle::periodic::{periodic_band_edges, BlochSector, PeriodicSolveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMethod {
    /// Antiperiodic minus periodic plane-wave edge.
    Direct,
    /// Flux formula at the periodic edge.
    Flux,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunnelingResult {
    pub j: String,
    pub energy: f64,
    pub action: f64,
    /// 8√(2j + 3/2)
    pub asymptotic_value: f64,
    pub ratio: f64,
    pub band_gap: Option<f64>,
    pub gap_method: Option<GapMethod>,
    /// ln(band gap)
    pub band_width_log: Option<f64>,
}

/// ∫ₐᵇ √(2 max(V − E, 0)) dx on Chebyshev-type nodes, which absorb the
/// square-root endpoint behaviour.
pub fn barrier_integral(v: impl Fn(f64) -> f64, e: f64, a: f64, b: f64, nodes: usize) -> f64 {
    let half = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..nodes {
        let th = std::f64::consts::PI * (i as f64 + 0.5) / nodes as f64;
        let x = a + half * (1.0 - th.cos());
        let w = half * th.sin() * std::f64::consts::PI / nodes as f64;
        s += (2.0 * (v(x) - e)).max(0.0).sqrt() * w;
    }
    s
}

/// Turning point of V₁ at energy E in (π, 2π).
fn turning_point(gamma: f64, e: f64) -> Result<f64> {
    let f = |x: f64| v1(x, gamma) - e;
    let (mut lo, mut hi) = (std::f64::consts::PI, 2.0 * std::f64::consts::PI);
    if f(lo) >= 0.0 || f(hi) <= 0.0 {
        return Err(Error::Domain(format!(
            "E = {e} is not between the well bottom {} and the barrier top {}",
            v1(lo, gamma),
            v1(hi, gamma)
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if f(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// S at energy E: the barrier centred on x = 2π between wells at π and 3π.
pub fn action_at(gamma: f64, e: f64) -> Result<f64> {
    let a = turning_point(gamma, e)?;
    let b = 4.0 * std::f64::consts::PI - a;
    Ok(barrier_integral(|x| v1(x, gamma), e, a, b, 4000))
}

/// Direct gaps below this many combined eigenvalue error estimates are
/// replaced by the flux formula.
const RESOLVABLE_FACTOR: f64 = 1e3;

pub fn tunneling_action(params: &ModelParams) -> Result<TunnelingResult> {
    let gamma = params.gamma_f64();
    let cfg = PeriodicSolveConfig::default();
    let p = periodic_band_edges(params, &cfg).stage(|| format!("periodic edge at j = {}", params.j()))?;
    let ap = periodic_band_edges(
        params,
        &PeriodicSolveConfig {
            bloch_sector: BlochSector::Antiperiodic,
            ..cfg
        },
    )
    .stage(|| format!("antiperiodic edge at j = {}", params.j()))?;
    let e = p.levels[0].energy;
    let action = action_at(gamma, e)?;
    let asymptotic_value = 8.0 * (params.j().to_f64() * 2.0 + 1.5).sqrt();

    let direct = ap.levels[0].energy - e;
    let noise = p.levels[0].error + ap.levels[0].error;
    let (gap, method) = if direct > RESOLVABLE_FACTOR * noise {
        (Some(direct), Some(GapMethod::Direct))
    } else {
        match flux_band_gap(gamma, e) {
            Ok(g) => (Some(g), Some(GapMethod::Flux)),
            Err(_) => (None, None),
        }
    };
    Ok(TunnelingResult {
        j: params.j().to_string(),
        energy: e,
        action,
        asymptotic_value,
        ratio: action / asymptotic_value,
        band_gap: gap,
        gap_method: method,
        band_width_log: gap.filter(|g| *g > 0.0).map(f64::ln),
    })
}
