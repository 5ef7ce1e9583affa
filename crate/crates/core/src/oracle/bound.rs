//! Bound states of −½ d²/dx² + V₂ on a truncated symmetric interval [−L, L].
//!
//! The default discretization is the sinc (Whittaker cardinal) grid, which
//! converges exponentially for smooth V₂. Second-order finite differences
//! with Richardson extrapolation are kept for comparison.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{v2, ModelParams};
use crate::spectrum::{Level, Method, Parity, SpectralResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Discretization {
    Sinc,
    Fd,
}

impl FromStr for Discretization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sinc" => Ok(Discretization::Sinc),
            "fd" => Ok(Discretization::Fd),
            other => Err(Error::Parameter(format!("unknown discretization {other:?}"))),
        }
    }
}

impl fmt::Display for Discretization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discretization::Sinc => write!(f, "sinc"),
            Discretization::Fd => write!(f, "fd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSolveConfig {
    /// L; chosen automatically when absent.
    pub half_width: Option<f64>,
    /// Number of grid intervals on [−L, L] (even); automatic when absent.
    pub grid_points: Option<usize>,
    pub discretization: Discretization,
    pub count: usize,
    /// Required V₂(L) − E_max.
    pub safety_margin: f64,
    /// Required ∫ √(2(V₂ − E_max)) from the outer turning point to L.
    pub decay_exponent: f64,
    /// Largest accepted error estimate, relative to 1 + |E|.
    pub tolerance: f64,
}

impl Default for BoundSolveConfig {
    fn default() -> Self {
        BoundSolveConfig {
            half_width: None,
            grid_points: None,
            discretization: Discretization::Sinc,
            count: 1,
            safety_margin: 25.0,
            decay_exponent: 30.0,
            tolerance: 1e-9,
        }
    }
}

/// Outer turning point of V₂ at energy E (always exists).
pub fn outer_turning_point(gamma: f64, e: f64) -> f64 {
    let disc = (gamma * gamma + 1.0 + 2.0 * e).max(0.0);
    (gamma + disc.sqrt()).max(1.0).acosh()
}

fn decay_integral(gamma: f64, e: f64, from: f64, to: f64) -> f64 {
    if to <= from {
        return 0.0;
    }
    let n = 400;
    let h = (to - from) / n as f64;
    let f = |x: f64| (2.0 * (v2(x, gamma) - e)).max(0.0).sqrt();
    let mut s = f(from) + f(to);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(from + i as f64 * h);
    }
    s * h / 3.0
}

/// Smallest L meeting both truncation criteria for levels up to `e_max`.
pub fn required_half_width(gamma: f64, e_max: f64, cfg: &BoundSolveConfig) -> f64 {
    let xt = outer_turning_point(gamma, e_max);
    let mut l = xt;
    while v2(l, gamma) - e_max < cfg.safety_margin
        || decay_integral(gamma, e_max, xt, l) < cfg.decay_exponent
    {
        l += 0.02;
    }
    l
}

fn potential_floor(gamma: f64) -> f64 {
    -(gamma * gamma + 1.0) / 2.0
}

fn sinc_spacing(gamma: f64, e_max: f64) -> f64 {
    let p = (2.0 * (e_max - potential_floor(gamma))).max(1.0).sqrt();
    (std::f64::consts::PI / (2.5 * p)).min(0.05)
}

fn even_at_least(x: f64) -> usize {
    let n = x.ceil() as usize;
    (n + n % 2).max(8)
}

struct RawLevels {
    energies: Vec<f64>,
    parities: Vec<Parity>,
}

/// Ascending order; within a tunnelling doublet split by less than rounding
/// error the even state (the nodeless combination) goes first.
fn order_levels(all: &mut [(f64, Parity)]) {
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    for i in 1..all.len() {
        let tie = 1e-12 * (1.0 + all[i].0.abs());
        if all[i].1 == Parity::Even && all[i - 1].1 == Parity::Odd && all[i].0 - all[i - 1].0 < tie {
            all.swap(i, i - 1);
        }
    }
}

fn sinc_kinetic(d: usize, h: f64) -> f64 {
    if d == 0 {
        std::f64::consts::PI * std::f64::consts::PI / (6.0 * h * h)
    } else {
        let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign / (h * h * (d * d) as f64)
    }
}

fn lowest_symmetric(m: DMatrix<f64>, count: usize) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e.truncate(count);
    e
}

/// Sinc grid x_i = i·h, |i| ≤ K, h = 2L/M with K = M/2 − 1, reduced to the
/// even and odd subspaces so that parity is exact even for tunnelling
/// doublets that are degenerate to machine precision.
fn sinc_levels(gamma: f64, l: f64, intervals: usize, count: usize) -> Result<RawLevels> {
    let h = 2.0 * l / intervals as f64;
    let k = intervals / 2 - 1;
    if count > 2 * k + 1 {
        return Err(Error::Config(format!("{count} levels requested from {} grid points", 2 * k + 1)));
    }
    let t = |d: usize| sinc_kinetic(d, h);
    let v = |i: usize| v2(i as f64 * h, gamma);
    let sqrt2 = std::f64::consts::SQRT_2;
    // even: basis δ₀ and (δ₊ᵢ + δ₋ᵢ)/√2, i = 1..K
    let even = DMatrix::from_fn(k + 1, k + 1, |r, c| {
        let base = match (r, c) {
            (0, 0) => t(0),
            (0, _) => sqrt2 * t(c),
            (_, 0) => sqrt2 * t(r),
            _ => t(r.abs_diff(c)) + t(r + c),
        };
        if r == c {
            base + v(r)
        } else {
            base
        }
    });
    // odd: (δ₊ᵢ − δ₋ᵢ)/√2, i = 1..K
    let odd = DMatrix::from_fn(k, k, |r, c| {
        let (r1, c1) = (r + 1, c + 1);
        let base = t(r1.abs_diff(c1)) - t(r1 + c1);
        if r == c {
            base + v(r1)
        } else {
            base
        }
    });
    let mut all: Vec<(f64, Parity)> = lowest_symmetric(even, count)
        .into_iter()
        .map(|e| (e, Parity::Even))
        .chain(lowest_symmetric(odd, count).into_iter().map(|e| (e, Parity::Odd)))
        .collect();
    order_levels(&mut all);
    all.truncate(count);
    Ok(RawLevels {
        energies: all.iter().map(|p| p.0).collect(),
        parities: all.iter().map(|p| p.1).collect(),
    })
}

/// Number of eigenvalues below x of the symmetric tridiagonal (d, e).
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = f64::EPSILON * (d[i].abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiagonal_lowest(d: &[f64], e: &[f64], count: usize) -> Vec<f64> {
    let mut lo0 = f64::INFINITY;
    let mut hi0 = f64::NEG_INFINITY;
    for i in 0..d.len() {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + e.get(i).map_or(0.0, |x| x.abs());
        lo0 = lo0.min(d[i] - r);
        hi0 = hi0.max(d[i] + r);
    }
    (0..count.min(d.len()))
        .map(|k| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(d, e, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Finite differences on x_i = i·h, |i| ≤ K, Dirichlet at ±(K+1)h, split
/// into even and odd half-problems so parity is exact by construction.
fn fd_levels(gamma: f64, l: f64, intervals: usize, count: usize) -> Result<RawLevels> {
    let k = intervals / 2 - 1;
    let h = l / (k + 1) as f64;
    let kin = 1.0 / (h * h);
    let off = -0.5 / (h * h);
    let diag: Vec<f64> = (0..=k).map(|i| kin + v2(i as f64 * h, gamma)).collect();
    let mut even_off = vec![off; k];
    if k > 0 {
        even_off[0] = off * std::f64::consts::SQRT_2;
    }
    let even = tridiagonal_lowest(&diag, &even_off, count);
    let odd = tridiagonal_lowest(&diag[1..], &vec![off; k.saturating_sub(1)], count);
    let mut all: Vec<(f64, Parity)> = even
        .into_iter()
        .map(|e| (e, Parity::Even))
        .chain(odd.into_iter().map(|e| (e, Parity::Odd)))
        .collect();
    order_levels(&mut all);
    if all.len() < count {
        return Err(Error::Config(format!("{count} levels requested from {} grid points", 2 * k + 1)));
    }
    all.truncate(count);
    Ok(RawLevels {
        energies: all.iter().map(|p| p.0).collect(),
        parities: all.iter().map(|p| p.1).collect(),
    })
}

/// Resolved grid parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundGrid {
    pub half_width: f64,
    pub intervals: usize,
}

fn solve_at(gamma: f64, grid: BoundGrid, cfg: &BoundSolveConfig) -> Result<(RawLevels, RawLevels)> {
    match cfg.discretization {
        Discretization::Sinc => {
            let fine = even_at_least(grid.intervals as f64 * 1.25);
            Ok((
                sinc_levels(gamma, grid.half_width, grid.intervals, cfg.count)?,
                sinc_levels(gamma, grid.half_width, fine, cfg.count)?,
            ))
        }
        Discretization::Fd => Ok((
            fd_levels(gamma, grid.half_width, grid.intervals, cfg.count)?,
            fd_levels(gamma, grid.half_width, 2 * grid.intervals, cfg.count)?,
        )),
    }
}

fn default_intervals(gamma: f64, l: f64, e_max: f64, d: Discretization) -> usize {
    match d {
        Discretization::Sinc => even_at_least(2.0 * l / sinc_spacing(gamma, e_max)),
        Discretization::Fd => even_at_least(2.0 * l / 0.005),
    }
}

/// Lowest `count` bound states for arbitrary real γ, with the grid used.
pub fn bound_states_gamma(gamma: f64, cfg: &BoundSolveConfig) -> Result<(SpectralResult, BoundGrid)> {
    if cfg.count == 0 {
        return Err(Error::Config("count must be positive".into()));
    }
    if let Some(m) = cfg.grid_points {
        if m % 2 != 0 || m < 8 {
            return Err(Error::Config(format!("grid_points = {m} must be even and ≥ 8")));
        }
    }
    // Rough upper estimate of the highest requested level: the n-th level of
    // the wells' harmonic approximation, capped below by the barrier.
    let mut e_guess = potential_floor(gamma) + (cfg.count as f64 + 1.0) * gamma.max(1.0);
    let mut last = None;
    for _ in 0..6 {
        let l = match cfg.half_width {
            Some(l) => l,
            None => required_half_width(gamma, e_guess, cfg),
        };
        let intervals = cfg
            .grid_points
            .unwrap_or_else(|| default_intervals(gamma, l, e_guess, cfg.discretization));
        let grid = BoundGrid {
            half_width: l,
            intervals,
        };
        let (coarse, fine) = solve_at(gamma, grid, cfg)?;
        let e_max = *fine.energies.last().unwrap();
        let fits = v2(l, gamma) - e_max >= cfg.safety_margin;
        if cfg.half_width.is_some() && !fits {
            return Err(Error::Config(format!(
                "half-width {l} leaves V2(L) − E_max = {:.3} below the margin {}",
                v2(l, gamma) - e_max,
                cfg.safety_margin
            )));
        }
        let needs = cfg.half_width.is_none()
            && (e_max > e_guess || decay_integral(gamma, e_max, outer_turning_point(gamma, e_max), l) < cfg.decay_exponent);
        last = Some((coarse, fine, grid));
        if !needs {
            break;
        }
        e_guess = e_max + 1.0;
    }
    let (coarse, fine, grid) = last.expect("at least one pass");
    let mut levels = Vec::with_capacity(cfg.count);
    for i in 0..cfg.count {
        let (value, err) = match cfg.discretization {
            Discretization::Sinc => {
                let e = fine.energies[i];
                let floor = 64.0 * f64::EPSILON * (1.0 + e.abs() + gamma * gamma);
                (e, (e - coarse.energies[i]).abs().max(floor))
            }
            Discretization::Fd => {
                let (c, f) = (coarse.energies[i], fine.energies[i]);
                ((4.0 * f - c) / 3.0, (f - c).abs() / 3.0)
            }
        };
        if err > cfg.tolerance * (1.0 + value.abs()) {
            return Err(Error::Resolution(format!(
                "V2 level {i} at gamma = {gamma}: error estimate {err:.3e} exceeds tolerance {:.1e} ({} grid, L = {:.3}, {} intervals)",
                cfg.tolerance, cfg.discretization, grid.half_width, grid.intervals
            )));
        }
        if fine.parities[i] != coarse.parities[i] {
            return Err(Error::Resolution(format!("parity of V2 level {i} changes under refinement")));
        }
        let mut lvl = Level::new(value, err);
        lvl.parity = Some(fine.parities[i]);
        levels.push(lvl);
    }
    Ok((SpectralResult::new(Method::Oracle, levels), grid))
}

pub fn bound_states(params: &ModelParams, cfg: &BoundSolveConfig) -> Result<SpectralResult> {
    Ok(bound_states_gamma(params.gamma_f64(), cfg)?.0)
}

/// Raw eigenvalues on one explicit grid, without extrapolation.
pub fn bound_levels_on_grid(gamma: f64, grid: BoundGrid, d: Discretization, count: usize) -> Result<Vec<f64>> {
    match d {
        Discretization::Sinc => Ok(sinc_levels(gamma, grid.half_width, grid.intervals, count)?.energies),
        Discretization::Fd => Ok(fd_levels(gamma, grid.half_width, grid.intervals, count)?.energies),
    }
}
