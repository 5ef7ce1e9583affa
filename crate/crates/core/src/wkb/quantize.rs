//! Dunham quantization in the unscaled coordinate:
//!
//! ```text
//! I₀ − J₂/48 + J₄/1536 = 2π (n + ½)
//! ```
//!
//! which is exact for the harmonic oscillator at every order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::wkb::contour::{dunham_integrals, ContourSpec, DunhamIntegrals, WkbPotential};
use crate::wkb::potentials::V2Potential;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationProblem {
    pub gamma: f64,
    pub n: usize,
    /// 1/(2√(2γ)), the small parameter of the scaled problem; informational.
    pub epsilon: f64,
}

impl QuantizationProblem {
    pub fn new(params: &ModelParams, n: usize) -> Self {
        let gamma = params.gamma_f64();
        QuantizationProblem {
            gamma,
            n,
            epsilon: 1.0 / (2.0 * (2.0 * gamma).sqrt()),
        }
    }

    /// The highest algebraic level of V₂, n = 2(γ − ½).
    pub fn top_level(params: &ModelParams) -> Self {
        Self::new(params, params.top_level_index())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WkbSolution {
    #[serde(rename = "E")]
    pub energy: f64,
    pub n: usize,
    pub order: u8,
    /// I₀, −J₂/48, J₄/1536 at the solution.
    pub corrections: [f64; 3],
    /// I₀/π, J₂/π, J₄/π.
    pub pi_multiple_checks: [f64; 3],
    /// Largest |Im| among the three contour integrals.
    pub max_imag_residue: f64,
    /// (quantized total)/(2π) − n: ½ under the (n + ½) convention.
    pub maslov_offset: f64,
    pub warnings: Vec<String>,
}

fn condition_value(ints: &DunhamIntegrals, order: u8) -> f64 {
    let mut t = ints.leading.value;
    if order >= 2 {
        t -= ints.eps2.value / 48.0;
    }
    if order >= 4 {
        t += ints.eps4.value / 1536.0;
    }
    t
}

fn check_order(order: u8) -> Result<()> {
    if matches!(order, 0 | 2 | 4) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("correction order {order} must be 0, 2 or 4")))
    }
}

/// Solves the quantization condition for level `n` of any two-turning-point potential.
pub fn solve_generic(pot: &dyn WkbPotential, n: usize, order: u8, spec: &ContourSpec) -> Result<WkbSolution> {
    check_order(order)?;
    let target = 2.0 * std::f64::consts::PI * (n as f64 + 0.5);
    let f = |e: f64| -> Result<f64> {
        let ints = dunham_integrals(pot, e, spec)?;
        Ok(condition_value(&ints, order) - target)
    };

    // Lowest usable energy: step up from the floor until the contour is resolvable.
    let floor = pot.energy_floor();
    let mut a = floor + 1e-3 * (1.0 + floor.abs());
    let mut fa = None;
    let mut last_err = None;
    for _ in 0..40 {
        match f(a) {
            Ok(v) => {
                fa = Some(v);
                break;
            }
            Err(e) => {
                last_err = Some(e);
                a += 0.02 * (1.0 + a.abs());
            }
        }
    }
    let mut fa = match fa {
        Some(v) => v,
        None => return Err(last_err.unwrap()),
    };
    if fa > 0.0 {
        return Err(Error::Bracket(format!(
            "level {n} lies below E = {a}, outside the two-turning-point window"
        )));
    }
    let mut step = 0.05 * (1.0 + a.abs());
    let mut b = a + step;
    let mut fb = f(b)?;
    let mut expansions = 0;
    while fb <= 0.0 {
        a = b;
        fa = fb;
        step *= 1.6;
        b = a + step;
        fb = f(b)?;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::Bracket(format!("no sign change found for level {n} up to E = {b}")));
        }
    }

    // Bisection, then safeguarded secant.
    while b - a > 1e-9 * (1.0 + a.abs()) {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm > 0.0 {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..20 {
        if f1 == f0 {
            break;
        }
        let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 > a && x2 < b) {
            x2 = 0.5 * (a + b);
        }
        let f2 = f(x2)?;
        if f2 > 0.0 {
            b = x2;
        } else {
            a = x2;
        }
        let done = (x2 - x1).abs() < 1e-13 * (1.0 + x2.abs());
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if done || f2 == 0.0 {
            break;
        }
    }

    let e = x1;
    let ints = dunham_integrals(pot, e, spec)?;
    let c = [ints.leading.value, -ints.eps2.value / 48.0, ints.eps4.value / 1536.0];
    let mut warnings = Vec::new();
    if order >= 4 && c[2].abs() >= c[1].abs() && c[1] != 0.0 {
        warnings.push(format!(
            "asymptotic breakdown: |ε⁴ term| {:.3e} ≥ |ε² term| {:.3e}",
            c[2].abs(),
            c[1].abs()
        ));
    }
    let total = condition_value(&ints, order);
    Ok(WkbSolution {
        energy: e,
        n,
        order,
        corrections: c,
        pi_multiple_checks: [
            ints.leading.pi_multiple,
            ints.eps2.pi_multiple,
            ints.eps4.pi_multiple,
        ],
        max_imag_residue: ints
            .leading
            .imag
            .abs()
            .max(ints.eps2.imag.abs())
            .max(ints.eps4.imag.abs()),
        maslov_offset: total / (2.0 * std::f64::consts::PI) - n as f64,
        warnings,
    })
}

/// Level `problem.n` of V₂ at the given correction order.
pub fn solve_quantization(problem: &QuantizationProblem, order: u8) -> Result<WkbSolution> {
    solve_quantization_with(problem, order, &ContourSpec::default())
}

pub fn solve_quantization_with(problem: &QuantizationProblem, order: u8, spec: &ContourSpec) -> Result<WkbSolution> {
    let pot = V2Potential { gamma: problem.gamma };
    solve_generic(&pot, problem.n, order, spec)
}
