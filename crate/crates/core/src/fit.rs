//! Linear least squares on sums of powers, with nested-model uncertainties.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted condition number of the column-scaled design matrix.
pub const MAX_CONDITION: f64 = 1e13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub powers: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub condition: f64,
    pub rms_residual: f64,
}

/// Fits y ≈ Σ c_i x^{p_i}. Columns are scaled to unit norm before the SVD.
pub fn power_fit(x: &[f64], y: &[f64], powers: &[f64]) -> Result<PowerFit> {
    let rows = x.len();
    let cols = powers.len();
    if rows != y.len() {
        return Err(Error::Usage(format!("{} abscissae but {} values", rows, y.len())));
    }
    if cols == 0 || rows < cols {
        return Err(Error::IllConditioned {
            condition: f64::INFINITY,
            detail: format!("{cols} unknowns from {rows} points"),
        });
    }
    let mut a = DMatrix::from_fn(rows, cols, |r, c| x[r].powf(powers[c]));
    let scale: Vec<f64> = (0..cols).map(|c| a.column(c).norm()).collect();
    for (c, s) in scale.iter().enumerate() {
        a.column_mut(c).scale_mut(1.0 / s);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::IllConditioned {
            condition,
            detail: format!("{cols} powers {powers:?} on {rows} points"),
        });
    }
    let b = DVector::from_column_slice(y);
    let sol = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::IllConditioned {
            condition,
            detail: e.to_string(),
        })?;
    let resid = &a * &sol - &b;
    let coefficients = (0..cols).map(|c| sol[c] / scale[c]).collect();
    Ok(PowerFit {
        powers: powers.to_vec(),
        coefficients,
        condition,
        rms_residual: (resid.norm_squared() / rows as f64).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedCoefficient {
    pub power: f64,
    pub estimate: f64,
    pub uncertainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedFit {
    pub central: PowerFit,
    pub terms: usize,
    pub coefficients: Vec<FittedCoefficient>,
}

/// Fits the first `terms` powers of `power(m)`, m = 0, 1, …, and takes as the
/// uncertainty of each coefficient its largest shift when one term is
/// removed or added. Neighbouring models that cannot be fitted are skipped.
pub fn nested_power_fit(
    x: &[f64],
    y: &[f64],
    power: impl Fn(usize) -> f64,
    terms: usize,
    report: usize,
) -> Result<NestedFit> {
    let powers = |n: usize| (0..n).map(&power).collect::<Vec<_>>();
    let central = power_fit(x, y, &powers(terms))?;
    let mut neighbours = Vec::new();
    if terms > 1 {
        if let Ok(f) = power_fit(x, y, &powers(terms - 1)) {
            neighbours.push(f);
        }
    }
    if let Ok(f) = power_fit(x, y, &powers(terms + 1)) {
        neighbours.push(f);
    }
    if neighbours.is_empty() {
        return Err(Error::IllConditioned {
            condition: central.condition,
            detail: "no neighbouring model for an uncertainty estimate".into(),
        });
    }
    let report = report.min(terms);
    let coefficients = (0..report)
        .map(|i| {
            let c = central.coefficients[i];
            let u = neighbours
                .iter()
                .filter_map(|f| f.coefficients.get(i))
                .map(|v| (v - c).abs())
                .fold(0.0, f64::max);
            FittedCoefficient {
                power: central.powers[i],
                estimate: c,
                uncertainty: u,
            }
        })
        .collect();
    Ok(NestedFit {
        central,
        terms,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_powers() {
        let x: Vec<f64> = (1..=8).map(|i| 2.0 + i as f64).collect();
        let y: Vec<f64> = x.iter().map(|k| 3.0 * k - 0.5 * k.sqrt() + 0.25 / k).collect();
        let f = power_fit(&x, &y, &[1.0, 0.5, 0.0, -0.5, -1.0]).unwrap();
        let want = [3.0, -0.5, 0.0, 0.0, 0.25];
        for (c, w) in f.coefficients.iter().zip(want) {
            assert!((c - w).abs() < 1e-8, "{c} vs {w}");
        }
    }

    #[test]
    fn underdetermined_is_rejected() {
        assert!(power_fit(&[1.0, 2.0], &[1.0, 2.0], &[0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn collinear_is_ill_conditioned() {
        let x = [2.0, 2.0, 2.0, 2.0];
        let e = power_fit(&x, &[1.0, 1.0, 1.0, 1.0], &[0.0, 1.0]);
        assert!(matches!(e, Err(Error::IllConditioned { .. })));
    }
}
