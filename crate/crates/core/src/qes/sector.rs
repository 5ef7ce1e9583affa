//! Algebraic-sector matrices by gauge substitution.
//!
//! With c = cos x (V₁) or c = cosh x (V₂) and ψ = e^{s·c} u(c), the operator
//! −½ d²/dx² + V becomes A(c) u″ + B(c) u′ + C(c) u, where
//!
//! ```text
//! A = −½ c′²,   B = −½ c″ − s c′²,   C = V − ½ (s c″ + c′²)
//! ```
//!
//! and c′², c″ and V are polynomials in c. Reading the action off on c^k gives
//! the matrix; the image of c^(2j) must not leave the degree-2j space.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PotentialId};
use crate::qes::sl2::RatMatrix;
use crate::series::{rat, Rational};

/// Polynomial in c, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<Rational>);

impl Poly {
    fn new(coeffs: Vec<Rational>) -> Self {
        Poly(coeffs)
    }

    fn get(&self, d: usize) -> Rational {
        self.0.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    fn degree_bound(&self) -> usize {
        self.0.len()
    }

    fn lin(&self, a: &Rational, other: &Poly, b: &Rational) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|d| a * self.get(d) + b * other.get(d)).collect())
    }
}

/// c′², c″ and V as polynomials in c.
struct Geometry {
    deriv_sq: Poly,
    second: Poly,
    potential: Poly,
}

fn geometry(params: &ModelParams, id: PotentialId) -> Geometry {
    let g = params.gamma().clone();
    match id {
        // sin²x = 1 − c², (cos x)″ = −c, V₁ = ½(1 − c²) + γc
        PotentialId::V1 => Geometry {
            deriv_sq: Poly::new(vec![rat(1, 1), rat(0, 1), rat(-1, 1)]),
            second: Poly::new(vec![rat(0, 1), rat(-1, 1)]),
            potential: Poly::new(vec![rat(1, 2), g, rat(-1, 2)]),
        },
        // sinh²x = c² − 1, (cosh x)″ = c, V₂ = ½(c² − 1) − γc
        PotentialId::V2 => Geometry {
            deriv_sq: Poly::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]),
            second: Poly::new(vec![rat(0, 1), rat(1, 1)]),
            potential: Poly::new(vec![rat(-1, 2), -g, rat(1, 2)]),
        },
    }
}

/// Result of applying the gauge-rotated operator to each monomial c^k, k ≤ 2j.
#[derive(Debug, Clone)]
pub struct GaugeAction {
    /// `columns[k][d]` is the coefficient of c^d in the image of c^k.
    pub columns: Vec<Vec<Rational>>,
    /// Coefficient of c^(2j+1) in the image of c^(2j).
    pub overflow: Rational,
}

/// Applies the operator with gauge exponent `sign`·c to the monomial basis.
pub fn gauge_action(params: &ModelParams, id: PotentialId, sign: i64) -> GaugeAction {
    let geo = geometry(params, id);
    let s = rat(sign, 1);
    let zero = rat(0, 1);
    let a = geo.deriv_sq.lin(&rat(-1, 2), &geo.deriv_sq, &zero);
    let b = geo.second.lin(&rat(-1, 2), &geo.deriv_sq, &(-&s));
    let c = geo
        .potential
        .lin(&rat(1, 1), &geo.second.lin(&s, &geo.deriv_sq, &rat(1, 1)), &rat(-1, 2));

    let dim = params.sector_dim();
    let width = dim + a.degree_bound().max(b.degree_bound()).max(c.degree_bound());
    let mut columns = Vec::with_capacity(dim);
    for k in 0..dim {
        let kk = k as i64;
        let mut image = vec![Rational::zero(); width];
        if k >= 2 {
            let f = rat(kk * (kk - 1), 1);
            for (d, coef) in a.0.iter().enumerate() {
                image[d + k - 2] += coef * &f;
            }
        }
        if k >= 1 {
            let f = rat(kk, 1);
            for (d, coef) in b.0.iter().enumerate() {
                image[d + k - 1] += coef * &f;
            }
        }
        for (d, coef) in c.0.iter().enumerate() {
            image[d + k] += coef;
        }
        columns.push(image);
    }
    let overflow = columns[dim - 1][dim].clone();
    GaugeAction { columns, overflow }
}

/// The (2j+1)-dimensional algebraic-sector Hamiltonian in the monomial basis
/// {1, c, …, c^(2j)}, stored by bands: one below the diagonal, two above.
#[derive(Debug, Clone, PartialEq)]
pub struct QesMatrix {
    pub params: ModelParams,
    pub potential: PotentialId,
    lower: Vec<Rational>,
    diag: Vec<Rational>,
    upper1: Vec<Rational>,
    upper2: Vec<Rational>,
}

impl QesMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Rational {
        let n = self.dim();
        if row >= n || col >= n {
            return Rational::zero();
        }
        if row == col + 1 {
            self.lower[col].clone()
        } else if row == col {
            self.diag[row].clone()
        } else if col == row + 1 {
            self.upper1[row].clone()
        } else if col == row + 2 {
            self.upper2[row].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn to_dense(&self) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n);
        for r in 0..n {
            for c in r.saturating_sub(1)..(r + 3).min(n) {
                m.set(r, c, self.entry(r, c));
            }
        }
        m
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| crate::series::rational_to_f64(&self.entry(r, c)))
                    .collect()
            })
            .collect()
    }

    pub fn negated(&self) -> QesMatrix {
        let neg = |v: &Vec<Rational>| v.iter().map(|x| -x).collect::<Vec<_>>();
        QesMatrix {
            params: self.params.clone(),
            potential: self.potential,
            lower: neg(&self.lower),
            diag: neg(&self.diag),
            upper1: neg(&self.upper1),
            upper2: neg(&self.upper2),
        }
    }

    /// Rows of exact fractions, comma separated.
    pub fn to_csv(&self) -> String {
        let n = self.dim();
        let mut out = String::new();
        for r in 0..n {
            let row: Vec<String> = (0..n).map(|c| self.entry(r, c).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Builds the sector matrix with the closing gauge e^{−c}.
pub fn build_qes_matrix(params: &ModelParams, id: PotentialId) -> Result<QesMatrix> {
    let action = gauge_action(params, id, -1);
    let dim = params.sector_dim();
    if !action.overflow.is_zero() {
        return Err(Error::Closure {
            degree: dim,
            coefficient: action.overflow.to_string(),
        });
    }
    let mut lower = Vec::with_capacity(dim.saturating_sub(1));
    let mut diag = Vec::with_capacity(dim);
    let mut upper1 = Vec::with_capacity(dim.saturating_sub(1));
    let mut upper2 = Vec::with_capacity(dim.saturating_sub(2));
    for (k, image) in action.columns.iter().enumerate() {
        for (d, coef) in image.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let in_band = d + 1 == k + 2 || d == k || d + 1 == k || d + 2 == k;
            if !in_band || d >= dim {
                return Err(Error::Closure {
                    degree: d,
                    coefficient: format!("{coef} (from c^{k})"),
                });
            }
        }
        diag.push(image[k].clone());
        if k + 1 < dim {
            lower.push(image[k + 1].clone());
        }
        if k >= 1 {
            upper1.push(image[k - 1].clone());
        }
        if k >= 2 {
            upper2.push(image[k - 2].clone());
        }
    }
    Ok(QesMatrix {
        params: params.clone(),
        potential: id,
        lower,
        diag,
        upper1,
        upper2,
    })
}

/// Largest |entry|, used to scale tolerances.
pub fn max_abs_entry(m: &QesMatrix) -> Rational {
    let mut best = Rational::zero();
    for r in 0..m.dim() {
        for c in r.saturating_sub(1)..(r + 3).min(m.dim()) {
            let v = m.entry(r, c).abs();
            if v > best {
                best = v;
            }
        }
    }
    best
}
