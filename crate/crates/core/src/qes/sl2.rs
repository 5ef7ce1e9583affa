//! The spin-j representation of sl(2) by first-order differential operators
//! on polynomials of degree ≤ 2j:
//!
//! T⁺ = 2jξ − ξ² d/dξ,   T⁰ = −j + ξ d/dξ,   T⁻ = d/dξ.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::series::{rat, Rational};

/// Dense square matrix with exact entries; column k is the image of ξ^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(dim: usize) -> Self {
        RatMatrix {
            dim,
            data: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Rational) {
        self.data[row * self.dim + col] = v;
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        let n = self.dim;
        let mut out = RatMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &RatMatrix) -> RatMatrix {
        RatMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn commutator(&self, rhs: &RatMatrix) -> RatMatrix {
        self.mul(rhs).add(&rhs.mul(self).scale(&rat(-1, 1)))
    }

    pub fn identity(dim: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, rat(1, 1));
        }
        m
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Sl2Generators {
    pub j: HalfInt,
    pub t_plus: RatMatrix,
    pub t_zero: RatMatrix,
    pub t_minus: RatMatrix,
}

pub fn sl2_generators(j: HalfInt) -> Result<Sl2Generators> {
    if j < HalfInt::ZERO {
        return Err(Error::Parameter(format!("j = {j} must be a nonnegative half-integer")));
    }
    let two_j = j.twice();
    let dim = (two_j + 1) as usize;
    let mut t_plus = RatMatrix::zeros(dim);
    let mut t_zero = RatMatrix::zeros(dim);
    let mut t_minus = RatMatrix::zeros(dim);
    let jr = j.to_rational();
    for k in 0..dim {
        let kk = k as i64;
        // ξ^k ↦ (2j − k) ξ^(k+1); the k = 2j image vanishes, which is what
        // keeps the polynomial space invariant.
        if k + 1 < dim {
            t_plus.set(k + 1, k, rat(two_j - kk, 1));
        }
        t_zero.set(k, k, rat(kk, 1) - &jr);
        if k > 0 {
            t_minus.set(k - 1, k, rat(kk, 1));
        }
    }
    Ok(Sl2Generators {
        j,
        t_plus,
        t_zero,
        t_minus,
    })
}
