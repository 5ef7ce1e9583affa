//! Potentials with analytic continuation for the contour integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::v1;
use crate::wkb::contour::WkbPotential;

/// V₂(z) = ½ sinh²z − γ cosh z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct V2Potential {
    pub gamma: f64,
}

impl V2Potential {
    /// The zero z = i·s of E − V₂ nearest the real axis: V₂(is) = −V₁(s), so
    /// s solves V₁(s) = −E on (0, π). Above the top of V₁ it is π.
    pub fn imaginary_zero(&self, e: f64) -> f64 {
        let g = self.gamma;
        let f = |s: f64| v1(s, g) + e;
        let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
        if f(lo) <= 0.0 || f(hi) >= 0.0 {
            return std::f64::consts::PI;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl WkbPotential for V2Potential {
    fn derivatives(&self, z: Complex64) -> [Complex64; 5] {
        let g = self.gamma;
        let sh = z.sinh();
        let ch = z.cosh();
        let sh2 = (z * 2.0).sinh();
        let ch2 = (z * 2.0).cosh();
        [
            sh * sh * 0.5 - ch * g,
            sh2 * 0.5 - sh * g,
            ch2 - ch * g,
            sh2 * 2.0 - sh * g,
            ch2 * 4.0 - ch * g,
        ]
    }

    fn turning_points(&self, e: f64) -> Result<(f64, f64)> {
        let g = self.gamma;
        if e <= -g {
            return Err(Error::Domain(format!(
                "E = {e} ≤ −γ: the level lies inside the wells (four turning points)"
            )));
        }
        let x = (g + (g * g + 1.0 + 2.0 * e).sqrt()).acosh();
        Ok((-x, x))
    }

    fn clearance(&self, e: f64) -> f64 {
        self.imaginary_zero(e)
    }

    fn energy_floor(&self) -> f64 {
        -self.gamma
    }
}

/// V = ½ ω² x², the exactness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub omega: f64,
}

impl WkbPotential for Harmonic {
    fn derivatives(&self, z: Complex64) -> [Complex64; 5] {
        let w2 = self.omega * self.omega;
        let zero = Complex64::new(0.0, 0.0);
        [z * z * (0.5 * w2), z * w2, Complex64::new(w2, 0.0), zero, zero]
    }

    fn turning_points(&self, e: f64) -> Result<(f64, f64)> {
        if e <= 0.0 {
            return Err(Error::Domain(format!("E = {e} has no turning points")));
        }
        let x = (2.0 * e).sqrt() / self.omega;
        Ok((-x, x))
    }

    fn clearance(&self, _e: f64) -> f64 {
        f64::INFINITY
    }

    fn energy_floor(&self) -> f64 {
        0.0
    }
}
