//! Closed-contour integrals of the Dunham integrands around two real turning
//! points, by the trapezoidal rule on an ellipse.
//!
//! With Q = 2(E − V):
//!
//! ```text
//! I₀ = ∮ √Q,   J₂ = ∮ Q″ / Q^{3/2},   J₄ = ∮ (2 Q⁗ Q − 7 Q″²) / Q^{7/2}
//! ```
//!
//! √Q is continued along the contour from the principal branch at the first
//! node, and the orientation is chosen so that Re I₀ > 0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A potential that can be continued into the complex plane.
pub trait WkbPotential: Sync {
    /// V, V′, V″, V‴, V⁗ at z.
    fn derivatives(&self, z: Complex64) -> [Complex64; 5];
    /// The two real turning points bracketing the allowed region.
    fn turning_points(&self, e: f64) -> Result<(f64, f64)>;
    /// Distance from the real axis to the nearest complex zero of E − V or
    /// other singularity; `f64::INFINITY` if there is none.
    fn clearance(&self, e: f64) -> f64;
    /// Lower end of the energy range with exactly two real turning points.
    fn energy_floor(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WkbIntegrand {
    Leading,
    Eps2,
    Eps4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Real semi-axis = half-separation + `a_factor`·separation.
    pub a_factor: f64,
    /// Imaginary semi-axis = min(`b_factor`·separation, `clearance_fraction`·clearance).
    pub b_factor: f64,
    pub clearance_fraction: f64,
    pub nodes: usize,
    /// Accepted |Im| / |Re|.
    pub imag_tol: f64,
    /// Accepted relative change under node doubling.
    pub quad_tol: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            a_factor: 0.2,
            b_factor: 0.2,
            clearance_fraction: 0.6,
            nodes: 1024,
            imag_tol: 1e-8,
            quad_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourValue {
    pub value: f64,
    pub imag: f64,
    /// value / π
    pub pi_multiple: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DunhamIntegrals {
    pub leading: ContourValue,
    pub eps2: ContourValue,
    pub eps4: ContourValue,
    pub turning_points: (f64, f64),
}

impl DunhamIntegrals {
    pub fn get(&self, which: WkbIntegrand) -> ContourValue {
        match which {
            WkbIntegrand::Leading => self.leading,
            WkbIntegrand::Eps2 => self.eps2,
            WkbIntegrand::Eps4 => self.eps4,
        }
    }
}

struct Ellipse {
    centre: f64,
    a: f64,
    b: f64,
}

fn ellipse(x1: f64, x2: f64, clearance: f64, spec: &ContourSpec) -> Result<Ellipse> {
    let sep = x2 - x1;
    if !(sep > 0.0) {
        return Err(Error::Domain(format!("turning points {x1}, {x2} are not ordered")));
    }
    let b = (spec.b_factor * sep).min(spec.clearance_fraction * clearance);
    if !(b > 0.0) {
        return Err(Error::Contour(format!("no room for a contour: clearance {clearance}")));
    }
    Ok(Ellipse {
        centre: 0.5 * (x1 + x2),
        a: 0.5 * sep + spec.a_factor * sep,
        b,
    })
}

/// Raw sums over 2N nodes, returning (all-node, even-node) estimates and
/// the L1 norms for each integrand.
fn sums(pot: &dyn WkbPotential, e: f64, ell: &Ellipse, nodes: usize) -> ([Complex64; 3], [Complex64; 3], [f64; 3]) {
    let total = 2 * nodes;
    let mut all = [Complex64::new(0.0, 0.0); 3];
    let mut even = [Complex64::new(0.0, 0.0); 3];
    let mut l1 = [0.0; 3];
    let mut prev: Option<Complex64> = None;
    let dtheta = 2.0 * std::f64::consts::PI / total as f64;
    for k in 0..total {
        let th = k as f64 * dtheta;
        let (s, c) = th.sin_cos();
        let z = Complex64::new(ell.centre + ell.a * c, ell.b * s);
        let dz = Complex64::new(-ell.a * s, ell.b * c);
        let d = pot.derivatives(z);
        let q = (Complex64::new(e, 0.0) - d[0]) * 2.0;
        let q2 = d[2] * -2.0;
        let q4 = d[4] * -2.0;
        let mut root = q.sqrt();
        if let Some(p) = prev {
            if (root * p.conj()).re < 0.0 {
                root = -root;
            }
        }
        prev = Some(root);
        let terms = [
            root * dz,
            q2 / (q * root) * dz,
            (q4 * q * 2.0 - q2 * q2 * 7.0) / (q * q * q * root) * dz,
        ];
        for i in 0..3 {
            all[i] += terms[i];
            l1[i] += terms[i].norm();
            if k % 2 == 0 {
                even[i] += terms[i];
            }
        }
    }
    for i in 0..3 {
        all[i] *= dtheta;
        even[i] *= 2.0 * dtheta;
        l1[i] *= dtheta;
    }
    (all, even, l1)
}

/// All three Dunham contour integrals at energy `e`.
pub fn dunham_integrals(pot: &dyn WkbPotential, e: f64, spec: &ContourSpec) -> Result<DunhamIntegrals> {
    if e <= pot.energy_floor() {
        return Err(Error::Domain(format!(
            "energy {e} is not above {} where two turning points exist",
            pot.energy_floor()
        )));
    }
    let (x1, x2) = pot.turning_points(e)?;
    let ell = ellipse(x1, x2, pot.clearance(e), spec)?;
    let (all, even, l1) = sums(pot, e, &ell, spec.nodes);
    let sign = if all[0].re >= 0.0 { 1.0 } else { -1.0 };
    let names = ["leading", "eps2", "eps4"];
    let mut out = [ContourValue {
        value: 0.0,
        imag: 0.0,
        pi_multiple: 0.0,
    }; 3];
    for i in 0..3 {
        let v = all[i] * sign;
        let floor = 1e-12 * l1[i];
        if v.im.abs() > spec.imag_tol * v.re.abs() + floor {
            return Err(Error::Contour(format!(
                "{} integral at E = {e} has imaginary part {:.3e} against real part {:.3e}",
                names[i], v.im, v.re
            )));
        }
        let change = (all[i] - even[i]).norm();
        if change > spec.quad_tol * v.norm() + floor {
            return Err(Error::Quadrature(format!(
                "{} integral at E = {e} changed by {change:.3e} under node doubling ({} → {} nodes)",
                names[i],
                spec.nodes,
                2 * spec.nodes
            )));
        }
        out[i] = ContourValue {
            value: v.re,
            imag: v.im,
            pi_multiple: v.re / std::f64::consts::PI,
        };
    }
    Ok(DunhamIntegrals {
        leading: out[0],
        eps2: out[1],
        eps4: out[2],
        turning_points: (x1, x2),
    })
}

/// One integrand at energy `e`.
pub fn contour_integral(
    integrand: WkbIntegrand,
    e: f64,
    pot: &dyn WkbPotential,
    spec: &ContourSpec,
) -> Result<ContourValue> {
    Ok(dunham_integrals(pot, e, spec)?.get(integrand))
}
