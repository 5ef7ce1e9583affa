//! Weak-coupling expansion of the lowest band edge of V₁.
//!
//! About the minimum x = π, with y = x − π and κ = γ + 1,
//!
//! ```text
//! V₁ = −(κ − 1) + Σ_{n≥1} (−1)^{n+1} (κ + 4^{n−1} − 1) y^{2n} / (2n)!
//! ```
//!
//! In oscillator units z = κ^{1/4} y the Hamiltonian is
//! −(κ − 1) + √κ [H₀ + Σ_k δ^k W_k] with δ = κ^{−1/2}: a Taylor term
//! (a_p + b_p κ) y^p feeds b_p z^p into W_{(p−2)/2} and a_p z^p into
//! W_{(p+2)/2}. Perturbation theory runs on monic Hermite functions,
//! z φ_n = φ_{n+1} + (n/2) φ_{n−1}, so every quantity stays rational.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::series::{rat, PuiseuxSeries, Rational};

/// Coefficient a + b·κ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaLinear {
    pub a: Rational,
    pub b: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorExpansion {
    /// ω = √κ.
    pub omega: PuiseuxSeries,
    /// Coefficient of (x − π)^p for 2 ≤ p ≤ order, odd p included (all zero).
    pub taylor_coeffs: BTreeMap<usize, KappaLinear>,
    /// The constant term −(κ − 1).
    pub classical_term: KappaLinear,
    pub order: usize,
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat(k, 1))
}

/// Exact Taylor coefficients of ½ sin²x + γ cos x about x = π through (x − π)^P.
pub fn taylor_expand_v1(order: usize) -> Result<OscillatorExpansion> {
    if order < 2 {
        return Err(Error::Parameter(format!("Taylor order {order} must be at least 2")));
    }
    let mut taylor_coeffs = BTreeMap::new();
    for p in 2..=order {
        let coeff = if p % 2 == 1 {
            KappaLinear {
                a: Rational::zero(),
                b: Rational::zero(),
            }
        } else {
            let n = p / 2;
            let sign = if n % 2 == 1 { 1 } else { -1 };
            let f = factorial(p);
            let four = (0..n - 1).fold(Rational::one(), |acc, _| acc * rat(4, 1));
            KappaLinear {
                a: rat(sign, 1) * (four - Rational::one()) / &f,
                b: rat(sign, 1) / f,
            }
        };
        taylor_coeffs.insert(p, coeff);
    }
    Ok(OscillatorExpansion {
        omega: PuiseuxSeries::monomial(HalfInt::HALF, Rational::one(), HalfInt::ZERO),
        taylor_coeffs,
        classical_term: KappaLinear {
            a: Rational::one(),
            b: rat(-1, 1),
        },
        order,
    })
}

/// Polynomial in z, ascending.
type ZPoly = Vec<Rational>;

/// Applies a polynomial in z to a vector on the basis φ_n with
/// z φ_n = φ_{n+1} + s·n φ_{n−1}.
fn apply_poly(poly: &ZPoly, v: &[Rational], s: &Rational) -> Vec<Rational> {
    let deg = poly.len().saturating_sub(1);
    let mut out = vec![Rational::zero(); v.len() + deg];
    let mut power = v.to_vec();
    for (p, c) in poly.iter().enumerate() {
        if p > 0 {
            power = apply_z(&power, s);
        }
        if !c.is_zero() {
            for (n, x) in power.iter().enumerate() {
                if !x.is_zero() {
                    out[n] += c * x;
                }
            }
        }
    }
    out
}

fn apply_z(v: &[Rational], s: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); v.len() + 1];
    for (n, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        out[n + 1] += x;
        if n > 0 {
            out[n - 1] += x * s * rat(n as i64, 1);
        }
    }
    out
}

fn add_into(acc: &mut Vec<Rational>, v: &[Rational], scale: &Rational) {
    if acc.len() < v.len() {
        acc.resize(v.len(), Rational::zero());
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += x * scale;
    }
}

/// Generic Rayleigh–Schrödinger recursion for H₀ + Σ_k g^k W_k about the
/// oscillator ground state, with (H₀ − E₀) φ_n = n·ω φ_n.
///
/// Returns energy corrections e_1..e_order and the wavefunction corrections.
fn rs_recursion(
    perturbations: &[ZPoly],
    omega: &Rational,
    order: usize,
) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let s = rat(1, 2) / omega;
    let mut psi: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    let mut e: Vec<Rational> = vec![Rational::zero()];
    let empty = ZPoly::new();
    for k in 1..=order {
        let mut rhs: Vec<Rational> = Vec::new();
        for i in 1..=k {
            let w = perturbations.get(i - 1).unwrap_or(&empty);
            if w.is_empty() {
                continue;
            }
            let wpsi = apply_poly(w, &psi[k - i], &s);
            add_into(&mut rhs, &wpsi, &rat(-1, 1));
        }
        let ek = rhs.first().map(|x| -x).unwrap_or_else(Rational::zero);
        for i in 1..k {
            let ei = e[i].clone();
            add_into(&mut rhs, &psi[k - i], &ei);
        }
        // ψ_k has no φ_0 component (intermediate normalization).
        let mut next = vec![Rational::zero(); rhs.len().max(1)];
        for (n, x) in rhs.iter().enumerate().skip(1) {
            // Denominators n·ω with n ≥ 1 never vanish.
            assert!(n >= 1);
            next[n] = x / (omega * rat(n as i64, 1));
        }
        while next.len() > 1 && next.last().is_some_and(|x| x.is_zero()) {
            next.pop();
        }
        psi.push(next);
        e.push(ek);
    }
    e.remove(0);
    (e, psi)
}

/// Ground-state correction at RSPT order `order` (≥ 1) for
/// −½ d²/dx² + ½ ω² x² + λ·P(x), as the coefficient of λ^order.
pub fn rspt_generic(omega: &Rational, perturbation: &[Rational], order: usize) -> Result<Rational> {
    if order == 0 {
        return Err(Error::Parameter("order must be at least 1".into()));
    }
    if omega <= &Rational::zero() {
        return Err(Error::Parameter(format!("omega = {omega} must be positive")));
    }
    let (e, _) = rs_recursion(&[perturbation.to_vec()], omega, order);
    Ok(e[order - 1].clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsptState {
    /// Highest δ power reached.
    pub order: usize,
    /// ψ_k on the monic Hermite basis, k = 0 … order + 1.
    pub wavefunction_coeffs: Vec<Vec<Rational>>,
    /// e_k in √κ·Σ e_k δ^k, k = 0 … order + 1.
    pub oscillator_coeffs: Vec<Rational>,
    pub energy: PuiseuxSeries,
}

/// Taylor order needed to reach δ^M.
pub fn required_taylor_order(target_order: usize) -> usize {
    2 * target_order + 4
}

/// E₀ through δ^M from a given Taylor expansion.
pub fn rspt_from_expansion(exp: &OscillatorExpansion, target_order: usize) -> Result<RsptState> {
    let need = required_taylor_order(target_order);
    if exp.order < need {
        return Err(Error::InsufficientTaylorOrder {
            required: need,
            available: exp.order,
        });
    }
    let levels = target_order + 1;
    let mut w: Vec<ZPoly> = vec![ZPoly::new(); levels];
    for (&p, c) in &exp.taylor_coeffs {
        if p < 3 {
            continue;
        }
        for (k, coef) in [((p - 2) / 2, &c.b), ((p + 2) / 2, &c.a)] {
            if p % 2 == 0 && k >= 1 && k <= levels && !coef.is_zero() {
                let poly = &mut w[k - 1];
                if poly.len() <= p {
                    poly.resize(p + 1, Rational::zero());
                }
                poly[p] += coef;
            }
        }
    }
    let (e, psi) = rs_recursion(&w, &Rational::one(), levels);

    let mut osc = vec![rat(1, 2)];
    osc.extend(e);
    let trunc = HalfInt::from_twice(-(target_order as i64) - 1);
    let mut terms = vec![
        (HalfInt::ONE, exp.classical_term.b.clone()),
        (HalfInt::ZERO, exp.classical_term.a.clone()),
    ];
    for (k, c) in osc.iter().enumerate() {
        terms.push((HalfInt::from_twice(1 - k as i64), c.clone()));
    }
    Ok(RsptState {
        order: target_order,
        wavefunction_coeffs: psi,
        oscillator_coeffs: osc,
        energy: PuiseuxSeries::from_terms(&terms, trunc),
    })
}

/// E₀ = −κ + ½√κ + … through δ^M, exact.
pub fn rspt_ground_energy(target_order: usize) -> Result<PuiseuxSeries> {
    let exp = taylor_expand_v1(required_taylor_order(target_order))?;
    Ok(rspt_from_expansion(&exp, target_order)?.energy)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub power: String,
    pub value: String,
    pub approx: f64,
}

/// One row per represented power, for tabulation.
pub fn coefficient_rows(s: &PuiseuxSeries) -> Vec<CoefficientRow> {
    s.terms()
        .map(|(p, c)| CoefficientRow {
            power: p.to_string(),
            value: c.to_string(),
            approx: crate::series::rational_to_f64(c),
        })
        .collect()
}
