//! Eigenvalues of the sector matrices.
//!
//! Two routes: an exact characteristic polynomial with Sturm-sequence root
//! isolation (small matrices, or on request), and a balanced real Schur
//! decomposition in double precision.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qes::sector::QesMatrix;
use crate::qes::sl2::RatMatrix;
use crate::series::{rat, rational_to_f64, Rational};

/// Relative threshold on imaginary parts from the floating eigensolve.
pub const REALNESS_TOL: f64 = 1e-8;

/// det(λ − M) by Faddeev–LeVerrier, ascending coefficients, monic.
pub fn char_poly(m: &RatMatrix) -> Vec<Rational> {
    let n = m.dim();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let ident = RatMatrix::identity(n);
    let mut mk = RatMatrix::zeros(n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&ident.scale(&coeffs[n + 1 - k]));
        let tr = m.mul(&mk).trace();
        coeffs[n - k] = -tr / rat(k as i64, 1);
    }
    coeffs
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * rat(i as i64, 1))
        .collect()
}

/// Quotient and remainder of polynomial division.
fn divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let den = trim(den.to_vec());
    let mut r = trim(num.to_vec());
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if r.len() < den.len() {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - dd];
    while r.len() >= den.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - den.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in den.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
        if r.len() < den.len() {
            break;
        }
    }
    (q, r)
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero_poly(&b) {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|c| c / &lead).collect()
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

struct Sturm(Vec<Vec<Rational>>);

impl Sturm {
    fn new(p: &[Rational]) -> Self {
        let mut seq = vec![trim(p.to_vec()), trim(derivative(p))];
        loop {
            let n = seq.len();
            if is_zero_poly(&seq[n - 1]) || seq[n - 1].len() == 1 {
                break;
            }
            let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
            if is_zero_poly(&r) {
                break;
            }
            seq.push(r.iter().map(|c| -c).collect());
        }
        seq.retain(|p| !is_zero_poly(p));
        Sturm(seq)
    }

    fn sign_changes(&self, x: &Rational) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in &self.0 {
            let v = eval(p, x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Distinct real roots in (a, b].
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.sign_changes(a) - self.sign_changes(b)
    }
}

/// Real roots of a rational polynomial, with multiplicity, refined by exact
/// bisection to absolute width `tol`.
pub fn real_roots(p: &[Rational], tol: f64) -> Vec<(f64, f64)> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let g = gcd(&p, &derivative(&p));
    let square_free = trim(divrem(&p, &g).0);
    let sturm = Sturm::new(&square_free);
    let lead = square_free.last().unwrap().abs();
    let bound = square_free
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
        + Rational::one();

    let tol_r = Rational::from_float(tol).unwrap_or_else(|| rat(1, 1 << 40));
    let two = rat(2, 1);
    let mut stack = vec![(-bound.clone(), bound)];
    let mut roots: Vec<(f64, f64, Rational, Rational)> = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            let (mut lo, mut hi) = (a, b);
            while &hi - &lo > tol_r {
                let mid = (&lo + &hi) / &two;
                if sturm.count(&lo, &mid) == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let centre = (&lo + &hi) / &two;
            roots.push((rational_to_f64(&centre), rational_to_f64(&(&hi - &lo)) / 2.0, lo, hi));
            continue;
        }
        let mid = (&a + &b) / &two;
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    // Multiplicity of an isolated root: how many members of the chain
    // p, gcd(p, p′), gcd(g, g′), … still vanish inside its interval.
    let mut chain = vec![p.clone()];
    while chain.last().unwrap().len() > 1 {
        let last = chain.last().unwrap();
        chain.push(gcd(last, &derivative(last)));
    }
    let chain_sturm: Vec<Sturm> = chain.iter().filter(|c| c.len() > 1).map(|c| Sturm::new(c)).collect();
    let mut out = Vec::new();
    for (x, w, lo, hi) in roots {
        let mult = chain_sturm.iter().filter(|s| s.count(&lo, &hi) > 0).count();
        for _ in 0..mult {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Parlett–Reinsch diagonal similarity scaling by powers of two.
pub fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for k in 0..n {
                if k != i {
                    c += m[(k, i)].abs();
                    r += m[(i, k)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = 1.0;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for k in 0..n {
                    m[(i, k)] *= g;
                }
                for k in 0..n {
                    m[(k, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues in double precision, each with an error estimate.
pub fn numeric_eigenvalues(rows: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
    let n = rows.len();
    let mut m = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
    balance(&mut m);
    let norm = m.norm();
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Resolution("Schur iteration did not converge".into()))?;
    let mut out = Vec::with_capacity(n);
    for z in schur.complex_eigenvalues().iter() {
        if z.im.abs() > REALNESS_TOL * (1.0 + z.re.abs()) {
            return Err(Error::Realness { re: z.re, im: z.im });
        }
        out.push((z.re, z.im.abs() + 64.0 * f64::EPSILON * norm.max(1.0) * n as f64));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Characteristic polynomial and (root, error) pairs.
pub type ExactSpectrum = (Vec<Rational>, Vec<(f64, f64)>);

/// Exact route: characteristic polynomial and isolated real roots.
pub fn exact_eigenvalues(m: &QesMatrix, tol: f64) -> Result<ExactSpectrum> {
    let p = char_poly(&m.to_dense());
    let roots = real_roots(&p, tol);
    if roots.len() != m.dim() {
        // Locate a complex pair to report.
        let numeric = numeric_eigenvalues(&m.to_f64_rows());
        return Err(match numeric {
            Err(e) => e,
            Ok(_) => Error::Realness {
                re: f64::NAN,
                im: f64::NAN,
            },
        });
    }
    Ok((p, roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::half::HalfInt;
    use crate::model::{ModelParams, PotentialId};
    use crate::qes::sector::build_qes_matrix;

    fn matrix(twice: i64) -> QesMatrix {
        let p = ModelParams::new(HalfInt::from_twice(twice)).unwrap();
        build_qes_matrix(&p, PotentialId::V1).unwrap()
    }

    #[test]
    fn char_poly_spin_one() {
        // E³ − (5/2)E² − 3E + 6
        let p = char_poly(&matrix(2).to_dense());
        assert_eq!(p, vec![rat(6, 1), rat(-3, 1), rat(-5, 2), rat(1, 1)]);
    }

    #[test]
    fn char_poly_spin_half() {
        let p = char_poly(&matrix(1).to_dense());
        assert_eq!(p, vec![rat(-1, 1), rat(-1, 2), rat(1, 1)]);
    }

    #[test]
    fn roots_with_multiplicity() {
        // (x − 1)²(x + 2) = x³ − 3x + 2
        let p = vec![rat(2, 1), rat(-3, 1), rat(0, 1), rat(1, 1)];
        let r = real_roots(&p, 1e-14);
        assert_eq!(r.len(), 3);
        assert!((r[0].0 + 2.0).abs() < 1e-13);
        assert!((r[1].0 - 1.0).abs() < 1e-13 && (r[2].0 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn complex_pair_is_not_a_real_root() {
        let p = vec![rat(1, 1), rat(0, 1), rat(1, 1)];
        assert!(real_roots(&p, 1e-12).is_empty());
    }

    #[test]
    fn numeric_rejects_rotation() {
        let rows = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        assert!(matches!(numeric_eigenvalues(&rows), Err(Error::Realness { .. })));
    }

    #[test]
    fn numeric_and_exact_agree() {
        for twice in 1..=8 {
            let m = matrix(twice);
            let (_, exact) = exact_eigenvalues(&m, 1e-14).unwrap();
            let num = numeric_eigenvalues(&m.to_f64_rows()).unwrap();
            for (a, b) in exact.iter().zip(&num) {
                assert!((a.0 - b.0).abs() < 1e-10 * (1.0 + a.0.abs()), "{a:?} {b:?}");
            }
        }
    }
}
