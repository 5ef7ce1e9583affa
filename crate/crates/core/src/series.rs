//! Truncated Puiseux series in half-integer powers of κ with exact rational
//! coefficients.
//!
//! A series is the finite list of coefficients of κ^p for
//! p = leading, leading − ½, …, down to (but excluding) the truncation power.
//! Every power at or below the truncation power is unknown, so arithmetic
//! between series of different orders keeps only what both operands
//! determine. The small parameter δ = κ^(−1/2) is just the power −½ on
//! this grid.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxSeries {
    leading: HalfInt,
    coeffs: Vec<Rational>,
    trunc: HalfInt,
}

/// A numerically evaluated partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Heuristic size of the first omitted term (see [`PuiseuxSeries::evaluate`]).
    pub remainder_bound: f64,
}

fn slots(leading: HalfInt, trunc: HalfInt) -> usize {
    (leading.twice() - trunc.twice()).max(0) as usize
}

impl PuiseuxSeries {
    /// Builds a series whose first coefficient multiplies κ^leading.
    pub fn new(leading: HalfInt, coeffs: Vec<Rational>, trunc: HalfInt) -> Result<Self> {
        if trunc > leading {
            return Err(Error::Parameter(format!(
                "truncation power {trunc} lies above leading power {leading}"
            )));
        }
        if coeffs.len() != slots(leading, trunc) {
            return Err(Error::Parameter(format!(
                "{} coefficients given, but powers {leading} down to {trunc} need {}",
                coeffs.len(),
                slots(leading, trunc)
            )));
        }
        Ok(Self::normalized(leading, coeffs, trunc))
    }

    pub fn zero(trunc: HalfInt) -> Self {
        PuiseuxSeries {
            leading: trunc,
            coeffs: Vec::new(),
            trunc,
        }
    }

    pub fn monomial(power: HalfInt, coeff: Rational, trunc: HalfInt) -> Self {
        Self::from_terms(&[(power, coeff)], trunc)
    }

    /// Collects `(power, coefficient)` pairs; terms at or below `trunc` are dropped.
    pub fn from_terms(terms: &[(HalfInt, Rational)], trunc: HalfInt) -> Self {
        let leading = terms
            .iter()
            .map(|(p, _)| *p)
            .filter(|p| *p > trunc)
            .max()
            .unwrap_or(trunc);
        let mut coeffs = vec![Rational::zero(); slots(leading, trunc)];
        for (p, c) in terms {
            if *p > trunc {
                coeffs[(leading.twice() - p.twice()) as usize] += c;
            }
        }
        Self::normalized(leading, coeffs, trunc)
    }

    fn normalized(mut leading: HalfInt, coeffs: Vec<Rational>, trunc: HalfInt) -> Self {
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        leading = leading - HalfInt::from_twice(skip as i64);
        PuiseuxSeries {
            leading,
            coeffs: coeffs.into_iter().skip(skip).collect(),
            trunc,
        }
    }

    pub fn leading_power(&self) -> HalfInt {
        self.leading
    }

    /// The first power that is not represented.
    pub fn trunc_order(&self) -> HalfInt {
        self.trunc
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of κ^power, or `None` when that power is truncated away.
    pub fn coeff(&self, power: HalfInt) -> Option<Rational> {
        if power <= self.trunc {
            return None;
        }
        if power > self.leading {
            return Some(Rational::zero());
        }
        Some(self.coeffs[(self.leading.twice() - power.twice()) as usize].clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(m, c)| (self.leading - HalfInt::from_twice(m as i64), c))
    }

    /// Drops every term at or below `trunc` (no-op if already coarser).
    pub fn truncate(&self, trunc: HalfInt) -> Self {
        if trunc <= self.trunc {
            return self.clone();
        }
        let terms: Vec<_> = self.terms().map(|(p, c)| (p, c.clone())).collect();
        Self::from_terms(&terms, trunc)
    }

    /// Substitutes γ = κ − 1 into a series written in powers of γ and
    /// re-expands each γ^p = κ^p (1 − 1/κ)^p binomially.
    pub fn rebase_gamma_to_kappa(&self) -> Self {
        let mut out = Vec::new();
        for (p, c) in self.terms() {
            let alpha = p.to_rational();
            let mut binom = Rational::one();
            let mut k = 0i64;
            loop {
                let power = p - HalfInt::from_int(k);
                if power <= self.trunc {
                    break;
                }
                let sign = if k % 2 == 0 { 1 } else { -1 };
                out.push((power, c * &binom * rat(sign, 1)));
                // binom(α, k+1) = binom(α, k)·(α − k)/(k + 1)
                binom = binom * (&alpha - rat(k, 1)) / rat(k + 1, 1);
                k += 1;
                if binom.is_zero() {
                    break;
                }
            }
        }
        Self::from_terms(&out, self.trunc)
    }

    /// Sums the represented terms at the given κ.
    ///
    /// The remainder bound is a proxy, not a rigorous bound: the magnitude of
    /// the last nonzero coefficient times κ raised to the truncation power.
    pub fn evaluate(&self, kappa: f64) -> Result<SeriesValue> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Domain(format!("series evaluated at kappa = {kappa}")));
        }
        // Neumaier summation; the leading terms cancel heavily against the
        // oracle later, so the partial sum must not lose digits here.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (p, c) in self.terms() {
            let term = rational_to_f64(c) * kappa.powf(p.to_f64());
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        let last = self
            .coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .map(|c| rational_to_f64(&c.abs()))
            .unwrap_or(0.0);
        Ok(SeriesValue {
            value: sum + comp,
            remainder_bound: last * kappa.powf(self.trunc.to_f64()),
        })
    }

    fn combine(&self, rhs: &Self, sign: i64) -> Self {
        let trunc = self.trunc.max(rhs.trunc);
        let leading = self.leading.max(rhs.leading).max(trunc);
        let mut coeffs = vec![Rational::zero(); slots(leading, trunc)];
        for (p, c) in self.terms() {
            if p > trunc {
                coeffs[(leading.twice() - p.twice()) as usize] += c;
            }
        }
        for (p, c) in rhs.terms() {
            if p > trunc {
                let slot = &mut coeffs[(leading.twice() - p.twice()) as usize];
                if sign > 0 {
                    *slot += c;
                } else {
                    *slot -= c;
                }
            }
        }
        Self::normalized(leading, coeffs, trunc)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SeriesJson::from(self)).expect("series json")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let raw: SeriesJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.combine(rhs, 1)
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.combine(rhs, -1)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries {
            leading: self.leading,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            trunc: self.trunc,
        }
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;

    /// Cauchy product. The result is known down to the weaker of
    /// `lead(a) + trunc(b)` and `lead(b) + trunc(a)`.
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        let leading = self.leading + rhs.leading;
        let trunc = (self.leading + rhs.trunc).max(rhs.leading + self.trunc);
        let n = slots(leading, trunc);
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.coeffs.iter().enumerate() {
                if i + k >= n {
                    break;
                }
                coeffs[i + k] += a * b;
            }
        }
        PuiseuxSeries::normalized(leading, coeffs, trunc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $m(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let power = match p.twice() {
                0 => String::new(),
                2 => "κ".to_string(),
                _ => format!("κ^({p})"),
            };
            if power.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "({mag})·{power}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(κ^({}))", self.trunc)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SeriesJson {
    leading_power: f64,
    coefficients: Vec<[String; 2]>,
    trunc_order: f64,
}

impl From<&PuiseuxSeries> for SeriesJson {
    fn from(s: &PuiseuxSeries) -> Self {
        SeriesJson {
            leading_power: s.leading.to_f64(),
            coefficients: s
                .coeffs
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
            trunc_order: s.trunc.to_f64(),
        }
    }
}

impl TryFrom<SeriesJson> for PuiseuxSeries {
    type Error = Error;

    fn try_from(raw: SeriesJson) -> Result<Self> {
        let leading = HalfInt::from_f64(raw.leading_power)?;
        let trunc = HalfInt::from_f64(raw.trunc_order)?;
        let coeffs = raw
            .coefficients
            .iter()
            .map(|[n, d]| {
                let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("numerator {n:?}")))?;
                let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("denominator {d:?}")))?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(BigRational::new(n, d))
            })
            .collect::<Result<Vec<_>>>()?;
        PuiseuxSeries::new(leading, coeffs, trunc)
    }
}

impl Serialize for PuiseuxSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PuiseuxSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}
