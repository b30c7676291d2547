//! Quadratic surds `a + b*sqrt(d)` with rational `a`, `b` and integer radicand.
//!
//! A negative radicand encodes the imaginary unit, so complex-conjugate
//! branch pairs are representable exactly.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::poly::{format_rational, Poly, Rational};

const TRIAL_DIVISION_BOUND: u64 = 100_000;

/// Split `n = s^2 * t`; `t` is squarefree when every prime factor of `n`
/// is below the trial-division bound or appears in a perfect-square cofactor.
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let negative = n.is_negative();
    let mut rest = n.abs();
    let mut s = BigInt::one();
    let mut t = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let sq = &bp * &bp;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            s *= &bp;
        }
        if (&rest % &bp).is_zero() {
            rest /= &bp;
            t *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        t *= rest;
    }
    if negative {
        t = -t;
    }
    (s, t)
}

#[derive(Clone)]
pub struct SurdScalar {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl SurdScalar {
    /// Canonical `a + b*sqrt(d)` for rational `d`.
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        if b.is_zero() || d.is_zero() {
            return Self::from_rational(a);
        }
        // sqrt(n/m) = sqrt(n*m)/m
        let m = d.denom().clone();
        let (s, t) = extract_square(&(d.numer() * &m));
        let b = b * Rational::new(s, m);
        if t.is_one() {
            return Self::from_rational(a + b);
        }
        SurdScalar { a, b, d: t }
    }

    pub fn from_rational(a: Rational) -> Self {
        SurdScalar {
            a,
            b: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conj(&self) -> Self {
        SurdScalar {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    fn common_radicand(&self, other: &Self) -> Option<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Some(BigInt::zero()),
            (true, false) => Some(other.d.clone()),
            (false, true) => Some(self.d.clone()),
            (false, false) => (self.d == other.d).then(|| self.d.clone()),
        }
    }

    fn with(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            Self::from_rational(a)
        } else {
            SurdScalar { a, b, d }
        }
    }

    /// Sum in `Q(sqrt d)`; `None` when the radicands differ.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let d = self.common_radicand(other)?;
        Some(Self::with(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let d = self.common_radicand(other)?;
        let dr = Rational::from_integer(d.clone());
        Some(Self::with(
            &self.a * &other.a + &self.b * &other.b * dr,
            &self.a * &other.b + &self.b * &other.a,
            d,
        ))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::with(&self.a * r, &self.b * r, self.d.clone())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        if d >= 0.0 {
            Complex64::new(a + b * d.sqrt(), 0.0)
        } else {
            Complex64::new(a, b * (-d).sqrt())
        }
    }
}

impl PartialEq for SurdScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.a != other.a {
            return false;
        }
        match (self.is_rational(), other.is_rational()) {
            (true, true) => true,
            (false, false) => {
                // b sqrt(d) == b' sqrt(d') iff same kind, same sign, b^2|d| == b'^2|d'|
                self.d.is_negative() == other.d.is_negative()
                    && self.b.is_positive() == other.b.is_positive()
                    && &self.b * &self.b * Rational::from_integer(self.d.abs())
                        == &other.b * &other.b * Rational::from_integer(other.d.abs())
            }
            _ => false,
        }
    }
}

impl Eq for SurdScalar {}

impl fmt::Display for SurdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for SurdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

impl Serialize for SurdScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SurdScalar", 3)?;
        st.serialize_field("a", &format_rational(&self.a))?;
        st.serialize_field("b", &format_rational(&self.b))?;
        st.serialize_field("d", &self.d.to_string())?;
        st.end()
    }
}

/// Polynomial with quadratic-surd coefficients, ascending degree.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SurdPoly {
    coeffs: Vec<SurdScalar>,
}

impl SurdPoly {
    pub fn new(mut coeffs: Vec<SurdScalar>) -> Self {
        while coeffs.last().is_some_and(SurdScalar::is_zero) {
            coeffs.pop();
        }
        SurdPoly { coeffs }
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .cloned()
                .map(SurdScalar::from_rational)
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[SurdScalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The rational polynomial when every coefficient is rational.
    pub fn as_rational(&self) -> Option<Poly> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect::<Option<Vec<_>>>()
            .map(Poly::new)
    }

    /// Write `self = u + sqrt(d) * v` with rational polynomials `u`, `v`.
    ///
    /// Returns `None` when coefficients use different radicands.
    pub fn split(&self) -> Option<(Poly, Poly, BigInt)> {
        let mut d = BigInt::zero();
        for c in self.coeffs.iter().filter(|c| !c.is_rational()) {
            if d.is_zero() {
                d = c.d.clone();
            } else if d != c.d {
                return None;
            }
        }
        let u = Poly::new(self.coeffs.iter().map(|c| c.a.clone()).collect());
        let v = Poly::new(self.coeffs.iter().map(|c| c.b.clone()).collect());
        Some((u, v, d))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(SurdScalar::conj).collect())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(SurdScalar::to_complex).collect()
    }
}

impl fmt::Display for SurdPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
