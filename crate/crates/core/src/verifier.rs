//! Exact certification: residuals of the integral equation, orthogonality
//! tables, and the reproducing property of kernel polynomials.

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::basis::kernel_sum;
use crate::constructor::{AffineFamilySpec, EquationSpec};
use crate::error::{Error, Result};
use crate::moments::{MomentFunctional, WeightSpec};
use crate::poly::{format_rational, Poly, Rational};
use crate::surd::SurdPoly;

/// `B(p, q)(x) = int p(y) q(alpha(y) + x beta(y)) w(y) dy`, bilinear in `(p, q)`.
pub fn bilinear(spec: &EquationSpec, p: &Poly, q: &Poly) -> Result<Poly> {
    if q.is_zero() || p.is_zero() {
        return Ok(Poly::zero());
    }
    let f = spec.functional();
    let layers = q.composition_layers(&spec.alpha, &spec.beta)?;
    Ok(Poly::new(
        layers
            .iter()
            .map(|g| f.apply(&(p * g)))
            .collect::<Result<Vec<_>>>()?,
    ))
}

/// `R(x) = sum_k (L_w[P gamma_k] - c_k) x^k`; zero iff `p` solves the equation.
pub fn residual(spec: &EquationSpec, p: &Poly) -> Result<Poly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(&bilinear(spec, p, p)? - p)
}

/// Residual of `u + sqrt(d) v` for rational polynomials `u`, `v`, split into
/// its rational part and its `sqrt(d)` part. Both vanish iff the candidate
/// solves the equation. `d = -1` gives the real and imaginary parts of a
/// complex candidate.
pub fn split_residual(
    spec: &EquationSpec,
    u: &Poly,
    v: &Poly,
    d: &Rational,
) -> Result<(Poly, Poly)> {
    if u.is_zero() && v.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let rational = &(&bilinear(spec, u, u)? + &bilinear(spec, v, v)?.scale(d)) - u;
    let irrational = &(&bilinear(spec, u, v)? + &bilinear(spec, v, u)?) - v;
    Ok((rational, irrational))
}

/// [`split_residual`] for a surd-coefficient polynomial.
pub fn surd_residual(spec: &EquationSpec, p: &SurdPoly) -> Result<(Poly, Poly)> {
    let (u, v, d) = p.split().ok_or_else(|| {
        Error::InternalInconsistency("coefficients use different radicands".into())
    })?;
    split_residual(spec, &u, &v, &Rational::from_integer(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCheck {
    pub name: String,
    pub expected: Rational,
    pub actual: Rational,
}

impl NamedCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

impl Serialize for NamedCheck {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NamedCheck", 4)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("expected", &format_rational(&self.expected))?;
        st.serialize_field("actual", &format_rational(&self.actual))?;
        st.serialize_field("passed", &self.passed())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub residual: Poly,
    pub is_solution: bool,
    pub checks: Vec<NamedCheck>,
}

fn norm_check(f: &MomentFunctional, p: &Poly) -> Result<NamedCheck> {
    Ok(NamedCheck {
        name: "normalization L_w[P] = 1".into(),
        expected: Rational::one(),
        actual: f.apply(p)?,
    })
}

/// Residual report for an arbitrary `(alpha, beta)` equation.
pub fn verify(spec: &EquationSpec, p: &Poly) -> Result<VerificationReport> {
    let residual = residual(spec, p)?;
    let checks = vec![norm_check(&spec.functional(), p)?];
    Ok(VerificationReport {
        is_solution: residual.is_zero(),
        residual,
        checks,
    })
}

/// Residual report for the affine family `(y - zeta)(tau + sigma x) + x`.
pub fn verify_eq3(
    weight: &WeightSpec,
    family: &AffineFamilySpec,
    p: &Poly,
) -> Result<VerificationReport> {
    verify(&EquationSpec::from_family(weight.clone(), family), p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub value: Rational,
}

impl Serialize for PairEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PairEntry", 3)?;
        st.serialize_field("i", &self.i)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("value", &format_rational(&self.value))?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpsReport {
    /// `f[P_i P_j]` for `i <= j`, row-major.
    pub pairwise: Vec<PairEntry>,
    pub first_violation: Option<PairEntry>,
    pub is_ops: bool,
}

impl OpsReport {
    pub fn value(&self, i: usize, j: usize) -> Option<&Rational> {
        let (i, j) = (i.min(j), i.max(j));
        self.pairwise
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map(|e| &e.value)
    }
}

/// Full orthogonality table of `seq` under `f`; `seq[k]` must have degree `k`.
pub fn ops_check(f: &MomentFunctional, seq: &[Poly]) -> Result<OpsReport> {
    for (k, p) in seq.iter().enumerate() {
        if p.degree() != Some(k) {
            return Err(Error::DegreeMismatch {
                index: k,
                expected: k,
                found: p.degree(),
            });
        }
    }
    let mut pairwise = Vec::new();
    let mut first_violation = None;
    for i in 0..seq.len() {
        for j in i..seq.len() {
            let value = f.apply(&(&seq[i] * &seq[j]))?;
            let bad = if i == j {
                value.is_zero()
            } else {
                !value.is_zero()
            };
            let entry = PairEntry { i, j, value };
            if bad && first_violation.is_none() {
                first_violation = Some(entry.clone());
            }
            pairwise.push(entry);
        }
    }
    Ok(OpsReport {
        is_ops: first_violation.is_none(),
        pairwise,
        first_violation,
    })
}

/// `(L_w[K_n(y; zeta) q(y)], q(zeta))`; equal whenever `deg q <= n`.
pub fn reproducing_check(
    weight: &WeightSpec,
    zeta: &Rational,
    n: usize,
    q: &Poly,
) -> Result<(Rational, Rational)> {
    if let Some(d) = q.degree().filter(|&d| d > n) {
        return Err(Error::DegreeTooHigh { degree: d, max: n });
    }
    let k = kernel_sum(weight, zeta, n)?;
    let lhs = MomentFunctional::new(weight.clone()).apply(&(&k.poly * q))?;
    Ok((lhs, q.eval(zeta)))
}
