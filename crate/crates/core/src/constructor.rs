//! The coefficient matrix of the integral equation, its identity
//! conditions, and the bordered-determinant constructions for the cases
//! `alpha = 0` and `beta = 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::moments::{MomentFunctional, WeightSpec};
use crate::poly::{binomial, format_rational, powers, Poly, Rational};
use crate::sturm::count_roots_open;

/// The equation `int P(y) P(alpha(y) + x beta(y)) w(y) dy = P(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSpec {
    pub weight: WeightSpec,
    pub alpha: Poly,
    pub beta: Poly,
}

impl EquationSpec {
    pub fn new(weight: WeightSpec, alpha: Poly, beta: Poly) -> Self {
        EquationSpec {
            weight,
            alpha,
            beta,
        }
    }

    pub fn from_family(weight: WeightSpec, family: &AffineFamilySpec) -> Self {
        let (alpha, beta) = family.to_alpha_beta();
        EquationSpec {
            weight,
            alpha,
            beta,
        }
    }

    pub fn functional(&self) -> MomentFunctional {
        MomentFunctional::new(self.weight.clone())
    }
}

/// The map `(y - zeta)(tau + sigma x) + x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFamilySpec {
    pub zeta: Rational,
    pub tau: Rational,
    pub sigma: Rational,
}

impl AffineFamilySpec {
    pub fn new(zeta: Rational, tau: Rational, sigma: Rational) -> Self {
        AffineFamilySpec { zeta, tau, sigma }
    }

    /// `alpha(y) = tau (y - zeta)`, `beta(y) = sigma (y - zeta) + 1`.
    pub fn to_alpha_beta(&self) -> (Poly, Poly) {
        let shift = Poly::linear_factor(&self.zeta);
        let alpha = shift.scale(&self.tau);
        let beta = &shift.scale(&self.sigma) + &Poly::one();
        (alpha, beta)
    }
}

pub fn family_to_alpha_beta(spec: &AffineFamilySpec) -> (Poly, Poly) {
    spec.to_alpha_beta()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionCase {
    Theorem1,
    Theorem2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionResult {
    pub poly: Poly,
    pub delta: Rational,
    pub case: ConstructionCase,
}

impl Serialize for ConstructionResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ConstructionResult", 3)?;
        st.serialize_field("poly", &self.poly)?;
        st.serialize_field("delta", &format_rational(&self.delta))?;
        st.serialize_field("case", &self.case)?;
        st.end()
    }
}

/// One failed condition `L_w[P alpha^(j-i) beta^i] = delta_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SysViolation {
    pub i: usize,
    pub j: usize,
    pub actual: Rational,
}

/// Entry `(i, j)` is `(j choose i) L_w[P alpha^(j-i) beta^i]` for `i <= j`.
pub fn build_matrix_a(spec: &EquationSpec, p: &Poly) -> Result<RationalMatrix> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    let table = condition_table(spec, p, n)?;
    Ok(RationalMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i > j {
            Rational::zero()
        } else {
            &table[i][j] * Rational::from_integer(binomial(j, i))
        }
    }))
}

/// `table[i][j] = L_w[P alpha^(j-i) beta^i]` for `i <= j <= n`.
fn condition_table(spec: &EquationSpec, p: &Poly, n: usize) -> Result<Vec<Vec<Rational>>> {
    let f = spec.functional();
    let alpha_pows = powers(&spec.alpha, n);
    let beta_pows = powers(&spec.beta, n);
    (0..=n)
        .map(|i| {
            let pb = p * &beta_pows[i];
            (0..=n)
                .map(|j| {
                    if j < i {
                        Ok(Rational::zero())
                    } else {
                        f.apply(&(&pb * &alpha_pows[j - i]))
                    }
                })
                .collect()
        })
        .collect()
}

/// True iff the coefficient vector of `p` is a fixed point of `A`.
pub fn eigen_check(spec: &EquationSpec, p: &Poly) -> Result<bool> {
    let a = build_matrix_a(spec, p)?;
    let c = p.coeffs().to_vec();
    Ok(a.mul_vec(&c) == c)
}

/// All failing conditions of the system that makes `A` the identity.
pub fn sys_check(spec: &EquationSpec, p: &Poly) -> Result<Vec<SysViolation>> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    let table = condition_table(spec, p, n)?;
    let mut out = Vec::new();
    for (i, row) in table.iter().enumerate() {
        for (j, actual) in row.iter().enumerate().skip(i) {
            let expected = if i == j {
                Rational::one()
            } else {
                Rational::zero()
            };
            if *actual != expected {
                out.push(SysViolation {
                    i,
                    j,
                    actual: actual.clone(),
                });
            }
        }
    }
    Ok(out)
}

fn check_nonvanishing(weight: &WeightSpec, g: &Poly, what: &str) -> Result<()> {
    if let Some((a, b)) = weight.interval() {
        let roots = count_roots_open(g, a, b);
        if roots > 0 {
            return Err(Error::HypothesisViolated(format!(
                "{what} = {g} has {roots} root(s) inside ({a}, {b})"
            )));
        }
    }
    Ok(())
}

/// Bordered-determinant construction shared by both cases.
///
/// Row 0 holds `L_w[y^j]`; row `i >= 1` holds `L_{g w}[y^j base^(i-1)]`.
/// `P_n` is the determinant with row 0 replaced by `1, x, ..., x^n`,
/// divided by `Delta_n`; its coefficients are signed top-row cofactors.
fn bordered(
    weight: &WeightSpec,
    g: &Poly,
    base: &Poly,
    n: usize,
    case: ConstructionCase,
) -> Result<ConstructionResult> {
    let f = MomentFunctional::new(weight.clone());
    let fg = f.modified(g)?;
    let base_pows = powers(base, n.saturating_sub(1));
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(
        (0..=n)
            .map(|j| f.base().moment(j))
            .collect::<Result<Vec<_>>>()?,
    );
    for bp in base_pows.iter().take(n) {
        rows.push(
            (0..=n)
                .map(|j| fg.apply(&(&Poly::monomial(Rational::one(), j) * bp)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let m = RationalMatrix::from_rows(rows)?;
    let delta = m.determinant()?;
    if delta.is_zero() {
        return Err(Error::DegenerateDeterminant(n));
    }
    let coeffs = (0..=n)
        .map(|j| {
            let minor = m.minor_matrix(0, j).determinant()?;
            let sign = if j % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            Ok(minor * Rational::from_integer(sign) / &delta)
        })
        .collect::<Result<Vec<_>>>()?;
    let poly = Poly::new(coeffs);
    if poly.degree() != Some(n) {
        return Err(Error::NonQuasiDefinite(n));
    }
    Ok(ConstructionResult { poly, delta, case })
}

/// `P_n` with `L_w[P_n] = 1` and `L_{(beta-1)w}[P_n beta^i] = 0` for `i < n`,
/// solving the equation with `alpha = 0`.
pub fn construct_theorem1(
    weight: &WeightSpec,
    beta: &Poly,
    n: usize,
) -> Result<ConstructionResult> {
    let g = beta - &Poly::one();
    if g.is_zero() {
        return Err(Error::BetaEqualsOne);
    }
    check_nonvanishing(weight, &g, "beta - 1")?;
    bordered(weight, &g, beta, n, ConstructionCase::Theorem1)
}

/// `P_n` with `L_w[P_n] = 1` and `L_{alpha w}[P_n alpha^i] = 0` for `i < n`,
/// solving the equation with `beta = 1`.
pub fn construct_theorem2(
    weight: &WeightSpec,
    alpha: &Poly,
    n: usize,
) -> Result<ConstructionResult> {
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    check_nonvanishing(weight, alpha, "alpha")?;
    bordered(weight, alpha, alpha, n, ConstructionCase::Theorem2)
}
