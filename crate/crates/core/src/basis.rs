//! Monic orthogonal bases for moment functionals and the kernel
//! polynomials `K_n(x; zeta)` of a weight.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::moments::{MomentFunctional, WeightSpec};
use crate::poly::{binomial, factorial, Poly, Rational};

/// Polynomials `p_0..p_N` orthogonal under a functional, with norms
/// `h_k = f[p_k^2]`, all nonzero. Monic as built.
#[derive(Clone, Debug)]
pub struct OrthogonalBasis {
    functional: MomentFunctional,
    polys: Vec<Poly>,
    norms: Vec<Rational>,
}

impl OrthogonalBasis {
    /// Gram-Schmidt on the monomials `1, x, x^2, ...`.
    ///
    /// Works for quasi-definite functionals; fails with
    /// [`Error::NonQuasiDefinite`] at the first vanishing norm.
    pub fn build(functional: &MomentFunctional, max_degree: usize) -> Result<Self> {
        let mut polys: Vec<Poly> = Vec::with_capacity(max_degree + 1);
        let mut norms: Vec<Rational> = Vec::with_capacity(max_degree + 1);
        for k in 0..=max_degree {
            let xk = Poly::monomial(Rational::one(), k);
            let mut p = xk.clone();
            for (pj, hj) in polys.iter().zip(&norms) {
                let proj = functional.apply(&(&xk * pj))? / hj;
                p = &p - &pj.scale(&proj);
            }
            let h = functional.apply(&(&p * &p))?;
            if h.is_zero() {
                return Err(Error::NonQuasiDefinite(k));
            }
            polys.push(p);
            norms.push(h);
        }
        Ok(OrthogonalBasis {
            functional: functional.clone(),
            polys,
            norms,
        })
    }

    /// Replaces each `p_k` by `factors[k] p_k` and recomputes the norms.
    pub fn rescaled(&self, factors: &[Rational]) -> Result<Self> {
        if factors.len() != self.polys.len() {
            return Err(Error::InvalidDegree(format!(
                "{} factors for {} polynomials",
                factors.len(),
                self.polys.len()
            )));
        }
        if factors.iter().any(Zero::is_zero) {
            return Err(Error::ZeroPolynomial);
        }
        let polys: Vec<Poly> = self
            .polys
            .iter()
            .zip(factors)
            .map(|(p, r)| p.scale(r))
            .collect();
        let norms = polys
            .iter()
            .map(|p| self.functional.apply(&(p * p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(OrthogonalBasis {
            functional: self.functional.clone(),
            polys,
            norms,
        })
    }

    pub fn functional(&self) -> &MomentFunctional {
        &self.functional
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn norms(&self) -> &[Rational] {
        &self.norms
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }
}

/// A kernel polynomial `K_n(x; zeta)` of a weight, normalized so that
/// `L_w[K_n] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelPolynomial {
    pub weight: WeightSpec,
    pub zeta: Rational,
    pub degree: usize,
    pub poly: Poly,
}

fn check_nondegenerate(basis: &OrthogonalBasis, zeta: &Rational, n: usize) -> Result<()> {
    if basis.polys[n].eval(zeta).is_zero() {
        Err(Error::KernelDegenerate(n))
    } else {
        Ok(())
    }
}

/// `K_n = sum_k p_k(zeta) p_k(x) / h_k` over the monic basis of `L_w`.
pub fn kernel_sum(weight: &WeightSpec, zeta: &Rational, n: usize) -> Result<KernelPolynomial> {
    let basis = OrthogonalBasis::build(&MomentFunctional::new(weight.clone()), n)?;
    kernel_sum_from_basis(&basis, zeta, n).map(|poly| KernelPolynomial {
        weight: weight.clone(),
        zeta: zeta.clone(),
        degree: n,
        poly,
    })
}

/// The kernel sum over the first `n + 1` members of an existing basis.
///
/// Any per-degree rescaling of the basis polynomials leaves the result
/// unchanged as long as the norms are recomputed to match.
pub fn kernel_sum_from_basis(basis: &OrthogonalBasis, zeta: &Rational, n: usize) -> Result<Poly> {
    if n > basis.max_degree() {
        return Err(Error::InvalidDegree(format!(
            "basis only reaches degree {}",
            basis.max_degree()
        )));
    }
    check_nondegenerate(basis, zeta, n)?;
    Ok(basis.polys[..=n]
        .iter()
        .zip(&basis.norms)
        .fold(Poly::zero(), |acc, (p, h)| {
            &acc + &p.scale(&(p.eval(zeta) / h))
        }))
}

/// `K_n` via the Christoffel-Darboux closed form
/// `[p_{n+1}(x) p_n(zeta) - p_n(x) p_{n+1}(zeta)] / (h_n (x - zeta))`.
pub fn kernel_cd(weight: &WeightSpec, zeta: &Rational, n: usize) -> Result<KernelPolynomial> {
    let basis = OrthogonalBasis::build(&MomentFunctional::new(weight.clone()), n + 1)?;
    check_nondegenerate(&basis, zeta, n)?;
    let (pn, pn1) = (&basis.polys[n], &basis.polys[n + 1]);
    let numer = &pn1.scale(&pn.eval(zeta)) - &pn.scale(&pn1.eval(zeta));
    let (quot, rem) = numer.div_rem(&Poly::linear_factor(zeta))?;
    if !rem.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "Christoffel-Darboux numerator leaves remainder {rem}"
        )));
    }
    Ok(KernelPolynomial {
        weight: weight.clone(),
        zeta: zeta.clone(),
        degree: n,
        poly: quot.scale(&basis.norms[n].recip()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalKind {
    Legendre,
    Laguerre,
}

/// Legendre polynomial from its terminating hypergeometric sum
/// `P_n(x) = sum_k (n choose k)(-n-1 choose k) ((1-x)/2)^k`.
pub fn legendre(n: usize) -> Poly {
    let half_one_minus_x = Poly::new(vec![
        Rational::new(1.into(), 2.into()),
        Rational::new((-1).into(), 2.into()),
    ]);
    (0..=n).fold(Poly::zero(), |acc, k| {
        // (-n-1 choose k) = (-1)^k (n+k choose k)
        let sign = if k % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let c = binomial(n, k) * binomial(n + k, k) * sign;
        &acc + &half_one_minus_x.pow(k).scale(&Rational::from_integer(c))
    })
}

/// Laguerre polynomial `L_n(x) = sum_k (n choose k) (-x)^k / k!`.
pub fn laguerre(n: usize) -> Poly {
    Poly::new(
        (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                Rational::new(binomial(n, k) * sign, factorial(k))
            })
            .collect(),
    )
}

/// `sum_{k<=n} (2k+1) P_k(x)` or `sum_{k<=n} L_k(x)`, built from the
/// explicit classical formulas without any moment computation.
pub fn classical_expansion(kind: ClassicalKind, n: usize) -> Poly {
    (0..=n).fold(Poly::zero(), |acc, k| match kind {
        ClassicalKind::Legendre => {
            &acc + &legendre(k).scale(&Rational::from_integer(BigInt::from(2 * k + 1)))
        }
        ClassicalKind::Laguerre => &acc + &laguerre(k),
    })
}
