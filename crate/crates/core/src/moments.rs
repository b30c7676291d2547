//! Weights on an interval, their exact moment sequences, and the linear
//! functionals `p -> integral of m(y) p(y) w(y) dy` built from them.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::poly::{factorial, format_rational, parse_rational, Poly, Rational};

/// A normalized weight, i.e. one whose zeroth moment is exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSpec {
    /// Polynomial density on the finite interval `(a, b)`.
    PolynomialDensity {
        density: Poly,
        a: Rational,
        b: Rational,
    },
    /// `e^{-y}` on `(0, inf)`; moments are `k!`.
    Exponential,
    /// A raw moment list `mu_0, mu_1, ...`.
    ExplicitMoments(Vec<Rational>),
}

fn density_moment(density: &Poly, a: &Rational, b: &Rational, k: usize) -> Rational {
    density
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let e = k + i + 1;
            let top: Rational = Pow::pow(b, e as u32) - Pow::pow(a, e as u32);
            c * top / Rational::from_integer(BigInt::from(e))
        })
        .fold(Rational::zero(), |acc, t| acc + t)
}

impl WeightSpec {
    /// Polynomial density on `(a, b)`. With `normalize` the density is divided
    /// by its total mass; otherwise the mass must already be 1.
    pub fn polynomial_density(
        density: Poly,
        a: Rational,
        b: Rational,
        normalize: bool,
    ) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidWeight(format!(
                "interval ({a}, {b}) is empty"
            )));
        }
        if density.is_zero() {
            return Err(Error::InvalidWeight("density is identically zero".into()));
        }
        let mass = density_moment(&density, &a, &b, 0);
        let density = if mass.is_one() {
            density
        } else if normalize {
            if mass.is_zero() {
                return Err(Error::InvalidWeight("density has zero total mass".into()));
            }
            density.scale(&mass.recip())
        } else {
            return Err(Error::NotNormalized(format_rational(&mass)));
        };
        Ok(WeightSpec::PolynomialDensity { density, a, b })
    }

    /// Constant density `1/(b-a)` on `(a, b)`.
    pub fn uniform(a: Rational, b: Rational) -> Result<Self> {
        Self::polynomial_density(Poly::one(), a, b, true)
    }

    pub fn exponential() -> Self {
        WeightSpec::Exponential
    }

    pub fn explicit_moments(values: Vec<Rational>, normalize: bool) -> Result<Self> {
        let mu0 = values
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidWeight("moment list is empty".into()))?;
        if mu0.is_one() {
            Ok(WeightSpec::ExplicitMoments(values))
        } else if normalize && !mu0.is_zero() {
            let inv = mu0.recip();
            Ok(WeightSpec::ExplicitMoments(
                values.iter().map(|v| v * &inv).collect(),
            ))
        } else {
            Err(Error::NotNormalized(format_rational(&mu0)))
        }
    }

    /// Finite support interval, if the weight has one.
    pub fn interval(&self) -> Option<(&Rational, &Rational)> {
        match self {
            WeightSpec::PolynomialDensity { a, b, .. } => Some((a, b)),
            _ => None,
        }
    }

    fn compute_moment(&self, k: usize) -> Result<Rational> {
        match self {
            WeightSpec::PolynomialDensity { density, a, b } => Ok(density_moment(density, a, b, k)),
            WeightSpec::Exponential => Ok(Rational::from_integer(factorial(k))),
            WeightSpec::ExplicitMoments(values) => {
                values.get(k).cloned().ok_or(Error::MomentUnavailable {
                    order: k,
                    available: values.len(),
                })
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum WeightRepr {
    PolynomialDensity {
        density: Poly,
        a: String,
        b: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        normalize: bool,
    },
    Exponential,
    Moments {
        values: Vec<String>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        normalize: bool,
    },
}

impl TryFrom<WeightRepr> for WeightSpec {
    type Error = Error;
    fn try_from(r: WeightRepr) -> Result<Self> {
        match r {
            WeightRepr::PolynomialDensity {
                density,
                a,
                b,
                normalize,
            } => WeightSpec::polynomial_density(
                density,
                parse_rational(&a)?,
                parse_rational(&b)?,
                normalize,
            ),
            WeightRepr::Exponential => Ok(WeightSpec::Exponential),
            WeightRepr::Moments { values, normalize } => {
                let values = values
                    .iter()
                    .map(|v| parse_rational(v))
                    .collect::<Result<_>>()?;
                WeightSpec::explicit_moments(values, normalize)
            }
        }
    }
}

impl Serialize for WeightSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            WeightSpec::PolynomialDensity { density, a, b } => WeightRepr::PolynomialDensity {
                density: density.clone(),
                a: format_rational(a),
                b: format_rational(b),
                normalize: false,
            },
            WeightSpec::Exponential => WeightRepr::Exponential,
            WeightSpec::ExplicitMoments(v) => WeightRepr::Moments {
                values: v.iter().map(format_rational).collect(),
                normalize: false,
            },
        };
        repr.serialize(s)
    }
}

impl WeightSpec {
    /// Parses the JSON form, keeping validation failures as typed errors
    /// rather than folding them into a parse error.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: WeightRepr =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("weight: {e}")))?;
        repr.try_into()
    }
}

impl<'de> Deserialize<'de> for WeightSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        WeightRepr::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// Moments of a weight, computed on demand and cached.
#[derive(Debug)]
pub struct MomentSequence {
    weight: WeightSpec,
    cache: Mutex<Vec<Rational>>,
}

impl MomentSequence {
    pub fn new(weight: WeightSpec) -> Self {
        MomentSequence {
            weight,
            cache: Mutex::new(Vec::new()),
        }
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    /// `mu_k`, the integral of `y^k` against the weight.
    pub fn moment(&self, k: usize) -> Result<Rational> {
        let mut cache = self.cache.lock().expect("moment cache poisoned");
        while cache.len() <= k {
            let next = self.weight.compute_moment(cache.len())?;
            cache.push(next);
        }
        Ok(cache[k].clone())
    }

    /// Hankel matrix `[mu_{i+j}]` of the given size.
    pub fn hankel(&self, size: usize) -> Result<RationalMatrix> {
        let mus = (0..(2 * size).max(1))
            .map(|k| self.moment(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_fn(size, size, |i, j| {
            mus[i + j].clone()
        }))
    }
}

/// The functional `p -> L_w[m * p]` for a modifier polynomial `m`.
#[derive(Clone, Debug)]
pub struct MomentFunctional {
    base: Arc<MomentSequence>,
    modifier: Poly,
}

impl MomentFunctional {
    /// `L_w` itself (modifier 1).
    pub fn new(weight: WeightSpec) -> Self {
        MomentFunctional {
            base: Arc::new(MomentSequence::new(weight)),
            modifier: Poly::one(),
        }
    }

    pub fn from_sequence(base: Arc<MomentSequence>) -> Self {
        MomentFunctional {
            base,
            modifier: Poly::one(),
        }
    }

    pub fn with_modifier(weight: WeightSpec, modifier: Poly) -> Result<Self> {
        Self::new(weight).modified(&modifier)
    }

    pub fn base(&self) -> &Arc<MomentSequence> {
        &self.base
    }

    pub fn weight(&self) -> &WeightSpec {
        self.base.weight()
    }

    pub fn modifier(&self) -> &Poly {
        &self.modifier
    }

    /// The unmodified functional over the same moment cache.
    pub fn unmodified(&self) -> Self {
        Self::from_sequence(Arc::clone(&self.base))
    }

    pub fn apply(&self, p: &Poly) -> Result<Rational> {
        let prod = &self.modifier * p;
        let mut acc = Rational::zero();
        for (k, c) in prod.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc += c * self.base.moment(k)?;
            }
        }
        Ok(acc)
    }

    /// A functional whose modifier is multiplied by `extra`.
    pub fn modified(&self, extra: &Poly) -> Result<Self> {
        if extra.is_zero() {
            return Err(Error::ZeroModifier);
        }
        Ok(MomentFunctional {
            base: Arc::clone(&self.base),
            modifier: &self.modifier * extra,
        })
    }
}
