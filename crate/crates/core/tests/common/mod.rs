//! Independent oracles for the integration tests. Nothing here calls the
//! library's algebra: moments come from closed forms, compositions from
//! bivariate Horner expansion, classical polynomials from their
//! three-term recurrences.
#![allow(dead_code)]

use momker::{Poly, Rational, WeightSpec};
use num_bigint::BigInt;
use num_traits::Zero;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The three test weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum W {
    /// 1/2 on (-1, 1)
    Uniform,
    /// (3/2) y^2 on (-1, 1)
    Squared,
    /// e^{-y} on (0, inf)
    Exp,
}

pub const ALL: [W; 3] = [W::Uniform, W::Squared, W::Exp];

impl W {
    pub fn spec(self) -> WeightSpec {
        match self {
            W::Uniform => WeightSpec::uniform(qi(-1), qi(1)).unwrap(),
            W::Squared => {
                WeightSpec::polynomial_density(Poly::from_ints(&[0, 0, 1]), qi(-1), qi(1), true)
                    .unwrap()
            }
            W::Exp => WeightSpec::exponential(),
        }
    }

    /// Closed-form moment `mu_k`.
    pub fn mu(self, k: usize) -> Rational {
        match self {
            W::Uniform => {
                if k % 2 == 1 {
                    Rational::zero()
                } else {
                    q(1, k as i64 + 1)
                }
            }
            W::Squared => {
                if k % 2 == 1 {
                    Rational::zero()
                } else {
                    q(3, k as i64 + 3)
                }
            }
            W::Exp => Rational::from_integer((1..=k as u64).map(BigInt::from).product()),
        }
    }

    /// Points outside the open support, where the kernel is nondegenerate.
    pub fn zetas(self) -> Vec<Rational> {
        match self {
            W::Uniform | W::Squared => vec![qi(1), qi(-1), qi(2), q(-3, 2)],
            W::Exp => vec![qi(0), qi(-1), q(-3, 2)],
        }
    }

    pub fn apply(self, p: &[Rational]) -> Rational {
        p.iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, c)| acc + c * self.mu(k))
    }
}

pub fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

pub fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    trim(a.iter().map(|c| c * s).collect())
}

pub fn poly(v: Vec<Rational>) -> Poly {
    Poly::new(v)
}

/// Bivariate polynomial `b[i][j]` = coefficient of `x^i y^j`.
pub type Bi = Vec<Vec<Rational>>;

fn bi_mul(a: &Bi, b: &Bi) -> Bi {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r: Bi = vec![Vec::new(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = add(&r[i + j], &mul(ai, bj));
        }
    }
    r
}

/// `p(alpha(y) + x beta(y))` by Horner in the bivariate ring.
pub fn substitute(p: &[Rational], alpha: &[Rational], beta: &[Rational]) -> Bi {
    let inner: Bi = vec![alpha.to_vec(), beta.to_vec()];
    let mut acc: Bi = Vec::new();
    for c in p.iter().rev() {
        acc = bi_mul(&acc, &inner);
        if acc.is_empty() {
            acc.push(Vec::new());
        }
        acc[0] = add(&acc[0], std::slice::from_ref(c));
    }
    acc
}

/// Coefficients in `x` of `L_w[P(y) P(alpha + x beta)] - P(x)`.
pub fn residual(w: W, alpha: &[Rational], beta: &[Rational], p: &[Rational]) -> Vec<Rational> {
    let b = substitute(p, alpha, beta);
    let n = b.len().max(p.len());
    trim(
        (0..n)
            .map(|k| {
                let layer = b.get(k).cloned().unwrap_or_default();
                w.apply(&mul(p, &layer)) - p.get(k).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

/// Element `a + b sqrt(d)` of a quadratic extension with fixed `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Qd {
    pub a: Rational,
    pub b: Rational,
}

impl Qd {
    pub fn new(a: Rational, b: Rational) -> Self {
        Qd { a, b }
    }
    fn zero() -> Self {
        Qd::new(Rational::zero(), Rational::zero())
    }
    fn add(&self, o: &Qd) -> Qd {
        Qd::new(&self.a + &o.a, &self.b + &o.b)
    }
    fn mul(&self, o: &Qd, d: &Rational) -> Qd {
        Qd::new(
            &self.a * &o.a + &self.b * &o.b * d,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
    fn scale(&self, r: &Rational) -> Qd {
        Qd::new(&self.a * r, &self.b * r)
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// Residual of a `Q(sqrt d)`-coefficient candidate, by evaluating the
/// equation at the points `x = 0..=n+1` and comparing both sides. A degree-`n`
/// identity in `x` holds iff it holds at `n + 1` points.
pub fn residual_qd(w: W, alpha: &[Rational], beta: &[Rational], p: &[Qd], d: &Rational) -> Vec<Qd> {
    let deg = p.len().saturating_sub(1);
    (0..=deg + 1)
        .map(|xi| {
            let x = qi(xi as i64);
            // inner(y) = alpha(y) + x beta(y) as a rational polynomial
            let inner = add(alpha, &scale(beta, &x));
            // P(inner(y)) with Q(sqrt d) coefficients, Horner in y
            let mut comp: Vec<Qd> = Vec::new();
            for c in p.iter().rev() {
                let mut next = vec![Qd::zero(); comp.len() + inner.len().max(1)];
                for (i, ci) in comp.iter().enumerate() {
                    for (j, r) in inner.iter().enumerate() {
                        next[i + j] = next[i + j].add(&ci.scale(r));
                    }
                }
                next[0] = next[0].add(c);
                comp = next;
            }
            // L_w[P(y) comp(y)]
            let mut lhs = Qd::zero();
            for (i, pi) in p.iter().enumerate() {
                for (j, cj) in comp.iter().enumerate() {
                    lhs = lhs.add(&pi.mul(cj, d).scale(&w.mu(i + j)));
                }
            }
            // P(x)
            let mut rhs = Qd::zero();
            for c in p.iter().rev() {
                rhs = rhs.scale(&x).add(c);
            }
            lhs.add(&rhs.scale(&qi(-1)))
        })
        .collect()
}

/// Legendre polynomials by Bonnet's recurrence.
pub fn legendre_rec(n: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![qi(1)], vec![qi(0), qi(1)]];
    for k in 1..n {
        let kk = k as i64;
        let a = scale(&mul(&[qi(0), qi(1)], &out[k]), &q(2 * kk + 1, kk + 1));
        let b = scale(&out[k - 1], &q(-kk, kk + 1));
        out.push(add(&a, &b));
    }
    out.truncate(n + 1);
    out
}

/// Laguerre polynomials by their three-term recurrence.
pub fn laguerre_rec(n: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![qi(1)], vec![qi(1), qi(-1)]];
    for k in 1..n {
        let kk = k as i64;
        let a = mul(&[qi(2 * kk + 1), qi(-1)], &out[k]);
        let b = scale(&out[k - 1], &qi(-kk));
        out.push(scale(&add(&a, &b), &q(1, kk + 1)));
    }
    out.truncate(n + 1);
    out
}

/// `sum (2k+1) P_k` for the uniform weight at zeta = 1, `sum L_k` for the
/// exponential weight at zeta = 0.
pub fn classical_kernel(w: W, n: usize) -> Vec<Rational> {
    match w {
        W::Uniform => legendre_rec(n)
            .iter()
            .enumerate()
            .fold(Vec::new(), |acc, (k, p)| {
                add(&acc, &scale(p, &qi(2 * k as i64 + 1)))
            }),
        W::Exp => laguerre_rec(n)
            .iter()
            .fold(Vec::new(), |acc, p| add(&acc, p)),
        W::Squared => panic!("no classical family for this weight"),
    }
}

/// `(sigma, tau, zeta)` grid with zeta outside the open support and
/// nonzero sigma, tau.
pub fn affine_grid(w: W) -> Vec<(Rational, Rational, Rational)> {
    match w {
        W::Uniform | W::Squared => vec![
            (qi(1), qi(1), qi(1)),
            (qi(2), qi(-1), qi(-1)),
            (q(-1, 2), qi(3), qi(2)),
            (qi(3), q(1, 2), q(-3, 2)),
            (q(1, 3), qi(-2), qi(1)),
            (qi(-2), q(2, 3), qi(2)),
        ],
        W::Exp => vec![
            (qi(1), qi(1), qi(0)),
            (qi(2), qi(-1), qi(-1)),
            (q(-1, 2), qi(3), q(-3, 2)),
            (qi(3), q(1, 2), qi(0)),
            (q(1, 3), qi(-2), qi(-1)),
            (qi(-2), q(2, 3), q(-3, 2)),
        ],
    }
}
