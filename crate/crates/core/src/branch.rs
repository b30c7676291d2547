//! Direct solution of the coefficient system `L_w[P gamma_k] = c_k`.
//!
//! Degree 1 is eliminated exactly to a quadratic whose roots are
//! quadratic surds. Higher degrees use multi-start Newton iteration in
//! complex floating point, with the system tensor assembled exactly from
//! moments and converted to `f64` once.
//!
//! Plain Newton is drawn to the zero vector and to a few large basins, so
//! each start runs a short deflation chain: once a root is found it is
//! divided out (`M(c) F(c)` with `M = prod (1/|c - r|^2 + 1)`) and Newton
//! restarts from the same initial point. Zero is always deflated.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::constructor::EquationSpec;
use crate::error::{Error, Result};
use crate::poly::{binomial, powers, Poly, Rational};
use crate::surd::{SurdPoly, SurdScalar};
use crate::verifier::{split_residual, surd_residual};

pub const DEFAULT_DEDUP_RADIUS: f64 = 1e-8;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
pub const START_RADIUS: f64 = 3.0;

#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub starts: usize,
    pub seed: u64,
    pub dedup_radius: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Roots found per start before moving on.
    pub chain: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            starts: 64,
            seed: 0,
            dedup_radius: DEFAULT_DEDUP_RADIUS,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            max_iter: 200,
            chain: 4,
        }
    }
}

/// A converged complex coefficient vector `c_0..c_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericBranch {
    pub coeffs: Vec<Complex64>,
    /// Largest residual coefficient modulus, recomputed exactly from the
    /// rational values of the floating-point coefficients.
    pub residual: f64,
}

impl NumericBranch {
    pub fn distance(&self, target: &[Complex64]) -> f64 {
        let n = self.coeffs.len().max(target.len());
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or_default();
                let b = target.get(k).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    pub fn conj(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(Complex64::conj).collect()
    }
}

#[derive(Serialize)]
struct ComplexRepr {
    re: f64,
    im: f64,
}

impl Serialize for NumericBranch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<ComplexRepr> = self
            .coeffs
            .iter()
            .map(|c| ComplexRepr { re: c.re, im: c.im })
            .collect();
        let mut st = s.serialize_struct("NumericBranch", 2)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("residual", &self.residual)?;
        st.end()
    }
}

/// How the Newton starts ended.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Newton runs that converged; one start may contribute several.
    pub converged: usize,
    /// Converged to the zero vector, which is not a polynomial solution.
    pub zero: usize,
    /// Hit the iteration cap or a singular Jacobian.
    pub stalled: usize,
    /// Iterates left every bounded region (blow-up) or became non-finite.
    pub diverged: usize,
    /// Converged but failed the exact residual re-check.
    pub rejected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchSet {
    pub degree: usize,
    pub exact: Vec<SurdPoly>,
    pub numeric: Vec<NumericBranch>,
    pub trivial: Vec<Poly>,
    pub starts: usize,
    pub dedup_radius: f64,
    pub residual_tol: f64,
    pub stats: SolveStats,
}

impl BranchSet {
    fn empty(degree: usize) -> Self {
        BranchSet {
            degree,
            exact: Vec::new(),
            numeric: Vec::new(),
            trivial: Vec::new(),
            starts: 0,
            dedup_radius: DEFAULT_DEDUP_RADIUS,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            stats: SolveStats::default(),
        }
    }

    /// Exact branches with a nonzero linear coefficient.
    pub fn nonconstant_exact(&self) -> Vec<&SurdPoly> {
        self.exact
            .iter()
            .filter(|b| b.degree() == Some(1))
            .collect()
    }

    /// The numeric branch nearest to `target`, with its max-norm distance.
    pub fn nearest(&self, target: &[Complex64]) -> Option<(&NumericBranch, f64)> {
        self.numeric
            .iter()
            .map(|b| (b, b.distance(target)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

fn quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<SurdScalar> {
    let two_a = a * Rational::from_integer(2.into());
    let disc = b * b - a * c * Rational::from_integer(4.into());
    let center = -b / &two_a;
    if disc.is_zero() {
        return vec![SurdScalar::from_rational(center)];
    }
    let half = two_a.recip();
    vec![
        SurdScalar::new(center.clone(), half.clone(), disc.clone()),
        SurdScalar::new(center, -half, disc),
    ]
}

/// Exact branches for degree 1.
///
/// With `P = c0 + c1 x` the system reads
/// `c0^2 + c0 c1 (L[alpha] + L[y]) + c1^2 L[y alpha] = c0` and
/// `c1 (c0 L[beta] + c1 L[y beta]) = c1`. Branches with `c1 != 0` come
/// from the linear second factor substituted into the first equation; the
/// constant solution `P = 1` is always appended.
pub fn solve_degree1(spec: &EquationSpec) -> Result<BranchSet> {
    let f = spec.functional();
    let y = Poly::x();
    let b0 = f.apply(&spec.beta)?;
    let b1 = f.apply(&(&y * &spec.beta))?;
    let s = f.apply(&spec.alpha)? + f.apply(&y)?;
    let a1 = f.apply(&(&y * &spec.alpha))?;

    let mut branches: Vec<SurdPoly> = Vec::new();
    if !b0.is_zero() {
        // c0 = u - v c1
        let u = b0.recip();
        let v = &b1 / &b0;
        let two = Rational::from_integer(2.into());
        let qa = &v * &v - &v * &s + &a1;
        let qb = -(&two * &u * &v) + &u * &s + &v;
        let qc = &u * &u - &u;
        let roots = if !qa.is_zero() {
            quadratic_roots(&qa, &qb, &qc)
        } else if !qb.is_zero() {
            vec![SurdScalar::from_rational(-&qc / &qb)]
        } else if qc.is_zero() {
            return Err(Error::NotQuadratic(format!(
                "every c1 solves the system (c0 = {u} - {v} c1)"
            )));
        } else {
            Vec::new()
        };
        for c1 in roots.into_iter().filter(|r| !r.is_zero()) {
            let c0 = SurdScalar::from_rational(u.clone())
                .checked_sub(&c1.scale(&v))
                .expect("single radicand");
            branches.push(SurdPoly::new(vec![c0, c1]));
        }
    } else if !b1.is_zero() {
        let c1 = b1.recip();
        let qb = &c1 * &s - Rational::one();
        let qc = &c1 * &c1 * &a1;
        for c0 in quadratic_roots(&Rational::one(), &qb, &qc) {
            branches.push(SurdPoly::new(vec![
                c0,
                SurdScalar::from_rational(c1.clone()),
            ]));
        }
    }
    branches.dedup();
    branches.push(SurdPoly::from_poly(&Poly::one()));

    for b in &branches {
        let (r, i) = surd_residual(spec, b)?;
        if !r.is_zero() || !i.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "degree-1 branch {b} leaves residual ({r}) + sqrt(d) ({i})"
            )));
        }
    }
    let mut set = BranchSet::empty(1);
    set.exact = branches;
    Ok(set)
}

/// `tensor[k][i][j]` such that `F_k(c) = sum_{i,j} c_i c_j tensor[k][i][j] - c_k`.
fn system_tensor(spec: &EquationSpec, n: usize) -> Result<Vec<Vec<Vec<f64>>>> {
    let f = spec.functional();
    let alpha_pows = powers(&spec.alpha, n);
    let beta_pows = powers(&spec.beta, n);
    let mut t = vec![vec![vec![0.0; n + 1]; n + 1]; n + 1];
    for (k, tk) in t.iter_mut().enumerate() {
        for j in k..=n {
            let g =
                (&alpha_pows[j - k] * &beta_pows[k]).scale(&Rational::from_integer(binomial(j, k)));
            for (i, row) in tk.iter_mut().enumerate() {
                let v = f.apply(&(&Poly::monomial(Rational::one(), i) * &g))?;
                row[j] = v.to_f64().unwrap_or(f64::NAN);
            }
        }
    }
    Ok(t)
}

fn eval_system(t: &[Vec<Vec<f64>>], c: &[Complex64]) -> Vec<Complex64> {
    t.iter()
        .enumerate()
        .map(|(k, tk)| {
            let mut acc = -c[k];
            for (i, row) in tk.iter().enumerate() {
                for (j, &w) in row.iter().enumerate() {
                    if w != 0.0 {
                        acc += c[i] * c[j] * w;
                    }
                }
            }
            acc
        })
        .collect()
}

fn jacobian(t: &[Vec<Vec<f64>>], c: &[Complex64]) -> Vec<Vec<Complex64>> {
    let n = c.len();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|m| {
                    let mut acc = if k == m {
                        -Complex64::one()
                    } else {
                        Complex64::zero()
                    };
                    for j in 0..n {
                        acc += c[j] * (t[k][m][j] + t[k][j][m]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(r);
            for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= factor * src;
            }
            let v = b[col];
            b[r] -= factor * v;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

enum Outcome {
    Converged(Vec<Complex64>),
    Stalled,
    Diverged,
}

/// Damping factor of the deflated Newton step: the step for `M F` is the
/// plain step `d` scaled by `1 / (1 - grad(log M) . d)`.
fn deflation_scale(c: &[Complex64], d: &[Complex64], deflated: &[Vec<Complex64>]) -> f64 {
    let mut s = 0.0;
    for r in deflated {
        let e: Vec<Complex64> = c.iter().zip(r).map(|(a, b)| a - b).collect();
        let nn: f64 = e.iter().map(|z| z.norm_sqr()).sum();
        if nn == 0.0 {
            continue;
        }
        let ed: f64 = e.iter().zip(d).map(|(a, b)| (a.conj() * b).re).sum();
        let m = 1.0 / nn + 1.0;
        s -= 2.0 * ed / (nn * nn) / m;
    }
    1.0 / (1.0 - s)
}

fn newton(
    t: &[Vec<Vec<f64>>],
    mut c: Vec<Complex64>,
    max_iter: usize,
    deflated: &[Vec<Complex64>],
) -> Outcome {
    let mut settled = 0;
    for _ in 0..max_iter {
        let fc = eval_system(t, &c);
        if !fc.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || max_norm(&c) > 1e12 {
            return Outcome::Diverged;
        }
        let rhs: Vec<Complex64> = fc.iter().map(|z| -z).collect();
        let Some(step) = solve_linear(jacobian(t, &c), rhs) else {
            return Outcome::Stalled;
        };
        let tau = deflation_scale(&c, &step, deflated);
        if !tau.is_finite() {
            return Outcome::Stalled;
        }
        for (ci, si) in c.iter_mut().zip(&step) {
            *ci += si * tau;
        }
        if max_norm(&step) <= 1e-14 * (1.0 + max_norm(&c)) {
            // a couple of extra steps to settle the last bits
            settled += 1;
            if settled >= 2 {
                return Outcome::Converged(c);
            }
        }
    }
    Outcome::Stalled
}

fn to_exact(c: &[Complex64]) -> Option<(Poly, Poly)> {
    let re = c
        .iter()
        .map(|z| BigRational::from_float(z.re))
        .collect::<Option<Vec<_>>>()?;
    let im = c
        .iter()
        .map(|z| BigRational::from_float(z.im))
        .collect::<Option<Vec<_>>>()?;
    Some((Poly::new(re), Poly::new(im)))
}

/// Exact residual of a floating-point candidate, as the largest coefficient
/// modulus rounded to `f64`.
pub fn numeric_residual(spec: &EquationSpec, c: &[Complex64]) -> Result<f64> {
    let (re, im) =
        to_exact(c).ok_or_else(|| Error::InternalInconsistency("non-finite coefficient".into()))?;
    let (r, i) = split_residual(spec, &re, &im, &-Rational::one())?;
    let len = r.coeffs().len().max(i.coeffs().len());
    Ok((0..len)
        .map(|k| {
            let a = r.coeff(k).to_f64().unwrap_or(f64::INFINITY);
            let b = i.coeff(k).to_f64().unwrap_or(f64::INFINITY);
            a.hypot(b)
        })
        .fold(0.0, f64::max))
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Multi-start Newton on the degree-`degree` coefficient system.
///
/// Starts are drawn uniformly from the disc of radius 3 per coefficient by
/// a ChaCha generator seeded with `opts.seed`, so results are reproducible.
/// An empty branch set is a valid outcome; `stats` records why.
pub fn solve_numeric(
    spec: &EquationSpec,
    degree: usize,
    opts: &NumericOptions,
) -> Result<BranchSet> {
    if degree == 0 {
        return Err(Error::InvalidDegree(
            "numeric solver needs degree >= 1".into(),
        ));
    }
    if opts.starts == 0 {
        return Err(Error::InvalidDegree(
            "at least one start is required".into(),
        ));
    }
    let t = system_tensor(spec, degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<Complex64>> = (0..opts.starts)
        .map(|_| {
            (0..=degree)
                .map(|_| {
                    let r = START_RADIUS * rng.gen::<f64>().sqrt();
                    let theta = std::f64::consts::TAU * rng.gen::<f64>();
                    Complex64::from_polar(r, theta)
                })
                .collect()
        })
        .collect();

    let zero = vec![Complex64::zero(); degree + 1];
    let chain = opts.chain.max(1);
    let outcomes: Vec<Outcome> = starts
        .into_par_iter()
        .flat_map_iter(|c0| {
            let mut deflated = vec![zero.clone()];
            let mut out = Vec::new();
            while out.len() < chain {
                let o = newton(&t, c0.clone(), opts.max_iter, &deflated);
                let Outcome::Converged(c) = &o else {
                    out.push(o);
                    break;
                };
                deflated.push(c.clone());
                out.push(o);
            }
            out
        })
        .collect();

    let mut stats = SolveStats::default();
    let mut candidates = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Converged(c) if max_norm(&c) < opts.dedup_radius => stats.zero += 1,
            Outcome::Converged(c) => {
                stats.converged += 1;
                // the system has real coefficients, so roots come in conjugate pairs
                candidates.push(c.iter().map(|z| z.conj()).collect());
                candidates.push(c);
            }
            Outcome::Stalled => stats.stalled += 1,
            Outcome::Diverged => stats.diverged += 1,
        }
    }
    candidates.sort_by(|a, b| lex_cmp(a, b));
    let mut kept: Vec<Vec<Complex64>> = Vec::new();
    for c in candidates {
        let dup = kept.iter().any(|k| {
            k.iter()
                .zip(&c)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
                <= opts.dedup_radius
        });
        if !dup {
            kept.push(c);
        }
    }
    let mut numeric = Vec::new();
    for c in kept {
        let residual = numeric_residual(spec, &c)?;
        if residual <= opts.residual_tol {
            numeric.push(NumericBranch {
                coeffs: c,
                residual,
            });
        } else {
            log::debug!("rejecting candidate with residual {residual:e}");
            stats.rejected += 1;
        }
    }
    log::info!(
        "newton: {} starts, {} converged, {} stalled, {} diverged, {} distinct branches",
        opts.starts,
        stats.converged,
        stats.stalled,
        stats.diverged,
        numeric.len()
    );
    Ok(BranchSet {
        degree,
        exact: Vec::new(),
        numeric,
        trivial: Vec::new(),
        starts: opts.starts,
        dedup_radius: opts.dedup_radius,
        residual_tol: opts.residual_tol,
        stats,
    })
}

/// Monomial solutions `c x^n`: `c = 1 / L_w[y^n beta^n]` provided the lower
/// conditions `L_w[y^n alpha^(n-k) beta^k] = 0` hold for every `k < n`.
pub fn trivial_branches(spec: &EquationSpec, degree: usize) -> Result<Vec<Poly>> {
    if degree == 0 {
        return Err(Error::InvalidDegree(
            "monomial branches need degree >= 1".into(),
        ));
    }
    let n = degree;
    let f = spec.functional();
    let yn = Poly::monomial(Rational::one(), n);
    let alpha_pows = powers(&spec.alpha, n);
    let beta_pows = powers(&spec.beta, n);
    let top = f.apply(&(&yn * &beta_pows[n]))?;
    if top.is_zero() {
        return Ok(Vec::new());
    }
    for k in 0..n {
        let g = &(&yn * &alpha_pows[n - k]) * &beta_pows[k];
        if !f.apply(&g)?.is_zero() {
            return Ok(Vec::new());
        }
    }
    Ok(vec![Poly::monomial(top.recip(), n)])
}

/// Exact branches for degree 1 (when elimination succeeds), numeric
/// branches, and monomial branches.
pub fn solve(spec: &EquationSpec, degree: usize, opts: &NumericOptions) -> Result<BranchSet> {
    let mut set = solve_numeric(spec, degree, opts)?;
    if degree == 1 {
        match solve_degree1(spec) {
            Ok(exact) => set.exact = exact.exact,
            Err(Error::NotQuadratic(why)) => log::info!("exact elimination skipped: {why}"),
            Err(e) => return Err(e),
        }
    }
    set.trivial = trivial_branches(spec, degree)?;
    Ok(set)
}
