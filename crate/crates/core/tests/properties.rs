//! Property tests for the algebraic invariants, checked against the
//! independent oracles in `common`.

mod common;

use common::{q, qi, Bi, ALL, W};
use momker::basis::{kernel_cd, kernel_sum, kernel_sum_from_basis, OrthogonalBasis};
use momker::branch::{solve_degree1, solve_numeric, NumericOptions};
use momker::constructor::{
    build_matrix_a, construct_theorem1, construct_theorem2, eigen_check, sys_check, EquationSpec,
};
use momker::moments::{MomentFunctional, MomentSequence, WeightSpec};
use momker::verifier::{ops_check, reproducing_check, residual, surd_residual, verify};
use momker::{Error, Poly, Rational, RationalMatrix};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly_upto(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 1..=max_degree + 1).prop_map(Poly::new)
}

fn nonzero_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    poly_upto(max_degree).prop_filter("nonzero", |p| !p.is_zero())
}

fn weight() -> impl Strategy<Value = W> {
    prop::sample::select(ALL.to_vec())
}

fn weight_and_zeta() -> impl Strategy<Value = (W, Rational)> {
    weight().prop_flat_map(|w| (Just(w), prop::sample::select(w.zetas())))
}

fn to_bi(layers: &[Poly]) -> Bi {
    layers.iter().map(|p| p.coeffs().to_vec()).collect()
}

fn trim_bi(mut b: Bi) -> Bi {
    while b.last().is_some_and(|r| r.is_empty()) {
        b.pop();
    }
    b
}

/// Plain Laplace expansion along the first row.
fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    if m.is_empty() {
        return qi(1);
    }
    (0..m.len()).fold(Rational::zero(), |acc, j| {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn layers_recombine_to_substitution(p in nonzero_poly(5), alpha in poly_upto(5), beta in poly_upto(5)) {
        let layers = p.composition_layers(&alpha, &beta).unwrap();
        let oracle = common::substitute(p.coeffs(), alpha.coeffs(), beta.coeffs());
        prop_assert_eq!(trim_bi(to_bi(&layers)), trim_bi(oracle));
    }

    #[test]
    fn binomial_layers_shift(p in nonzero_poly(5), alpha in poly_upto(3)) {
        let qs = p.binomial_layers().unwrap();
        // sum_k q_k(x) alpha(y)^k as a bivariate polynomial
        let mut lhs: Bi = Vec::new();
        let mut apow = vec![qi(1)];
        for qk in &qs {
            for (i, c) in qk.coeffs().iter().enumerate() {
                if lhs.len() <= i {
                    lhs.resize(i + 1, Vec::new());
                }
                lhs[i] = common::add(&lhs[i], &common::scale(&apow, c));
            }
            apow = common::mul(&apow, alpha.coeffs());
        }
        let rhs = common::substitute(p.coeffs(), alpha.coeffs(), &[qi(1)]);
        prop_assert_eq!(trim_bi(lhs), trim_bi(rhs));
        // gamma_k with beta = 1 is the k-th Taylor layer evaluated at alpha
        let gammas = p.composition_layers(&alpha, &Poly::one()).unwrap();
        for (g, qk) in gammas.iter().zip(&qs) {
            prop_assert_eq!(g, &qk.compose(&alpha));
        }
    }

    #[test]
    fn telescoping(beta in poly_upto(4), k in 1usize..=7) {
        let lhs = &beta.pow(k) - &Poly::one();
        let sum = (0..k).fold(Poly::zero(), |acc, j| &acc + &beta.pow(j));
        prop_assert_eq!(lhs, &(&beta - &Poly::one()) * &sum);
    }

    #[test]
    fn determinant_matches_cofactor(n in 0usize..=4, entries in prop::collection::vec(rational(), 16)) {
        let rows: Vec<Vec<Rational>> = (0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
        let m = RationalMatrix::from_fn(n, n, |i, j| rows[i][j].clone());
        prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&rows));
    }

    #[test]
    fn functional_is_linear(w in weight(), a in rational(), b in rational(), p in poly_upto(6), r in poly_upto(6)) {
        let f = MomentFunctional::new(w.spec());
        let combo = &p.scale(&a) + &r.scale(&b);
        prop_assert_eq!(f.apply(&combo).unwrap(), a * f.apply(&p).unwrap() + b * f.apply(&r).unwrap());
        prop_assert_eq!(f.apply(&p).unwrap(), w.apply(p.coeffs()));
    }

    #[test]
    fn modifier_consistency(w in weight(), m in nonzero_poly(3), p in poly_upto(5)) {
        let modified = MomentFunctional::with_modifier(w.spec(), m.clone()).unwrap();
        let plain = MomentFunctional::new(w.spec());
        prop_assert_eq!(modified.apply(&p).unwrap(), plain.apply(&(&m * &p)).unwrap());
    }

    #[test]
    fn densities_normalize_and_hankel_positive(r in poly_upto(2), c in 1i64..=5, a in -3i64..=0, len in 1i64..=3) {
        // r^2 + c is positive on every interval
        let density = &(&r * &r) + &Poly::constant(qi(c));
        let w = WeightSpec::polynomial_density(density, qi(a), qi(a + len), true).unwrap();
        let seq = MomentSequence::new(w);
        prop_assert_eq!(seq.moment(0).unwrap(), qi(1));
        for size in 1..=4 {
            prop_assert!(seq.hankel(size).unwrap().determinant().unwrap().is_positive());
        }
    }

    #[test]
    fn residual_matches_bivariate(w in weight(), alpha in poly_upto(2), beta in poly_upto(2), p in nonzero_poly(4)) {
        let spec = EquationSpec::new(w.spec(), alpha.clone(), beta.clone());
        let r = residual(&spec, &p).unwrap();
        prop_assert_eq!(r.coeffs().to_vec(), common::residual(w, alpha.coeffs(), beta.coeffs(), p.coeffs()));
        prop_assert!(r.degree().is_none_or(|d| d <= p.degree().unwrap()));
    }

    #[test]
    fn reproducing_property((w, zeta) in weight_and_zeta(), n in 0usize..=6, coeffs in prop::collection::vec(rational(), 7)) {
        let qq = Poly::new(coeffs[..=n].to_vec());
        let (l, r) = reproducing_check(&w.spec(), &zeta, n, &qq).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn kernel_scale_invariant((w, zeta) in weight_and_zeta(), n in 0usize..=6, factors in prop::collection::vec(nonzero_rational(), 7)) {
        let basis = OrthogonalBasis::build(&MomentFunctional::new(w.spec()), 6).unwrap();
        let scaled = basis.rescaled(&factors).unwrap();
        let k = kernel_sum(&w.spec(), &zeta, n).unwrap().poly;
        prop_assert_eq!(kernel_sum_from_basis(&scaled, &zeta, n).unwrap(), k);
    }

    #[test]
    fn matrix_a_is_upper_triangular(w in weight(), alpha in poly_upto(2), beta in poly_upto(2), p in nonzero_poly(4)) {
        let spec = EquationSpec::new(w.spec(), alpha, beta.clone());
        let a = build_matrix_a(&spec, &p).unwrap();
        let f = MomentFunctional::new(w.spec());
        for i in 0..a.rows() {
            for j in 0..i {
                prop_assert!(a.get(i, j).is_zero());
            }
            prop_assert_eq!(a.get(i, i), &f.apply(&(&p * &beta.pow(i))).unwrap());
        }
    }

    #[test]
    fn degree_one_branches_verify(w in weight(), alpha in poly_upto(2), beta in poly_upto(2)) {
        let spec = EquationSpec::new(w.spec(), alpha, beta);
        match solve_degree1(&spec) {
            Ok(set) => {
                prop_assert!(set.exact.len() <= 3);
                for b in &set.exact {
                    let (r, i) = surd_residual(&spec, b).unwrap();
                    prop_assert!(r.is_zero() && i.is_zero());
                }
            }
            Err(e) => prop_assert!(matches!(e, Error::NotQuadratic(_)), "{e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn numeric_branches_closed_under_conjugation(seed in any::<u64>(), degree in 2usize..=3) {
        let spec = EquationSpec::new(WeightSpec::exponential(), Poly::x(), Poly::from_ints(&[1, 1]));
        let opts = NumericOptions { starts: 24, seed, ..NumericOptions::default() };
        let set = solve_numeric(&spec, degree, &opts).unwrap();
        for b in &set.numeric {
            prop_assert!(b.residual <= opts.residual_tol);
        }
        for b in &set.numeric {
            let c = b.conj();
            let nearest = set.numeric.iter().map(|o| o.distance(&c)).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= opts.dedup_radius, "conjugate missing, nearest at {nearest:e}");
        }
        let again = solve_numeric(&spec, degree, &opts).unwrap();
        prop_assert_eq!(&set.numeric, &again.numeric);
    }
}

#[test]
fn kernel_forms_agree_and_are_ops() {
    for w in ALL {
        for zeta in w.zetas() {
            let ks: Vec<Poly> = (0..=8)
                .map(|n| {
                    let s = kernel_sum(&w.spec(), &zeta, n).unwrap().poly;
                    assert_eq!(
                        s,
                        kernel_cd(&w.spec(), &zeta, n).unwrap().poly,
                        "{w:?} {zeta} {n}"
                    );
                    s
                })
                .collect();
            let f = MomentFunctional::with_modifier(w.spec(), Poly::linear_factor(&zeta)).unwrap();
            assert!(ops_check(&f, &ks).unwrap().is_ops, "{w:?} zeta={zeta}");
            for k in &ks {
                assert!(
                    verify(&EquationSpec::new(w.spec(), Poly::zero(), Poly::one()), k)
                        .unwrap()
                        .checks[0]
                        .passed()
                );
            }
        }
    }
}

#[test]
fn constructions_satisfy_their_conditions() {
    for w in ALL {
        for (sigma, tau, zeta) in common::affine_grid(w) {
            let beta = &Poly::linear_factor(&zeta).scale(&sigma) + &Poly::one();
            let alpha = Poly::linear_factor(&zeta).scale(&tau);
            for n in 1..=4 {
                let p1 = construct_theorem1(&w.spec(), &beta, n).unwrap().poly;
                let s1 = EquationSpec::new(w.spec(), Poly::zero(), beta.clone());
                assert!(eigen_check(&s1, &p1).unwrap() && sys_check(&s1, &p1).unwrap().is_empty());
                assert!(residual(&s1, &p1).unwrap().is_zero());
                let p2 = construct_theorem2(&w.spec(), &alpha, n).unwrap().poly;
                let s2 = EquationSpec::new(w.spec(), alpha.clone(), Poly::one());
                assert!(eigen_check(&s2, &p2).unwrap() && sys_check(&s2, &p2).unwrap().is_empty());
                assert!(residual(&s2, &p2).unwrap().is_zero());
                // never a bare monomial c x^n
                assert!(p1.coeffs()[..n].iter().any(|c| !c.is_zero()));
            }
        }
    }
}
