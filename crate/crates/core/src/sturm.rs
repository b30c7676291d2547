//! Exact real-root counting on an open interval with Sturm sequences.

use num_traits::{Signed, Zero};

use crate::poly::{Poly, Rational};

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain[chain.len() - 1].is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2]
            .div_rem(&chain[n - 1])
            .expect("nonzero divisor");
        chain.push(-&r);
    }
    chain.pop();
    chain
}

fn sign_changes(chain: &[Poly], x: &Rational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|s| s.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of `p` strictly inside `(a, b)`.
///
/// Roots exactly at `a` or `b` are not counted. The zero polynomial is
/// reported as having no isolated roots; callers reject it separately.
pub fn count_roots_open(p: &Poly, a: &Rational, b: &Rational) -> usize {
    if p.degree().unwrap_or(0) == 0 || a >= b {
        return 0;
    }
    let g = p.gcd(&p.derivative());
    let (mut sf, _) = p.div_rem(&g).expect("gcd is nonzero");
    for end in [a, b] {
        if sf.eval(end).is_zero() {
            sf = sf.div_rem(&Poly::linear_factor(end)).expect("nonzero").0;
        }
    }
    if sf.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let chain = sturm_chain(&sf);
    sign_changes(&chain, a) - sign_changes(&chain, b)
}
