#![allow(dead_code)]

use fermi_core::exactnum::{BigInt, BigRational, LambdaPoly};
use fermi_core::floquet::OperatorSpec;
use fermi_core::laurent::{Exponent, LaurentPoly};
use rand::Rng;

pub fn rat(p: i64, r: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(r))
}

pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn random_nonzero_rational(rng: &mut impl Rng) -> BigRational {
    loop {
        let r = random_rational(rng);
        if r != rat(0, 1) {
            return r;
        }
    }
}

/// Random d = 2 spec with ν ≤ 2, q ≤ (2,2), hops of range ≤ 1 and a random
/// potential. Hermitian specs list each undirected hop once and rely on
/// symmetrization.
pub fn random_spec(rng: &mut impl Rng, hermitian: bool) -> OperatorSpec {
    let nu = rng.gen_range(1..=2);
    let q = vec![rng.gen_range(1..=2), rng.gen_range(1..=2)];
    let mut s = OperatorSpec::new(2, nu, q.clone());
    s.symmetrize = hermitian;
    let hops = rng.gen_range(1..=4);
    for _ in 0..hops {
        let i = rng.gen_range(0..nu);
        let j = rng.gen_range(0..nu);
        let n = vec![rng.gen_range(-1..=1), rng.gen_range(-1..=1)];
        let zero = n.iter().all(|&x| x == 0);
        if hermitian {
            // Keep one representative of each {(i,j,n), (j,i,−n)} pair.
            let canonical = i < j || (i == j && n > vec![0, 0]);
            if !canonical {
                continue;
            }
        } else if i == j && zero {
            continue;
        }
        s.add_hop(i, j, n, random_nonzero_rational(rng));
    }
    if s.hopping.is_empty() {
        s.add_hop(0, 0, vec![1, 0], rat(1, 1));
    }
    for w in s.cells() {
        for o in 0..nu {
            s.set_potential(o, w.clone(), random_rational(rng));
        }
    }
    s
}

/// Random nonzero Laurent polynomial in `vars` variables with at most
/// `terms` terms of small exponent and nonzero rational coefficients.
pub fn random_laurent(rng: &mut impl Rng, vars: usize, terms: usize) -> LaurentPoly {
    let mut support = std::collections::BTreeMap::new();
    for _ in 0..terms.max(1) {
        let e: Vec<i64> = (0..vars).map(|_| rng.gen_range(-2..=2)).collect();
        support.insert(e, random_nonzero_rational(rng));
    }
    LaurentPoly::from_terms(vars, support.into_iter().map(|(e, c)| (Exponent(e), LambdaPoly::from_rational(c))))
}
