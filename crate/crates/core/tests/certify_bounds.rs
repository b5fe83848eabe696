mod common;

use common::{random_nonzero_rational, rat};
use fermi_core::certify::{
    certify_polynomial, count_binomial_factors, meets_origin_sufficient, A1Status, Count, Dichotomy, Meets,
    PolynomialContext, Relation,
};
use fermi_core::exactnum::{BigRational, Cyclotomic, LambdaPoly};
use fermi_core::laurent::{Exponent, LaurentPoly};
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn term(e: &[i64], c: BigRational) -> (Exponent, LambdaPoly) {
    (Exponent(e.to_vec()), LambdaPoly::from_rational(c))
}

/// a z₁ + b z₂ + c z₁²z₂ + e z₁z₂² + f z₁z₂ with a, b ≠ 0 and the higher
/// coefficients possibly zero.
fn random_factor(rng: &mut impl Rng) -> LaurentPoly {
    let mut terms = vec![
        term(&[1, 0], random_nonzero_rational(rng)),
        term(&[0, 1], random_nonzero_rational(rng)),
    ];
    for e in [[2, 1], [1, 2], [1, 1]] {
        if rng.gen_bool(0.6) {
            terms.push(term(&e, random_nonzero_rational(rng)));
        }
    }
    LaurentPoly::from_terms(2, terms)
}

/// (a z₁ + b z₂)(b' + e' z₁z₂).
fn random_product_factor(rng: &mut impl Rng) -> Vec<LaurentPoly> {
    let lin = LaurentPoly::from_terms(2, [term(&[1, 0], random_nonzero_rational(rng)), term(&[0, 1], random_nonzero_rational(rng))]);
    let other = LaurentPoly::from_terms(2, [term(&[0, 0], random_nonzero_rational(rng)), term(&[1, 1], random_nonzero_rational(rng))]);
    vec![lin, other]
}

fn random_product(rng: &mut impl Rng) -> Vec<LaurentPoly> {
    let mut factors = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        if rng.gen_bool(0.3) {
            factors.extend(random_product_factor(rng));
        } else {
            factors.push(random_factor(rng));
        }
    }
    factors
}

fn certified_bound(factors: &[LaurentPoly]) -> Count {
    let p = factors.iter().skip(1).fold(factors[0].clone(), |a, f| &a * f);
    let ctx = PolynomialContext { a1: Some(A1Status::Attested), factors: Some(factors.to_vec()), ..Default::default() };
    certify_polynomial(&p, &[1, 1], &ctx).unwrap().bound
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The certified bound never undercounts a product of pairwise distinct
    /// factors that all pass the meeting test.
    #[test]
    fn bound_is_never_below_the_constructed_factor_count(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let factors = random_product(&mut rng);
        for f in &factors {
            prop_assert_ne!(meets_origin_sufficient(f).unwrap(), Meets::Inconclusive);
        }
        if let Count::Known(b) = certified_bound(&factors) {
            prop_assert!(b as usize >= factors.len(), "bound {} below {} factors", b, factors.len());
        }
    }
}

#[test]
fn soundness_sample_reaches_known_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let known = (0..40).filter(|_| certified_bound(&random_product(&mut rng)) != Count::Unknown).count();
    assert!(known >= 5, "only {known} of 40 products got a bound");
}

#[test]
fn product_of_two_lines_with_a_binomial_is_the_dichotomy_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let f = random_product_factor(&mut rng);
        let p = &f[0] * &f[1];
        let ctx = PolynomialContext { a1: Some(A1Status::Attested), ..Default::default() };
        let r = certify_polynomial(&p, &[1, 1], &ctx).unwrap();
        assert_eq!(r.degree_relation.value.relation, Relation::Equality);
        assert!(matches!(r.dichotomy, Dichotomy::Holds { factorization_verified: true, .. }));
        assert_eq!(r.bound, Count::Known(2));
    }
}

/// sᵍXᵍ + tᵍYᵍ = ∏ₖ (sX − ζ₂ᵍ^{2k+1} tY).
fn binomial_via_roots(m: i64, n: i64, s: &BigRational, t: &BigRational) -> (LaurentPoly, Vec<LaurentPoly>) {
    let g = m.gcd(&n);
    let x = [m / g, 0];
    let y = [0, n / g];
    let f = LaurentPoly::from_terms(2, [term(&[m, 0], num_traits::pow(s.clone(), g as usize)), term(&[0, n], num_traits::pow(t.clone(), g as usize))]);
    let factors = (0..g)
        .map(|k| {
            let omega = Cyclotomic::zeta(2 * g as u64, 2 * k + 1).unwrap();
            LaurentPoly::from_terms(
                2,
                [
                    (Exponent(x.to_vec()), LambdaPoly::from_rational(s.clone())),
                    (Exponent(y.to_vec()), LambdaPoly::constant(-(omega * Cyclotomic::from_rational(t.clone())))),
                ],
            )
        })
        .collect();
    (f, factors)
}

#[test]
fn binomial_counts_match_roots_of_unity_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for m in 1..=6 {
        for n in 1..=6 {
            let (s, t) = (random_nonzero_rational(&mut rng), random_nonzero_rational(&mut rng));
            let (f, factors) = binomial_via_roots(m, n, &s, &t);
            let product = factors.iter().skip(1).fold(factors[0].clone(), |a, g| &a * g);
            assert_eq!(product, f, "m={m} n={n}");
            for g in &factors {
                assert_eq!(count_binomial_factors(g).unwrap().count, Count::Known(1));
            }
            assert_eq!(count_binomial_factors(&f).unwrap().count, Count::Known(m.gcd(&n) as u32));
        }
    }
    let f = LaurentPoly::from_terms(2, [term(&[4, 0], rat(3, 1)), term(&[0, 6], rat(-5, 2))]);
    assert_eq!(count_binomial_factors(&f).unwrap().count, Count::Known(2));
}
