mod common;

use common::rat;
use fermi_core::certify::{certify, CertifyOptions, VerdictCode};
use fermi_core::exactnum::Cyclotomic;
use fermi_core::models::{decorated_model, lieb_model, random_potential, zd_model, Potential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn specialized_bound_matches_generic_bound_away_from_exceptions() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let specs = vec![
        zd_model(2, &[1, 1], &Potential::new()).unwrap(),
        zd_model(2, &[2, 1], &random_potential(1, &[2, 1], &mut rng)).unwrap(),
        decorated_model(2, 3, &[1, 1], &random_potential(3, &[1, 1], &mut rng)).unwrap(),
        decorated_model(2, 2, &[1, 2], &random_potential(2, &[1, 2], &mut rng)).unwrap(),
        lieb_model(&[1, 2], &random_potential(3, &[1, 2], &mut rng)).unwrap(),
    ];
    for s in &specs {
        let generic = certify(s, &CertifyOptions::default()).unwrap();
        assert_ne!(generic.verdict.code, VerdictCode::Inconclusive, "{}", generic.render_text());
        let mut tried = 0;
        while tried < 10 {
            let l0 = rat(rng.gen_range(-40..=40), rng.gen_range(1..=7));
            if !generic.lambda_exceptions.avoids(&Cyclotomic::from_rational(l0.clone())) {
                continue;
            }
            tried += 1;
            let opts = CertifyOptions {
                lambda: Some(l0.clone()),
                ..Default::default()
            };
            let at = certify(s, &opts).unwrap();
            assert_eq!(at.bound, generic.bound, "λ₀ = {l0}: {}", at.render_text());
        }
    }
}

#[test]
fn exceptional_lambda_is_flagged_in_the_specialized_report() {
    let v = fermi_core::models::constant_potential(3, &[1, 2], rat(2, 1));
    let s = lieb_model(&[1, 2], &v).unwrap();
    let generic = certify(&s, &CertifyOptions::default()).unwrap();
    assert!(!generic.lambda_exceptions.avoids(&Cyclotomic::from_int(2)), "{}", generic.render_text());
    let opts = CertifyOptions {
        lambda: Some(rat(2, 1)),
        ..Default::default()
    };
    let at = certify(&s, &opts).unwrap();
    assert!(at.notes.iter().any(|n| n.contains("exceptional factor")), "{}", at.render_text());
    let opts = CertifyOptions {
        lambda: Some(rat(1, 3)),
        ..Default::default()
    };
    assert!(!certify(&s, &opts).unwrap().notes.iter().any(|n| n.contains("exceptional factor")));
}
