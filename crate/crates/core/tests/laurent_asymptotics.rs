mod common;

use common::random_laurent;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lowest_component_is_multiplicative(seed in any::<u64>(), m in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nf, ng) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let f = random_laurent(&mut rng, m, nf);
        let g = random_laurent(&mut rng, m, ng);
        let l: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        let lhs = (&f * &g).lowest_component(&l).unwrap();
        let rhs = &f.lowest_component(&l).unwrap() * &g.lowest_component(&l).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn plus_part_is_the_smallest_nonnegative_shift(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let f = random_laurent(&mut rng, 2, n);
        let p = f.plus().unwrap();
        let fmin = f.min_exponents().unwrap().0;
        let pmin = p.min_exponents().unwrap().0;
        for (a, b) in fmin.iter().zip(&pmin) {
            prop_assert_eq!(*b, (*a).max(0));
        }
        let shift: Vec<i64> = fmin.iter().zip(&pmin).map(|(a, b)| a - b).collect();
        prop_assert_eq!(p.shift(&fermi_core::laurent::Exponent(shift)), f);
    }

    #[test]
    fn hat_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_laurent(&mut rng, 3, 4);
        prop_assert_eq!(f.hat().hat(), f);
    }
}
