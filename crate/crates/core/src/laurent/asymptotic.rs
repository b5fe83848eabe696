use serde::Serialize;

use super::{Exponent, LaurentError, LaurentPoly};

/// f⁺ = x^{α₀}·f with α₀ the smallest nonnegative shift making f a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlusPart {
    pub alpha0: Exponent,
    pub poly: LaurentPoly,
}

impl LaurentPoly {
    fn require_nonzero(&self) -> Result<(), LaurentError> {
        if self.is_zero() {
            Err(LaurentError::ZeroPolynomial)
        } else {
            Ok(())
        }
    }

    fn map_exponents(&self, f: impl Fn(&Exponent) -> Exponent) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (f(e), c.clone())).collect(),
        }
    }

    /// Every exponent α becomes l⊙α.
    pub fn substitute_powers(&self, l: &[i64]) -> Result<LaurentPoly, LaurentError> {
        if l.len() != self.vars {
            return Err(LaurentError::DimensionMismatch {
                expected: self.vars,
                found: l.len(),
            });
        }
        if l.iter().any(|&x| x < 1) {
            return Err(LaurentError::NonPositiveVector);
        }
        Ok(self.map_exponents(|e| e.hadamard(l)))
    }

    /// Inverse of [`substitute_powers`](Self::substitute_powers).
    pub fn exponent_divide(&self, q: &[i64]) -> Result<LaurentPoly, LaurentError> {
        if q.len() != self.vars {
            return Err(LaurentError::DimensionMismatch {
                expected: self.vars,
                found: q.len(),
            });
        }
        if q.iter().any(|&x| x < 1) {
            return Err(LaurentError::NonPositiveVector);
        }
        for e in self.terms.keys() {
            for (j, (&a, &qj)) in e.0.iter().zip(q).enumerate() {
                if a % qj != 0 {
                    return Err(LaurentError::NotDivisible { var: j, exponent: a });
                }
            }
        }
        Ok(self.map_exponents(|e| Exponent(e.0.iter().zip(q).map(|(a, b)| a / b).collect())))
    }

    /// x ↦ (x₁,…,x_{m−1},x_m^{−1}).
    pub fn hat(&self) -> LaurentPoly {
        if self.vars == 0 {
            return self.clone();
        }
        self.map_exponents(|e| {
            let mut v = e.0.clone();
            let last = v.len() - 1;
            v[last] = -v[last];
            Exponent(v)
        })
    }

    pub fn plus_part(&self) -> Result<PlusPart, LaurentError> {
        let amin = self.min_exponents()?;
        let alpha0 = Exponent(amin.0.iter().map(|&a| (-a).max(0)).collect());
        Ok(PlusPart {
            poly: self.shift(&alpha0),
            alpha0,
        })
    }

    /// Shorthand for `plus_part()?.poly`.
    pub fn plus(&self) -> Result<LaurentPoly, LaurentError> {
        Ok(self.plus_part()?.poly)
    }

    /// Sum of the terms minimizing ⟨l,α⟩.
    pub fn lowest_component(&self, l: &[i64]) -> Result<LaurentPoly, LaurentError> {
        self.require_nonzero()?;
        if l.len() != self.vars {
            return Err(LaurentError::DimensionMismatch {
                expected: self.vars,
                found: l.len(),
            });
        }
        let min = self.terms.keys().map(|e| e.dot(l)).min().expect("nonzero");
        Ok(LaurentPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.dot(l) == min)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Lowest component for l = (1,…,1).
    pub fn lowest_degree_component(&self) -> Result<LaurentPoly, LaurentError> {
        self.lowest_component(&vec![1; self.vars])
    }

    /// The facial polynomial of the face of the Newton polytope selected by
    /// the inner normal l; identical to [`lowest_component`](Self::lowest_component).
    pub fn facial_polynomial(&self, l: &[i64]) -> Result<LaurentPoly, LaurentError> {
        self.lowest_component(l)
    }

    /// Writes f = x^γ·core with γ = α_min.
    pub fn strip_monomial(&self) -> Result<(Exponent, LaurentPoly), LaurentError> {
        let gamma = self.min_exponents()?;
        let neg = Exponent(gamma.0.iter().map(|a| -a).collect());
        Ok((gamma, self.shift(&neg)))
    }

    /// A polynomial (all exponents nonnegative) is proper when no variable
    /// divides it.
    pub fn is_proper(&self) -> Result<bool, LaurentError> {
        Ok(self.min_exponents()?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{arb_laurent, lp};
    use super::*;
    use crate::exactnum::LambdaPoly;
    use proptest::prelude::*;

    #[test]
    fn substitute_and_divide_examples() {
        let f = lp(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let g = f.substitute_powers(&[2, 3]).unwrap();
        assert_eq!(g, lp(2, &[(&[2, 0], 1), (&[0, 3], 1)]));
        assert_eq!(f.substitute_powers(&[1, 1]).unwrap(), f);
        assert_eq!(
            lp(1, &[(&[-1], 1)]).substitute_powers(&[3]).unwrap(),
            lp(1, &[(&[-3], 1)])
        );
        assert_eq!(f.substitute_powers(&[0, 1]), Err(LaurentError::NonPositiveVector));
        assert_eq!(g.exponent_divide(&[2, 3]).unwrap(), f);
        assert_eq!(
            lp(2, &[(&[1, 0], 1)]).exponent_divide(&[2, 1]),
            Err(LaurentError::NotDivisible { var: 0, exponent: 1 })
        );
    }

    #[test]
    fn hat_examples() {
        let f = lp(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(f.hat(), lp(2, &[(&[1, 0], 1), (&[0, -1], 1)]));
        let m = lp(2, &[(&[1, 2], 1)]);
        assert_eq!(m.hat().hat(), m);
        let e = Exponent(vec![0, 1]);
        let lam = LaurentPoly::monomial(e, LambdaPoly::lambda());
        assert_eq!(lam.hat(), LaurentPoly::monomial(Exponent(vec![0, -1]), LambdaPoly::lambda()));
    }

    #[test]
    fn plus_part_examples() {
        let p = lp(2, &[(&[-2, 1], 1), (&[1, 0], 1)]).plus_part().unwrap();
        assert_eq!(p.alpha0, Exponent(vec![2, 0]));
        assert_eq!(p.poly, lp(2, &[(&[0, 1], 1), (&[3, 0], 1)]));
        let f = lp(2, &[(&[1, 1], 1), (&[0, 2], 1)]);
        assert_eq!(f.plus_part().unwrap().alpha0, Exponent(vec![0, 0]));
        assert_eq!(f.plus().unwrap(), f);
        let p = lp(2, &[(&[-1, 0], 1), (&[0, -1], 1)]).plus_part().unwrap();
        assert_eq!(p.alpha0, Exponent(vec![1, 1]));
        assert_eq!(p.poly, lp(2, &[(&[0, 1], 1), (&[1, 0], 1)]));
        assert_eq!(LaurentPoly::zero(2).plus_part(), Err(LaurentError::ZeroPolynomial));
    }

    #[test]
    fn lowest_component_examples() {
        let f = lp(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[2, 1], 1), (&[1, 2], 1)]);
        assert_eq!(
            f.lowest_component(&[1, 1]).unwrap(),
            lp(2, &[(&[1, 0], 1), (&[0, 1], 1)])
        );
        let c = LaurentPoly::from_int(2, 5);
        assert_eq!(c.lowest_component(&[1, 1]).unwrap(), c);
        let lam_z1 = LaurentPoly::monomial(Exponent(vec![1, 0]), LambdaPoly::lambda());
        let f = &lam_z1 + &lp(2, &[(&[1, 1], 1)]);
        assert_eq!(f.lowest_component(&[2, 1]).unwrap(), lam_z1);
        assert_eq!(f.facial_polynomial(&[2, 1]).unwrap(), lam_z1);
        assert_eq!(
            LaurentPoly::zero(2).lowest_component(&[1, 1]),
            Err(LaurentError::ZeroPolynomial)
        );
    }

    #[test]
    fn strip_monomial_examples() {
        let (g, core) = lp(2, &[(&[2, 1], 1), (&[3, 0], 1)]).strip_monomial().unwrap();
        assert_eq!(g, Exponent(vec![2, 0]));
        assert_eq!(core, lp(2, &[(&[0, 1], 1), (&[1, 0], 1)]));
        let (g, _) = lp(2, &[(&[0, 1], 1), (&[1, 0], 1)]).strip_monomial().unwrap();
        assert!(g.is_zero());
        let m = LaurentPoly::monomial(Exponent(vec![1, 1]), LambdaPoly::from_ints(&[0, 0, 1]));
        let (g, core) = m.strip_monomial().unwrap();
        assert_eq!(g, Exponent(vec![1, 1]));
        assert_eq!(core, LaurentPoly::constant(2, LambdaPoly::from_ints(&[0, 0, 1])));
    }

    fn arb_l(m: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(1i64..=3, m)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn lowest_components_are_multiplicative_m2(f in arb_laurent(2, 6), g in arb_laurent(2, 6), l in arb_l(2)) {
            let lhs = (&f * &g).lowest_component(&l).unwrap();
            let rhs = &f.lowest_component(&l).unwrap() * &g.lowest_component(&l).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn lowest_components_are_multiplicative_m3(f in arb_laurent(3, 6), g in arb_laurent(3, 6), l in arb_l(3)) {
            let lhs = (&f * &g).lowest_component(&l).unwrap();
            let rhs = &f.lowest_component(&l).unwrap() * &g.lowest_component(&l).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn plus_part_is_minimal(f in arb_laurent(3, 6)) {
            let p = f.plus_part().unwrap();
            let amin = p.poly.min_exponents().unwrap();
            for j in 0..3 {
                prop_assert!(amin.0[j] >= 0);
                prop_assert!(p.alpha0.0[j] >= 0);
                if p.alpha0.0[j] > 0 {
                    prop_assert_eq!(amin.0[j], 0);
                }
            }
            prop_assert_eq!(p.poly.shift(&Exponent(p.alpha0.0.iter().map(|a| -a).collect())), f);
        }

        #[test]
        fn hat_is_an_involution(f in arb_laurent(3, 6)) {
            prop_assert_eq!(f.hat().hat(), f);
        }

        #[test]
        fn substitutions_compose(f in arb_laurent(2, 6), l in arb_l(2), l2 in arb_l(2)) {
            let lhs = f.substitute_powers(&l).unwrap().substitute_powers(&l2).unwrap();
            let ll: Vec<i64> = l.iter().zip(&l2).map(|(a, b)| a * b).collect();
            prop_assert_eq!(lhs, f.substitute_powers(&ll).unwrap());
        }

        #[test]
        fn exponent_divide_inverts_substitution(f in arb_laurent(3, 6), q in arb_l(3)) {
            prop_assert_eq!(f.substitute_powers(&q).unwrap().exponent_divide(&q).unwrap(), f);
        }

        #[test]
        fn stripped_core_is_proper(f in arb_laurent(2, 6)) {
            let (gamma, core) = f.strip_monomial().unwrap();
            prop_assert!(core.strip_monomial().unwrap().0.is_zero());
            prop_assert_eq!(core.shift(&gamma), f.clone());
            // A Laurent polynomial is a unit exactly when it has one term.
            prop_assert_eq!(core.is_z_constant(), f.is_monomial());
        }
    }
}
