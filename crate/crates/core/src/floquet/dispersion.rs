use super::det::{char_poly, DetStrategy, Matrix};
use super::{floquet_matrix, mu, FloquetError, OperatorSpec};
use crate::exactnum::{Cyclotomic, LambdaPoly};
use crate::laurent::{Exponent, LaurentPoly};

/// Largest fiber dimension νQ accepted by the exact determinant.
pub const MAX_FIBER_SIZE: usize = 64;

fn check_size(spec: &OperatorSpec) -> Result<(), FloquetError> {
    spec.validate()?;
    let size = spec.fiber_size();
    if size > MAX_FIBER_SIZE {
        return Err(FloquetError::SizeLimitExceeded {
            size,
            limit: MAX_FIBER_SIZE,
        });
    }
    Ok(())
}

/// P̃(z,λ) = det(D_z + B_V − λI).
pub fn dispersion(spec: &OperatorSpec) -> Result<LaurentPoly, FloquetError> {
    dispersion_with(spec, DetStrategy::Auto)
}

/// Above this fiber size `Auto` eliminates on H̃ in x = z^{⊙q} and substitutes
/// back, which avoids the dense cyclotomic B_V blocks.
pub const DIRECT_ROUTE_THRESHOLD: usize = 12;

/// `Auto` picks the route; an explicit strategy always eliminates D_z + B_V.
pub fn dispersion_with(spec: &OperatorSpec, strategy: DetStrategy) -> Result<LaurentPoly, FloquetError> {
    check_size(spec)?;
    if strategy == DetStrategy::Auto && spec.fiber_size() > DIRECT_ROUTE_THRESHOLD {
        let p = char_poly(&direct_fiber_symbolic(spec), DetStrategy::Bareiss);
        return Ok(p.substitute_powers(&spec.period)?);
    }
    Ok(char_poly(&floquet_matrix(spec).matrix(), strategy))
}

/// H̃ as a matrix over Laurent polynomials in x = z^{⊙q}, indexed
/// orbit-major: row (i, w) ↦ i·Q + index(w).
pub(crate) fn direct_fiber_symbolic(spec: &OperatorSpec) -> Matrix {
    let d = spec.dimension;
    let q = &spec.period;
    let cells = spec.cells();
    let big_q = cells.len();
    let index = |w: &[i64]| -> usize { w.iter().zip(q).fold(0usize, |acc, (&x, &qk)| acc * qk as usize + x as usize) };
    let n = spec.fiber_size();
    let mut m = vec![vec![LaurentPoly::zero(d); n]; n];
    for ((i, j, off), v) in spec.effective_hopping() {
        for (b, src) in cells.iter().enumerate() {
            let mut w = vec![0i64; d];
            let mut l = vec![0i64; d];
            for t in 0..d {
                let s = src[t] + off[t];
                w[t] = s.rem_euclid(q[t]);
                l[t] = -s.div_euclid(q[t]);
            }
            let row = i * big_q + index(&w);
            let col = j * big_q + b;
            m[row][col].add_term(Exponent(l), LambdaPoly::from_rational(v.clone()));
        }
    }
    for ((o, w), v) in &spec.potential {
        let r = o * big_q + index(w);
        m[r][r].add_term(Exponent::zero(d), LambdaPoly::from_rational(v.clone()));
    }
    m
}

/// det(H̃ − λI) as a Laurent polynomial in x = z^{⊙q}; an independent route
/// to the quotient polynomial P.
pub fn direct_dispersion(spec: &OperatorSpec, strategy: DetStrategy) -> Result<LaurentPoly, FloquetError> {
    check_size(spec)?;
    Ok(char_poly(&direct_fiber_symbolic(spec), strategy))
}

/// Recovers P with P(z^{⊙q}) = P̃(z) after checking twist invariance under
/// each generator w = e_j of W.
pub fn reduce_quotient(ptilde: &LaurentPoly, q: &[i64]) -> Result<LaurentPoly, FloquetError> {
    let d = ptilde.num_vars();
    if q.len() != d {
        return Err(crate::laurent::LaurentError::DimensionMismatch {
            expected: d,
            found: q.len(),
        }
        .into());
    }
    if q.iter().any(|&x| x < 1) {
        return Err(crate::laurent::LaurentError::NonPositiveVector.into());
    }
    for j in 0..d {
        if q[j] == 1 {
            continue;
        }
        let w = Exponent::unit(d, j).0;
        let m: Vec<Cyclotomic> = mu(&w, q);
        if ptilde.twist(&m) != *ptilde {
            return Err(FloquetError::TwistInvarianceViolated { w });
        }
    }
    Ok(ptilde.exponent_divide(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn chain(q: i64) -> OperatorSpec {
        let mut s = OperatorSpec::new(1, 1, vec![q]);
        s.add_hop(0, 0, vec![1], rat(1));
        s
    }

    fn lp(vars: usize, terms: &[(&[i64], &[i64])]) -> LaurentPoly {
        LaurentPoly::from_terms(
            vars,
            terms.iter().map(|(e, c)| (Exponent(e.to_vec()), LambdaPoly::from_ints(c))),
        )
    }

    #[test]
    fn free_chain() {
        let p = dispersion(&chain(1)).unwrap();
        assert_eq!(p, lp(1, &[(&[1], &[1]), (&[-1], &[1]), (&[0], &[0, -1])]));
        assert_eq!(reduce_quotient(&p, &[1]).unwrap(), p);
    }

    #[test]
    fn doubled_chain_quotient() {
        let pt = dispersion(&chain(2)).unwrap();
        assert_eq!(pt, lp(1, &[(&[2], &[-1]), (&[0], &[-2, 0, 1]), (&[-2], &[-1])]));
        let p = reduce_quotient(&pt, &[2]).unwrap();
        assert_eq!(p, lp(1, &[(&[1], &[-1]), (&[0], &[-2, 0, 1]), (&[-1], &[-1])]));
        assert_eq!(direct_dispersion(&chain(2), DetStrategy::Bareiss).unwrap(), p);
    }

    #[test]
    fn non_invariant_input_is_rejected() {
        let f = lp(2, &[(&[1, 0], &[1]), (&[0, 2], &[1])]);
        assert_eq!(
            reduce_quotient(&f, &[2, 2]),
            Err(FloquetError::TwistInvarianceViolated { w: vec![1, 0] })
        );
    }

    #[test]
    fn size_guard() {
        let s = OperatorSpec::new(2, 3, vec![5, 5]);
        assert_eq!(
            dispersion(&s),
            Err(FloquetError::SizeLimitExceeded { size: 75, limit: 64 })
        );
    }
}
