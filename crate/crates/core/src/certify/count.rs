use num_integer::Integer;
use serde::{Serialize, Serializer};

use super::checks::{decorated_template, proportional_to};
use super::{CertifyError, LambdaExceptions};
use crate::laurent::{Exponent, LaurentPoly};
use crate::models::CatalogModel;

/// A number or an explicit Unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Known(u32),
    Unknown,
}

impl Count {
    pub fn known(self) -> Option<u32> {
        match self {
            Count::Known(n) => Some(n),
            Count::Unknown => None,
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Known(n) => s.serialize_u32(*n),
            Count::Unknown => s.serialize_str("Unknown"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    Binomial,
    LinearForm,
    CatalogDecorated,
    ExplicitProduct,
    CitedLemma,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCount {
    pub count: Count,
    pub method: CountMethod,
    pub lambda_exceptions: LambdaExceptions,
    pub exceptions_description: String,
}

impl FactorCount {
    fn known(n: u32, method: CountMethod, ex: LambdaExceptions) -> Self {
        FactorCount {
            count: Count::Known(n),
            method,
            exceptions_description: ex.describe(),
            lambda_exceptions: ex,
        }
    }

    pub fn unknown() -> Self {
        FactorCount {
            count: Count::Unknown,
            method: CountMethod::Unknown,
            lambda_exceptions: LambdaExceptions::new(),
            exceptions_description: "not applicable".to_string(),
        }
    }
}

/// Number of irreducible factors of a·x^α + b·x^β: the gcd of the entries
/// of β − α, valid wherever a·b ≠ 0.
pub fn count_binomial_factors(f: &LaurentPoly) -> Result<FactorCount, CertifyError> {
    let (_, core) = f.strip_monomial().map_err(|_| CertifyError::NotBinomial)?;
    if core.len() != 2 {
        return Err(CertifyError::NotBinomial);
    }
    let mut it = core.terms();
    let (ea, a) = it.next().expect("two terms");
    let (eb, b) = it.next().expect("two terms");
    let g = eb.sub(ea).0.iter().fold(0i64, |acc, x| acc.gcd(x));
    Ok(FactorCount::known(g as u32, CountMethod::Binomial, LambdaExceptions::of(&[a.clone(), b.clone()])))
}

/// Σ c_j x_j with at least two terms.
fn is_linear_form(f: &LaurentPoly) -> bool {
    f.len() >= 2 && f.exponents().all(|e| e.total_degree() == 1 && e.0.iter().all(|&x| x >= 0))
}

fn invert_all(f: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::from_terms(f.num_vars(), f.terms().map(|(e, c)| (Exponent(e.0.iter().map(|x| -x).collect()), c.clone())))
}

/// Catalog for the forms that occur as h₀, h∞: binomials, linear forms
/// Σ c_j x_j and Σ c_j ∏_{i≠j} x_i, and s(λ)·(decorated template). Anything
/// else is Unknown.
pub fn count_catalog_factors(f: &LaurentPoly, hint: Option<(CatalogModel, &[i64])>) -> FactorCount {
    let Ok((_, core)) = f.strip_monomial() else {
        return FactorCount::unknown();
    };
    if core.len() == 2 {
        if let Ok(c) = count_binomial_factors(&core) {
            return c;
        }
    }
    let inverted = invert_all(&core).strip_monomial().map(|(_, p)| p);
    for form in [Some(core.clone()), inverted.ok()].into_iter().flatten() {
        if is_linear_form(&form) {
            let coeffs: Vec<_> = form.terms().map(|(_, c)| c.clone()).collect();
            return FactorCount::known(1, CountMethod::LinearForm, LambdaExceptions::of(&coeffs));
        }
    }
    if let Some((CatalogModel::Decorated { .. } | CatalogModel::Zd, q)) = hint {
        if q.iter().fold(0i64, |a, b| a.gcd(b)) == 1 && q.len() == core.num_vars() {
            if let Ok(t) = decorated_template(q).exponent_divide(q) {
                if let Some(s) = proportional_to(&core, &t) {
                    return FactorCount::known(1, CountMethod::CitedLemma, LambdaExceptions::of(&[s]));
                }
            }
        }
    }
    FactorCount::unknown()
}

/// Sum of the catalog counts of explicitly given factors, after checking
/// that their product is f up to a monomial and a λ-constant. Monomial
/// factors count zero.
pub fn count_explicit_product(f: &LaurentPoly, factors: &[LaurentPoly], hint: Option<(CatalogModel, &[i64])>) -> FactorCount {
    if factors.is_empty() || f.is_zero() {
        return FactorCount::unknown();
    }
    let prod = factors.iter().skip(1).fold(factors[0].clone(), |acc, g| &acc * g);
    let (Ok((_, a)), Ok((_, b))) = (f.strip_monomial(), prod.strip_monomial()) else {
        return FactorCount::unknown();
    };
    let (Some((_, la)), Some((_, lb))) = (a.leading_term(), b.leading_term()) else {
        return FactorCount::unknown();
    };
    if a.scale(lb) != b.scale(la) {
        return FactorCount::unknown();
    }
    let mut total = 0;
    let mut ex = LambdaExceptions::new();
    for g in factors {
        if g.is_monomial() {
            continue;
        }
        let c = count_catalog_factors(g, hint);
        match c.count {
            Count::Known(n) => total += n,
            Count::Unknown => return FactorCount::unknown(),
        }
        ex.extend(&c.lambda_exceptions);
    }
    FactorCount::known(total, CountMethod::ExplicitProduct, ex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::LambdaPoly;

    fn lp(vars: usize, terms: &[(&[i64], &[i64])]) -> LaurentPoly {
        LaurentPoly::from_terms(
            vars,
            terms.iter().map(|(e, c)| (Exponent(e.to_vec()), LambdaPoly::from_ints(c))),
        )
    }

    #[test]
    fn binomial_examples() {
        let coprime = lp(2, &[(&[3, 0], &[1, 2]), (&[0, 2], &[5, 0, 1])]);
        let c = count_binomial_factors(&coprime).unwrap();
        assert_eq!(c.count, Count::Known(1));
        assert_eq!(c.lambda_exceptions.polys().len(), 2);
        let sq = lp(2, &[(&[2, 0], &[1]), (&[0, 2], &[-1])]);
        assert_eq!(count_binomial_factors(&sq).unwrap().count, Count::Known(2));
        let mono = lp(2, &[(&[3, 0], &[0, 1])]);
        assert_eq!(count_binomial_factors(&mono), Err(CertifyError::NotBinomial));
    }

    #[test]
    fn linear_forms() {
        let f = lp(2, &[(&[1, 0], &[-1, 0, 1]), (&[0, 1], &[-1, 0, 1])]);
        let c = count_catalog_factors(&f, None);
        assert_eq!(c.count, Count::Known(1));
        assert_eq!(c.lambda_exceptions.polys(), &[LambdaPoly::from_ints(&[-1, 0, 1])]);
        let g = lp(3, &[(&[0, 1, 1], &[1]), (&[1, 0, 1], &[2]), (&[1, 1, 0], &[3])]);
        let c = count_catalog_factors(&g, None);
        assert_eq!((c.count, c.method), (Count::Known(1), CountMethod::LinearForm));
    }

    #[test]
    fn decorated_template_is_cited() {
        let q = [1, 1, 2];
        let t = decorated_template(&q).exponent_divide(&q).unwrap();
        let f = t.scale(&LambdaPoly::from_ints(&[2, 0, 1]));
        let c = count_catalog_factors(&f, Some((CatalogModel::Decorated { nu: 2 }, &q)));
        assert_eq!((c.count, c.method), (Count::Known(1), CountMethod::CitedLemma));
        assert_eq!(count_catalog_factors(&f, None).count, Count::Unknown);
    }

    #[test]
    fn dense_cubic_is_unknown() {
        let f = lp(2, &[(&[3, 0], &[1]), (&[2, 1], &[2]), (&[1, 2], &[3]), (&[0, 3], &[4]), (&[1, 1], &[5]), (&[0, 0], &[1])]);
        assert_eq!(count_catalog_factors(&f, None), FactorCount::unknown());
    }

    #[test]
    fn explicit_products() {
        let a = lp(2, &[(&[1, 0], &[1]), (&[0, 1], &[1])]);
        let b = lp(2, &[(&[0, 0], &[1]), (&[1, 1], &[1])]);
        let c = count_explicit_product(&(&a * &b).scale(&LambdaPoly::from_ints(&[3])), &[a.clone(), b.clone()], None);
        assert_eq!((c.count, c.method), (Count::Known(2), CountMethod::ExplicitProduct));
        assert_eq!(count_explicit_product(&a, &[b], None).count, Count::Unknown);
        let unit = lp(2, &[(&[0, 0], &[2])]);
        assert_eq!(count_explicit_product(&a.scale(&LambdaPoly::from_ints(&[2])), &[a.clone(), unit], None).count, Count::Known(1));
    }
}
