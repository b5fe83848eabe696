use num_integer::Integer;
use serde::Serialize;

use super::{count_catalog_factors, Count, CertifyError, LambdaExceptions};
use crate::exactnum::LambdaPoly;
use crate::floquet::{mu, OperatorSpec};
use crate::laurent::{Exponent, LaurentPoly};
use crate::models::{detect_catalog, CatalogModel};

/// h̃₀, h̃∞ and their quotients h₀, h∞ with h̃ = h(z^{⊙q}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticData {
    pub h0_tilde: LaurentPoly,
    pub hinf_tilde: LaurentPoly,
    pub h0: LaurentPoly,
    pub hinf: LaurentPoly,
}

pub fn asymptotics(ptilde: &LaurentPoly, q: &[i64]) -> Result<AsymptoticData, CertifyError> {
    let h0_tilde = ptilde.plus()?.lowest_degree_component()?;
    let hinf_tilde = ptilde.hat().plus()?.lowest_degree_component()?;
    Ok(AsymptoticData {
        h0: h0_tilde.exponent_divide(q)?,
        hinf: hinf_tilde.exponent_divide(q)?,
        h0_tilde,
        hinf_tilde,
    })
}

/// (f(x̂))⁺.
pub(crate) fn hat_plus(f: &LaurentPoly) -> Result<LaurentPoly, CertifyError> {
    Ok(f.hat().plus()?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum A2Status {
    Holds,
    HoldsGenerically { exceptions: LambdaExceptions },
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A2Check {
    #[serde(flatten)]
    pub status: A2Status,
    /// (P(x̂))⁺ = (P⁺(x̂))⁺, which must hold whenever the status is not Fails.
    pub hat_plus_identity: bool,
}

/// For each variable, the gcd of the λ-coefficients of the terms free of
/// that variable; a nonconstant gcd marks the energies where the variable
/// divides the specialized polynomial.
fn proper_strata(f: &LaurentPoly) -> Option<LambdaExceptions> {
    let (gamma, _) = f.strip_monomial().ok()?;
    if !gamma.is_zero() {
        return None;
    }
    let mut ex = LambdaExceptions::new();
    for j in 0..f.num_vars() {
        let g = f
            .terms()
            .filter(|(e, _)| e.0[j] == 0)
            .fold(LambdaPoly::zero(), |acc, (_, c)| acc.gcd(c));
        ex.add(&g);
    }
    Some(ex)
}

pub fn check_proper(ptilde: &LaurentPoly) -> Result<A2Check, CertifyError> {
    if ptilde.is_zero() {
        return Err(crate::laurent::LaurentError::ZeroPolynomial.into());
    }
    let plus = ptilde.plus()?;
    let hat = hat_plus(ptilde)?;
    let status = match (proper_strata(&plus), proper_strata(&hat)) {
        (Some(mut a), Some(b)) => {
            a.extend(&b);
            if a.is_empty() {
                A2Status::Holds
            } else {
                A2Status::HoldsGenerically { exceptions: a }
            }
        }
        _ => A2Status::Fails,
    };
    let hat_plus_identity = hat == hat_plus(&plus)?;
    Ok(A2Check {
        status,
        hat_plus_identity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Strict,
    Equality,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRelation {
    pub relation: Relation,
    /// deg h̃₀
    pub deg_h0: i64,
    /// deg (h̃∞(x̂))⁺
    pub deg_hinf_hat_plus: i64,
    /// deg P̃⁺
    pub deg_p_plus: i64,
    /// deg (h̃₀(x̂))⁺
    pub deg_h0_hat_plus: i64,
    /// deg h̃∞
    pub deg_hinf: i64,
    /// deg (P̃(x̂))⁺
    pub deg_p_hat_plus: i64,
}

impl DegreeRelation {
    pub fn first_sum(&self) -> i64 {
        self.deg_h0 + self.deg_hinf_hat_plus
    }

    pub fn second_sum(&self) -> i64 {
        self.deg_h0_hat_plus + self.deg_hinf
    }
}

pub fn degree_relation(asym: &AsymptoticData, ptilde: &LaurentPoly) -> Result<DegreeRelation, CertifyError> {
    let mut r = DegreeRelation {
        relation: Relation::Neither,
        deg_h0: asym.h0_tilde.degree()?,
        deg_hinf_hat_plus: hat_plus(&asym.hinf_tilde)?.degree()?,
        deg_p_plus: ptilde.plus()?.degree()?,
        deg_h0_hat_plus: hat_plus(&asym.h0_tilde)?.degree()?,
        deg_hinf: asym.hinf_tilde.degree()?,
        deg_p_hat_plus: hat_plus(ptilde)?.degree()?,
    };
    let (s1, s2) = (r.first_sum(), r.second_sum());
    r.relation = if s1 > r.deg_p_plus || s2 > r.deg_p_hat_plus {
        Relation::Strict
    } else if s1 == r.deg_p_plus && s2 == r.deg_p_hat_plus {
        Relation::Equality
    } else {
        Relation::Neither
    };
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum Dichotomy {
    /// P̃⁺ is not a λ-multiple of h̃₀·(h̃∞(x̂))⁺.
    Excluded,
    /// P̃⁺ = C·h̃₀·(h̃∞(x̂))⁺ with C = numerator/denominator in λ.
    Holds {
        #[serde(rename = "C")]
        c: String,
        numerator: LambdaPoly,
        denominator: LambdaPoly,
        factorization_verified: bool,
    },
    NotApplicable,
}

/// G = h̃₀·(h̃∞(x̂))⁺.
pub fn dichotomy_product(asym: &AsymptoticData) -> Result<LaurentPoly, CertifyError> {
    Ok(&asym.h0_tilde * &hat_plus(&asym.hinf_tilde)?)
}

/// Decides whether P̃⁺ = C(λ)·G over the field of rational functions in λ.
pub fn dichotomy_check(ptilde: &LaurentPoly, asym: &AsymptoticData) -> Result<Dichotomy, CertifyError> {
    let pp = ptilde.plus()?;
    let g = dichotomy_product(asym)?;
    let (Some((_, lp)), Some((_, lg))) = (pp.leading_term(), g.leading_term()) else {
        return Ok(Dichotomy::Excluded);
    };
    if pp.scale(lg) != g.scale(lp) {
        return Ok(Dichotomy::Excluded);
    }
    let common = lp.gcd(lg);
    let mut num = lp.exact_div(&common)?;
    let mut den = lg.exact_div(&common)?;
    let lead = den.leading().expect("nonzero").inv()?;
    num = num.scale(&lead);
    den = den.scale(&lead);
    let factorization_verified = pp.scale(&den) == g.scale(&num);
    let c = if den.is_one() {
        num.to_string()
    } else {
        format!("({num})/({den})")
    };
    Ok(Dichotomy::Holds {
        c,
        numerator: num,
        denominator: den,
        factorization_verified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Meets {
    MeetsOrigin,
    MeetsInfinity,
    Inconclusive,
}

fn meets_zero(f: &LaurentPoly) -> Result<bool, CertifyError> {
    let p = f.plus()?;
    let m = p.num_vars();
    let mut normals = vec![vec![1; m]];
    if m == 2 {
        normals.extend(p.newton_polytope()?.inner_normals().into_iter().filter(|l| l.iter().all(|&x| x > 0)));
    }
    for l in normals {
        if !p.lowest_component(&l)?.is_monomial() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A sufficient test: never claims that f avoids 0 or (0,…,0,∞).
pub fn meets_origin_sufficient(f: &LaurentPoly) -> Result<Meets, CertifyError> {
    if f.is_zero() {
        return Err(crate::laurent::LaurentError::ZeroPolynomial.into());
    }
    Ok(if meets_zero(f)? {
        Meets::MeetsOrigin
    } else if meets_zero(&f.hat())? {
        Meets::MeetsInfinity
    } else {
        Meets::Inconclusive
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum A1Status {
    VerifiedCatalog {
        model: CatalogModel,
        exceptions: LambdaExceptions,
    },
    /// Every factor of a supplied factorization is irreducible by the
    /// catalog count and meets the origin or (0,…,0,∞).
    VerifiedFactors {
        exceptions: LambdaExceptions,
    },
    Attested,
    Unknown {
        reason: String,
    },
}

impl A1Status {
    pub fn is_ok(&self) -> bool {
        !matches!(self, A1Status::Unknown { .. })
    }
}

fn unknown(reason: impl Into<String>) -> A1Status {
    A1Status::Unknown { reason: reason.into() }
}

/// A1 from factors g(x^{⊙q}) of P̃ whose product is P̃; monomial factors
/// carry no component and are skipped.
pub fn verify_a1_factors(factors: &[LaurentPoly], q: &[i64], hint: Option<CatalogModel>) -> A1Status {
    let mut exceptions = LambdaExceptions::new();
    for (i, f) in factors.iter().enumerate() {
        if f.is_monomial() {
            continue;
        }
        let Ok(g) = f.exponent_divide(q) else {
            return unknown(format!("factor {} is not a polynomial in z^q", i + 1));
        };
        let c = count_catalog_factors(&g, hint.map(|m| (m, q)));
        if c.count != Count::Known(1) {
            return unknown(format!("factor {} is not known to be irreducible", i + 1));
        }
        if !matches!(meets_origin_sufficient(&g), Ok(Meets::MeetsOrigin | Meets::MeetsInfinity)) {
            return unknown(format!("factor {} failed the meeting test", i + 1));
        }
        exceptions.extend(&c.lambda_exceptions);
    }
    A1Status::VerifiedFactors { exceptions }
}

/// (z₁⋯z_d)^Q·∏_{n∈W} r₀(μ_n⊙z) with r₀ = Σ z_j^{−1}.
pub fn decorated_template(q: &[i64]) -> LaurentPoly {
    let d = q.len();
    let r0 = LaurentPoly::from_terms(d, (0..d).map(|j| (Exponent(Exponent::unit(d, j).0.iter().map(|x| -x).collect()), LambdaPoly::one())));
    let big_q: i64 = q.iter().product();
    let mut out = LaurentPoly::monomial(Exponent(vec![big_q; d]), LambdaPoly::one());
    for n in crate::floquet::cells(q) {
        out = &out * &r0.twist(&mu(&n, q));
    }
    out
}

/// The λ-polynomial s with f = s·template, if one exists.
pub(crate) fn proportional_to(f: &LaurentPoly, template: &LaurentPoly) -> Option<LambdaPoly> {
    let (e, t) = template.leading_term()?;
    let inv = t.leading()?.inv().ok()?;
    let s = f.coeff(e).scale(&inv);
    if s.is_zero() || template.scale(&s) != *f {
        return None;
    }
    Some(s)
}

/// The coefficient κ(λ) when the terms of f of lowest degree in variable j
/// form a single z-monomial.
pub(crate) fn boundary_coefficient(f: &LaurentPoly, j: usize) -> Option<LambdaPoly> {
    let l = Exponent::unit(f.num_vars(), j).0;
    let low = f.lowest_component(&l).ok()?;
    if low.is_monomial() {
        low.terms().next().map(|(_, c)| c.clone())
    } else {
        None
    }
}

fn gcd_all(q: &[i64]) -> i64 {
    q.iter().fold(0i64, |a, b| a.gcd(b))
}

/// (A1) for the catalog models, checking the extremal coefficients that the
/// analytic argument needs to be nonzero.
pub fn verify_a1_catalog(spec: &OperatorSpec, ptilde: &LaurentPoly) -> A1Status {
    let Some(model) = detect_catalog(spec) else {
        return unknown("not a catalog model");
    };
    let q = &spec.period;
    if gcd_all(q) != 1 {
        return unknown(format!("the catalog argument needs gcd(q) = 1, got q = {q:?}"));
    }
    let Ok(asym) = asymptotics(ptilde, q) else {
        return unknown("asymptotic components unavailable");
    };
    let mut exceptions = LambdaExceptions::new();
    match model {
        CatalogModel::Lieb => {
            let big_q: i64 = q.iter().product();
            let shape = |h: &LaurentPoly| -> Option<Vec<LambdaPoly>> {
                let e1 = Exponent(vec![big_q, 0]);
                let e2 = Exponent(vec![0, big_q]);
                (h.len() == 2 && !h.coeff(&e1).is_zero() && !h.coeff(&e2).is_zero()).then(|| vec![h.coeff(&e1), h.coeff(&e2)])
            };
            let (Some(c0), Some(c1)) = (shape(&asym.h0_tilde), shape(&asym.hinf_tilde)) else {
                return unknown("lowest components are not of the form c₁z₁^Q + c₂z₂^Q");
            };
            let Some(kappa) = boundary_coefficient(ptilde, 0) else {
                return unknown("the lowest z₁-power of P̃ has a non-monomial coefficient");
            };
            for c in c0.iter().chain(&c1).chain([&kappa]) {
                exceptions.add(c);
            }
        }
        CatalogModel::Decorated { .. } | CatalogModel::Zd => {
            let t = decorated_template(q);
            let s0 = proportional_to(&asym.h0_tilde, &t);
            let s1 = proportional_to(&asym.hinf_tilde, &t);
            let (Some(s0), Some(s1)) = (s0, s1) else {
                return unknown("lowest components are not s(λ)·(z₁⋯z_d)^Q·∏ r₀(μ_n⊙z)");
            };
            exceptions.add(&s0);
            exceptions.add(&s1);
        }
    }
    A1Status::VerifiedCatalog { model, exceptions }
}
