//! Component bounds for Fermi varieties from the asymptotics of the
//! dispersion polynomial.

mod checks;
mod count;
mod exceptions;

use serde::Serialize;

pub use checks::{
    asymptotics, check_proper, decorated_template, degree_relation, dichotomy_check, dichotomy_product,
    meets_origin_sufficient, verify_a1_catalog, verify_a1_factors, A1Status, A2Check, A2Status, AsymptoticData, DegreeRelation,
    Dichotomy, Meets, Relation,
};
pub use count::{count_binomial_factors, count_catalog_factors, count_explicit_product, Count, CountMethod, FactorCount};
pub use exceptions::LambdaExceptions;

use crate::exactnum::{format_rational, ArithError, BigRational, Cyclotomic};
use crate::floquet::{dispersion, reduce_quotient, FloquetError, OperatorSpec};
use crate::laurent::{LaurentError, LaurentPoly};
use crate::models::{detect_catalog, CatalogModel};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CertifyError {
    #[error("expected a binomial after removing monomial factors")]
    NotBinomial,
    #[error(transparent)]
    Floquet(#[from] FloquetError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Where the (A1) flag may come from when the catalog check does not apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum A1Mode {
    #[default]
    Auto,
    Attested,
}

#[derive(Clone, Debug, Default)]
pub struct CertifyOptions {
    pub a1_mode: A1Mode,
    /// Run every check at this single energy instead of generically.
    pub lambda: Option<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictCode {
    IrreducibleGenericLambda,
    IrreducibleAtLambda,
    ComponentBound,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub code: VerdictCode,
    pub text: String,
}

/// One audited assumption for the human-readable rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionLine {
    pub tag: String,
    pub satisfied: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tagged<T> {
    pub tag: &'static str,
    #[serde(flatten)]
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub period: Vec<i64>,
    pub model: Option<CatalogModel>,
    pub lambda: Option<String>,
    pub dispersion_terms: usize,
    pub lambda_degree: usize,
    /// gcd of the λ-coefficients of P̃; its zeros make P̃ vanish identically.
    pub dispersion_content: String,
    pub a1: Tagged<A1Status>,
    pub a2: Tagged<A2Check>,
    pub degree_relation: Tagged<DegreeRelation>,
    pub p1: Tagged<FactorCount>,
    pub p2: Tagged<FactorCount>,
    pub bound: Count,
    pub dichotomy: Dichotomy,
    /// "Thm1" or "Thm2" when a bound was derived.
    pub theorem: Option<&'static str>,
    pub verdict: Verdict,
    pub lambda_exceptions: LambdaExceptions,
    pub lambda_exceptions_description: String,
    pub assumptions: Vec<AssumptionLine>,
    pub notes: Vec<String>,
}

/// Inputs to [`certify_polynomial`] beyond P̃ itself.
#[derive(Clone, Debug, Default)]
pub struct PolynomialContext {
    pub a1: Option<A1Status>,
    pub model: Option<CatalogModel>,
    pub lambda: Option<BigRational>,
    /// A known factorization of P̃, used to count the factors of h₀ and h∞
    /// through the factors' own asymptotics.
    pub factors: Option<Vec<LaurentPoly>>,
}

const CONVENTIONS: [&str; 2] = [
    "fiber matrix D_z + B_V with B_V(w,w') = diag_j (1/Q)·Σ_n exp(−2πi⟨(w−w')⊙q*, n⟩)·V(j,n)",
    "x̂ inverts the last variable only",
];

fn relation_tag(r: Relation) -> &'static str {
    match r {
        Relation::Strict => "A3",
        Relation::Equality => "A'3",
        Relation::Neither => "A3/A'3",
    }
}

fn factor_counts(ptilde: &LaurentPoly, asym: &AsymptoticData, q: &[i64], ctx: &PolynomialContext) -> (FactorCount, FactorCount) {
    let hint = ctx.model.map(|m| (m, q));
    if let Some(factors) = &ctx.factors {
        let parts: Result<Vec<AsymptoticData>, _> = factors.iter().map(|f| asymptotics(f, q)).collect();
        let product = factors.iter().skip(1).fold(factors.first().cloned(), |acc, f| acc.map(|a| &a * f));
        if let (Ok(parts), Some(product)) = (parts, product) {
            if product == *ptilde {
                let h0s: Vec<_> = parts.iter().map(|a| a.h0.clone()).collect();
                let hinfs: Vec<_> = parts.iter().map(|a| a.hinf.clone()).collect();
                return (
                    count_explicit_product(&asym.h0, &h0s, hint),
                    count_explicit_product(&asym.hinf, &hinfs, hint),
                );
            }
        }
    }
    (count_catalog_factors(&asym.h0, hint), count_catalog_factors(&asym.hinf, hint))
}

fn vanishing_report(ptilde: &LaurentPoly, q: &[i64], ctx: &PolynomialContext) -> CertificateReport {
    let lambda = ctx.lambda.as_ref().map(format_rational);
    CertificateReport {
        period: q.to_vec(),
        model: ctx.model,
        lambda: lambda.clone(),
        dispersion_terms: ptilde.len(),
        lambda_degree: ptilde.lambda_degree().unwrap_or(0),
        dispersion_content: "0".to_string(),
        a1: Tagged {
            tag: "A1",
            value: A1Status::Unknown {
                reason: "dispersion vanishes identically".to_string(),
            },
        },
        a2: Tagged {
            tag: "A2",
            value: A2Check {
                status: A2Status::Fails,
                hat_plus_identity: false,
            },
        },
        degree_relation: Tagged {
            tag: "A3/A'3",
            value: DegreeRelation {
                relation: Relation::Neither,
                deg_h0: 0,
                deg_hinf_hat_plus: 0,
                deg_p_plus: 0,
                deg_h0_hat_plus: 0,
                deg_hinf: 0,
                deg_p_hat_plus: 0,
            },
        },
        p1: Tagged {
            tag: "A2.5",
            value: FactorCount::unknown(),
        },
        p2: Tagged {
            tag: "A2.5",
            value: FactorCount::unknown(),
        },
        bound: Count::Unknown,
        dichotomy: Dichotomy::NotApplicable,
        theorem: None,
        verdict: Verdict {
            code: VerdictCode::Inconclusive,
            text: format!(
                "the dispersion polynomial vanishes identically at λ = {}: every z lies on the Fermi variety",
                lambda.unwrap_or_default()
            ),
        },
        lambda_exceptions: LambdaExceptions::new(),
        lambda_exceptions_description: "none".to_string(),
        assumptions: Vec::new(),
        notes: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
    }
}

/// Runs every check on a given P̃ = P(z^{⊙q}). With `ctx.lambda` set, P̃ is
/// expected to be λ-free already.
pub fn certify_polynomial(ptilde: &LaurentPoly, q: &[i64], ctx: &PolynomialContext) -> Result<CertificateReport, CertifyError> {
    if ptilde.is_zero() {
        return Ok(vanishing_report(ptilde, q, ctx));
    }
    let asym = asymptotics(ptilde, q)?;
    let a2 = check_proper(ptilde)?;
    let rel = degree_relation(&asym, ptilde)?;
    let (p1, p2) = factor_counts(ptilde, &asym, q, ctx);
    let dichotomy = if rel.relation == Relation::Equality {
        dichotomy_check(ptilde, &asym)?
    } else {
        Dichotomy::NotApplicable
    };
    let a1 = match (&ctx.a1, &ctx.factors) {
        (Some(a1), _) => a1.clone(),
        (None, Some(factors)) if factors.iter().fold(LaurentPoly::one(ptilde.num_vars()), |a, f| &a * f) == *ptilde => {
            verify_a1_factors(factors, q, ctx.model)
        }
        _ => A1Status::Unknown {
            reason: "no verification or attestation supplied".to_string(),
        },
    };
    let a2_ok = !matches!(a2.status, A2Status::Fails);
    let counts = p1.count.known().zip(p2.count.known());

    let (bound, theorem) = match counts {
        Some((n1, n2)) if a1.is_ok() && a2_ok => match (&rel.relation, &dichotomy) {
            (Relation::Strict, _) => (Count::Known(n1 + n2 - 1), Some("Thm1")),
            (Relation::Equality, Dichotomy::Excluded) => (Count::Known(n1 + n2 - 1), Some("Thm2")),
            (Relation::Equality, Dichotomy::Holds { .. }) => (Count::Known(n1 + n2), Some("Thm2")),
            _ => (Count::Unknown, None),
        },
        _ => (Count::Unknown, None),
    };

    let mut exceptions = LambdaExceptions::new();
    let content = ptilde.content();
    exceptions.add(&content);
    if let A1Status::VerifiedCatalog { exceptions: e, .. } | A1Status::VerifiedFactors { exceptions: e } = &a1 {
        exceptions.extend(e);
    }
    if let A2Status::HoldsGenerically { exceptions: e } = &a2.status {
        exceptions.extend(e);
    }
    exceptions.extend(&p1.lambda_exceptions);
    exceptions.extend(&p2.lambda_exceptions);
    if let Dichotomy::Holds { numerator, denominator, .. } = &dichotomy {
        exceptions.add(numerator);
        exceptions.add(denominator);
    }

    let lambda = ctx.lambda.as_ref().map(format_rational);
    let irreducible = counts == Some((1, 1)) && bound == Count::Known(1);
    let verdict = match (bound, &lambda) {
        (Count::Known(1), None) if irreducible => Verdict {
            code: VerdictCode::IrreducibleGenericLambda,
            text: "Fermi variety irreducible for all but finitely many λ".to_string(),
        },
        (Count::Known(1), Some(l)) if irreducible => Verdict {
            code: VerdictCode::IrreducibleAtLambda,
            text: format!("Fermi variety irreducible at λ = {l}"),
        },
        (Count::Known(b), None) => Verdict {
            code: VerdictCode::ComponentBound,
            text: format!("Fermi variety has at most {b} irreducible components for all but finitely many λ"),
        },
        (Count::Known(b), Some(l)) => Verdict {
            code: VerdictCode::ComponentBound,
            text: format!("Fermi variety has at most {b} irreducible components at λ = {l}"),
        },
        (Count::Unknown, _) => {
            let mut why = Vec::new();
            if !a1.is_ok() {
                why.push("A1 not established");
            }
            if !a2_ok {
                why.push("A2 fails");
            }
            if counts.is_none() {
                why.push("factor count of h₀ or h∞ unknown");
            }
            if rel.relation == Relation::Neither {
                why.push("neither A3 nor A'3 holds");
            }
            Verdict {
                code: VerdictCode::Inconclusive,
                text: format!("inconclusive: {}", why.join("; ")),
            }
        }
    };

    let mut notes: Vec<String> = CONVENTIONS.iter().map(|s| s.to_string()).collect();
    if lambda.is_none() && matches!(dichotomy, Dichotomy::Excluded) {
        notes.push("the dichotomy is excluded over the rational functions in λ; it can reappear only on a finite set of λ".to_string());
    }
    if matches!(dichotomy, Dichotomy::Holds { .. }) {
        notes.push("P̃⁺ = C·h̃₀·(h̃∞(x̂))⁺ holds exactly; the bound p₁+p₂ is attained only through this factorization".to_string());
    }

    let describe_count = |c: &FactorCount| match c.count {
        Count::Known(n) => format!("{n} factor(s) via {:?}; exceptions: {}", c.method, c.exceptions_description),
        Count::Unknown => "unknown".to_string(),
    };
    let assumptions = vec![
        AssumptionLine {
            tag: "A1".to_string(),
            satisfied: a1.is_ok(),
            detail: match &a1 {
                A1Status::VerifiedCatalog { model, exceptions } => {
                    format!("verified for catalog model {model:?}; exceptions: {}", exceptions.describe())
                }
                A1Status::VerifiedFactors { exceptions } => {
                    format!("verified factor by factor; exceptions: {}", exceptions.describe())
                }
                A1Status::Attested => "attested by the caller".to_string(),
                A1Status::Unknown { reason } => format!("unknown: {reason}"),
            },
        },
        AssumptionLine {
            tag: "A2".to_string(),
            satisfied: a2_ok,
            detail: match &a2.status {
                A2Status::Holds => "P⁺ and (P(x̂))⁺ are proper".to_string(),
                A2Status::HoldsGenerically { exceptions } => format!("proper except at {}", exceptions.describe()),
                A2Status::Fails => "a variable divides P⁺ or (P(x̂))⁺".to_string(),
            },
        },
        AssumptionLine {
            tag: "A2.5".to_string(),
            satisfied: counts.is_some(),
            detail: format!("p₁: {}; p₂: {}", describe_count(&p1), describe_count(&p2)),
        },
        AssumptionLine {
            tag: relation_tag(rel.relation).to_string(),
            satisfied: rel.relation != Relation::Neither,
            detail: format!(
                "deg h̃₀ + deg (h̃∞(x̂))⁺ = {} + {} = {} vs deg P̃⁺ = {}; deg (h̃₀(x̂))⁺ + deg h̃∞ = {} + {} = {} vs deg (P̃(x̂))⁺ = {}",
                rel.deg_h0,
                rel.deg_hinf_hat_plus,
                rel.first_sum(),
                rel.deg_p_plus,
                rel.deg_h0_hat_plus,
                rel.deg_hinf,
                rel.second_sum(),
                rel.deg_p_hat_plus
            ),
        },
    ];

    Ok(CertificateReport {
        period: q.to_vec(),
        model: ctx.model,
        lambda,
        dispersion_terms: ptilde.len(),
        lambda_degree: ptilde.lambda_degree().unwrap_or(0),
        dispersion_content: content.to_string(),
        a1: Tagged { tag: "A1", value: a1 },
        a2: Tagged { tag: "A2", value: a2 },
        degree_relation: Tagged {
            tag: relation_tag(rel.relation),
            value: rel,
        },
        p1: Tagged { tag: "A2.5", value: p1 },
        p2: Tagged { tag: "A2.5", value: p2 },
        bound,
        dichotomy,
        theorem,
        verdict,
        lambda_exceptions_description: exceptions.describe(),
        lambda_exceptions: exceptions,
        assumptions,
        notes,
    })
}

/// Substitutes λ = λ₀ in every coefficient.
pub fn specialize(p: &LaurentPoly, lambda0: &BigRational) -> LaurentPoly {
    p.specialize_lambda(&Cyclotomic::from_rational(lambda0.clone()))
}

fn certify_at(spec: &OperatorSpec, ptilde: &LaurentPoly, opts: &CertifyOptions) -> Result<CertificateReport, CertifyError> {
    let a1 = match (ptilde.is_zero(), verify_a1_catalog(spec, ptilde)) {
        (false, v @ A1Status::VerifiedCatalog { .. }) => v,
        (_, v) => match opts.a1_mode {
            A1Mode::Attested => A1Status::Attested,
            A1Mode::Auto => v,
        },
    };
    let ctx = PolynomialContext {
        a1: Some(a1),
        model: detect_catalog(spec),
        lambda: opts.lambda.clone(),
        factors: None,
    };
    certify_polynomial(ptilde, &spec.period, &ctx)
}

/// The full pipeline from an operator specification. With a specialized
/// λ₀, the report notes when λ₀ is exceptional for the generic run.
pub fn certify(spec: &OperatorSpec, opts: &CertifyOptions) -> Result<CertificateReport, CertifyError> {
    let generic = dispersion(spec)?;
    reduce_quotient(&generic, &spec.period)?;
    let Some(l0) = &opts.lambda else {
        return certify_at(spec, &generic, opts);
    };
    let mut report = certify_at(spec, &specialize(&generic, l0), opts)?;
    let generic_opts = CertifyOptions {
        lambda: None,
        ..opts.clone()
    };
    let generic_report = certify_at(spec, &generic, &generic_opts)?;
    let hit: Vec<String> = generic_report
        .lambda_exceptions
        .polys()
        .iter()
        .filter(|p| p.eval(&Cyclotomic::from_rational(l0.clone())).is_zero())
        .map(|p| format!("({p})"))
        .collect();
    if !hit.is_empty() {
        report.notes.push(format!(
            "λ = {} is a zero of {}, an exceptional factor of the generic certificate",
            format_rational(l0),
            hit.join("·")
        ));
    }
    Ok(report)
}

impl CertificateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("period q = {:?}", self.period));
        if let Some(m) = &self.model {
            out.push_str(&format!(", catalog model {m:?}"));
        }
        out.push('\n');
        if let Some(l) = &self.lambda {
            out.push_str(&format!("λ specialized to {l}\n"));
        }
        out.push_str(&format!(
            "dispersion: {} z-terms, λ-degree {}, content {}\n",
            self.dispersion_terms, self.lambda_degree, self.dispersion_content
        ));
        for a in &self.assumptions {
            out.push_str(&format!("[{}] {}: {}\n", a.tag, if a.satisfied { "ok" } else { "--" }, a.detail));
        }
        let dich = match &self.dichotomy {
            Dichotomy::Excluded => "excluded".to_string(),
            Dichotomy::Holds { c, .. } => format!("holds with C = {c}"),
            Dichotomy::NotApplicable => "not applicable".to_string(),
        };
        out.push_str(&format!("dichotomy: {dich}\n"));
        let bound = match self.bound {
            Count::Known(b) => b.to_string(),
            Count::Unknown => "unknown".to_string(),
        };
        out.push_str(&format!("bound: {bound} ({})\n", self.theorem.unwrap_or("no theorem applies")));
        out.push_str(&format!("exceptional λ: {}\n", self.lambda_exceptions_description));
        out.push_str(&format!("verdict: {}\n", self.verdict.text));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, LambdaPoly};
    use crate::laurent::Exponent;
    use crate::models::{decorated_model, lieb_model, zd_model, Potential};

    fn lp(vars: usize, terms: &[(&[i64], &[i64])]) -> LaurentPoly {
        LaurentPoly::from_terms(
            vars,
            terms.iter().map(|(e, c)| (Exponent(e.to_vec()), LambdaPoly::from_ints(c))),
        )
    }

    #[test]
    fn z2_free_has_bound_one() {
        let r = certify(&zd_model(2, &[1, 1], &Potential::new()).unwrap(), &CertifyOptions::default()).unwrap();
        assert_eq!(r.degree_relation.value.relation, Relation::Equality);
        assert_eq!(r.dichotomy, Dichotomy::Excluded);
        assert_eq!(r.bound, Count::Known(1));
        assert_eq!(r.verdict.code, VerdictCode::IrreducibleGenericLambda);
    }

    #[test]
    fn z2_at_zero_energy_splits() {
        let opts = CertifyOptions {
            lambda: Some(rat(0)),
            ..Default::default()
        };
        let r = certify(&zd_model(2, &[1, 1], &Potential::new()).unwrap(), &opts).unwrap();
        assert!(matches!(r.dichotomy, Dichotomy::Holds { .. }));
        assert_eq!(r.bound, Count::Known(2));
        assert_eq!(r.verdict.code, VerdictCode::ComponentBound);
    }

    #[test]
    fn worked_example_polynomial() {
        let p = lp(2, &[(&[1, 0], &[1]), (&[0, 1], &[1]), (&[2, 1], &[1]), (&[1, 2], &[1])]);
        let ctx = PolynomialContext {
            a1: Some(A1Status::Attested),
            ..Default::default()
        };
        let r = certify_polynomial(&p, &[1, 1], &ctx).unwrap();
        assert_eq!(r.bound, Count::Known(2));
        assert_eq!(r.theorem, Some("Thm2"));
        assert_eq!(r.degree_relation.tag, "A'3");
    }

    #[test]
    fn non_catalog_is_inconclusive_unless_attested() {
        let mut s = OperatorSpec::new(2, 1, vec![1, 1]);
        s.add_hop(0, 0, vec![1, 0], rat(1));
        s.add_hop(0, 0, vec![0, 1], rat(1));
        s.add_hop(0, 0, vec![1, 1], rat(1));
        let r = certify(&s, &CertifyOptions::default()).unwrap();
        assert!(matches!(r.a1.value, A1Status::Unknown { .. }));
        assert_eq!(r.verdict.code, VerdictCode::Inconclusive);
        assert_eq!(r.bound, Count::Unknown);
        let att = CertifyOptions {
            a1_mode: A1Mode::Attested,
            ..Default::default()
        };
        assert_eq!(certify(&s, &att).unwrap().a1.value, A1Status::Attested);
    }

    #[test]
    fn lieb_flat_band_energy_is_degenerate() {
        let opts = CertifyOptions {
            lambda: Some(rat(0)),
            ..Default::default()
        };
        let r = certify(&lieb_model(&[1, 1], &Potential::new()).unwrap(), &opts).unwrap();
        assert_eq!(r.verdict.code, VerdictCode::Inconclusive);
        assert_eq!(r.bound, Count::Unknown);
    }

    #[test]
    fn decorated_d2_generic() {
        let r = certify(&decorated_model(2, 3, &[1, 2], &Potential::new()).unwrap(), &CertifyOptions::default()).unwrap();
        assert_eq!(r.verdict.code, VerdictCode::IrreducibleGenericLambda, "{}", r.render_text());
        assert!(r.to_json().contains("\"tag\": \"A1\""));
    }
}
