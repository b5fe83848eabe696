//! Sparse multivariate Laurent polynomials in `z₁,…,z_m` whose coefficients
//! are λ-polynomials over a cyclotomic field.

mod asymptotic;
mod polytope;

pub use asymptotic::PlusPart;
pub use polytope::NewtonPolytope;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::{ArithError, Cyclotomic, LambdaPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("substitution vector must have positive entries")]
    NonPositiveVector,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("exponent {exponent} of variable {var} is not divisible by the period")]
    NotDivisible { var: usize, exponent: i64 },
    #[error("coordinate {0} is zero")]
    ZeroCoordinate(usize),
    #[error("inexact division of Laurent polynomials")]
    InexactDivision,
    #[error("duplicate exponent {0:?}")]
    DuplicateExponent(Vec<i64>),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// An exponent vector α ∈ Z^m, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn zero(m: usize) -> Self {
        Exponent(vec![0; m])
    }

    /// The unit vector e_j.
    pub fn unit(m: usize, j: usize) -> Self {
        let mut e = vec![0; m];
        e[j] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn dot(&self, l: &[i64]) -> i64 {
        self.0.iter().zip(l).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Componentwise product l⊙α.
    pub fn hadamard(&self, l: &[i64]) -> Exponent {
        Exponent(self.0.iter().zip(l).map(|(a, b)| a * b).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<i64>> for Exponent {
    fn from(v: Vec<i64>) -> Self {
        Exponent(v)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Exponent, LambdaPoly>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, LambdaPoly::one())
    }

    pub fn constant(vars: usize, c: LambdaPoly) -> Self {
        Self::monomial(Exponent::zero(vars), c)
    }

    pub fn from_int(vars: usize, n: i64) -> Self {
        Self::constant(vars, LambdaPoly::from_int(n))
    }

    /// The polynomial λ, constant in z.
    pub fn lambda(vars: usize) -> Self {
        Self::constant(vars, LambdaPoly::lambda())
    }

    pub fn monomial(exp: Exponent, c: LambdaPoly) -> Self {
        let mut p = Self::zero(exp.len());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The variable z_j (0-based).
    pub fn var(vars: usize, j: usize) -> Self {
        Self::monomial(Exponent::unit(vars, j), LambdaPoly::one())
    }

    /// Sums the given terms; repeated exponents are combined.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Exponent, LambdaPoly)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(vars: usize, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(
            vars,
            terms.iter().map(|(e, c)| (Exponent(e.to_vec()), LambdaPoly::from_int(*c))),
        )
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: LambdaPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &LambdaPoly)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when f is a nonzero monomial, i.e. a unit of the Laurent ring
    /// (up to its λ-coefficient).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True when f does not depend on z.
    pub fn is_z_constant(&self) -> bool {
        self.terms.keys().all(Exponent::is_zero)
    }

    pub fn coeff(&self, e: &Exponent) -> LambdaPoly {
        self.terms.get(e).cloned().unwrap_or_else(LambdaPoly::zero)
    }

    /// Greatest term in the canonical order.
    pub fn leading_term(&self) -> Option<(&Exponent, &LambdaPoly)> {
        self.terms.iter().next_back()
    }

    fn check_dims(&self, other: &Self) -> Result<(), LaurentError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(LaurentError::DimensionMismatch {
                expected: self.vars,
                found: other.vars,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_dims(other)?;
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LambdaPoly) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn scale_cyclotomic(&self, c: &Cyclotomic) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(e, x)| (e.clone(), x.scale(c))))
    }

    /// Multiplication by the monomial z^e.
    pub fn shift(&self, e: &Exponent) -> Self {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(a, c)| (a.add(e), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// f(μ⊙z) for a vector of cyclotomic scalars μ.
    pub fn twist(&self, mu: &[Cyclotomic]) -> Self {
        assert_eq!(mu.len(), self.vars);
        Self::from_terms(
            self.vars,
            self.terms.iter().map(|(e, c)| {
                let factor = e
                    .0
                    .iter()
                    .zip(mu)
                    .fold(Cyclotomic::one(), |acc, (&a, m)| &acc * &m.pow(a).expect("twist factors are nonzero"));
                (e.clone(), c.scale(&factor))
            }),
        )
    }

    /// Applies `f` to every λ-coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&LambdaPoly) -> LambdaPoly) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Substitutes λ = λ₀ in every coefficient.
    pub fn specialize_lambda(&self, lambda0: &Cyclotomic) -> Self {
        self.map_coeffs(|c| LambdaPoly::constant(c.eval(lambda0)))
    }

    /// Largest λ-degree among the coefficients.
    pub fn lambda_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(LambdaPoly::degree).max()
    }

    /// Monic gcd of all λ-coefficients.
    pub fn content(&self) -> LambdaPoly {
        self.terms
            .values()
            .fold(LambdaPoly::zero(), |acc, c| acc.gcd(c))
    }

    /// Greatest conductor among the coefficients.
    pub fn conductor(&self) -> u64 {
        self.terms.values().map(LambdaPoly::conductor).max().unwrap_or(1)
    }

    /// Maximum total degree over the terms.
    pub fn degree(&self) -> Result<i64, LaurentError> {
        self.terms
            .keys()
            .map(Exponent::total_degree)
            .max()
            .ok_or(LaurentError::ZeroPolynomial)
    }

    /// Componentwise minimum exponent α_min.
    pub fn min_exponents(&self) -> Result<Exponent, LaurentError> {
        self.fold_exponents(i64::min)
    }

    /// Componentwise maximum exponent.
    pub fn max_exponents(&self) -> Result<Exponent, LaurentError> {
        self.fold_exponents(i64::max)
    }

    fn fold_exponents(&self, f: impl Fn(i64, i64) -> i64) -> Result<Exponent, LaurentError> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(LaurentError::ZeroPolynomial)?.clone();
        Ok(it.fold(first, |acc, e| {
            Exponent(acc.0.iter().zip(&e.0).map(|(&a, &b)| f(a, b)).collect())
        }))
    }

    /// Exact quotient `self / divisor` in the Laurent ring over Q(ζ)[λ].
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, LaurentError> {
        self.check_dims(divisor)?;
        let (g_exp, g_lead) = divisor.leading_term().ok_or(ArithError::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Self::zero(self.vars));
        }
        if divisor.is_monomial() {
            let mut out = Self::zero(self.vars);
            for (e, c) in &self.terms {
                let q = c.exact_div(g_lead).map_err(|_| LaurentError::InexactDivision)?;
                out.terms.insert(e.sub(g_exp), q);
            }
            return Ok(out);
        }
        // Quotient exponents are confined to the box
        // [min(f) − min(g), max(f) − max(g)].
        let lo = self.min_exponents()?.sub(&divisor.min_exponents()?);
        let hi = self.max_exponents()?.sub(&divisor.max_exponents()?);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars);
        while let Some((r_exp, r_lead)) = rem.leading_term() {
            let e = r_exp.sub(g_exp);
            if e.0.iter().zip(lo.0.iter().zip(&hi.0)).any(|(x, (l, h))| x < l || x > h) {
                return Err(LaurentError::InexactDivision);
            }
            let c = r_lead
                .exact_div(g_lead)
                .map_err(|_| LaurentError::InexactDivision)?;
            let step = Self::monomial(e.clone(), c.clone());
            rem = &rem - &(&step * divisor);
            quot.add_term(e, c);
        }
        Ok(quot)
    }

    /// Numeric value Σ c_α(λ)·z^α.
    pub fn lp_eval(&self, z: &[Complex64], lambda: Complex64) -> Result<Complex64, LaurentError> {
        if z.len() != self.vars {
            return Err(LaurentError::DimensionMismatch {
                expected: self.vars,
                found: z.len(),
            });
        }
        if let Some(j) = z.iter().position(|v| v.norm() == 0.0) {
            return Err(LaurentError::ZeroCoordinate(j));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = e
                    .0
                    .iter()
                    .zip(z)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&a, v)| acc * v.powi(a as i32));
                c.eval_complex(lambda) * mono
            })
            .sum())
    }

    /// Rendering with variables `{var}1, {var}2, …`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(j, &a)| match a {
                        1 => format!("{var}{}", j + 1),
                        _ => format!("{var}{}^{a}", j + 1),
                    })
                    .collect();
                let coeff = c.to_string();
                if mono.is_empty() {
                    format!("({coeff})")
                } else if coeff == "1" {
                    mono.join("*")
                } else {
                    format!("({coeff})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$inner(rhs).expect("operands share a variable count")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coeff: LambdaPoly,
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    vars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentJson {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = LaurentJson::deserialize(d)?;
        let mut p = LaurentPoly::zero(raw.vars);
        let mut seen = std::collections::BTreeSet::new();
        for t in raw.terms {
            if t.exp.len() != raw.vars {
                return Err(D::Error::custom(LaurentError::DimensionMismatch {
                    expected: raw.vars,
                    found: t.exp.len(),
                }));
            }
            let e = Exponent(t.exp);
            if !seen.insert(e.clone()) {
                return Err(D::Error::custom(LaurentError::DuplicateExponent(e.0)));
            }
            if !t.coeff.is_zero() {
                p.terms.insert(e, t.coeff);
            }
        }
        Ok(p)
    }
}
