use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ArithError, Cyclotomic};

/// A univariate polynomial in the spectral parameter λ with cyclotomic
/// coefficients, stored densely (index = power of λ) with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LambdaPoly {
    coeffs: Vec<Cyclotomic>,
}

impl LambdaPoly {
    pub fn from_coeffs(mut coeffs: Vec<Cyclotomic>) -> Self {
        while coeffs.last().is_some_and(Cyclotomic::is_zero) {
            coeffs.pop();
        }
        LambdaPoly { coeffs }
    }

    pub fn zero() -> Self {
        LambdaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Cyclotomic::from_int(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::constant(Cyclotomic::from_rational(r))
    }

    /// The monomial `c·λ^k`.
    pub fn monomial(c: Cyclotomic, k: usize) -> Self {
        let mut coeffs = vec![Cyclotomic::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// The polynomial `λ`.
    pub fn lambda() -> Self {
        Self::monomial(Cyclotomic::one(), 1)
    }

    /// Builds a polynomial from integer coefficients, lowest power first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Cyclotomic::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Cyclotomic> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Cyclotomic {
        self.coeffs.get(k).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for nonzero constants and for zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in λ; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Cyclotomic> {
        self.coeffs.last()
    }

    /// Greatest conductor among the coefficients.
    pub fn conductor(&self) -> u64 {
        self.coeffs.iter().map(Cyclotomic::conductor).max().unwrap_or(1)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x.scale(r)).collect())
    }

    /// Multiplication by `λ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Cyclotomic::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        LambdaPoly { coeffs }
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let c = match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) if negate => a - b,
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) if negate => -b,
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.push(c);
        }
        Self::from_coeffs(out)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Cyclotomic::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// Euclidean division over the coefficient field.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), ArithError> {
        let lead = divisor.leading().ok_or(ArithError::DivisionByZero)?;
        let lead_inv = lead.inv()?;
        let dn = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Cyclotomic::zero(); rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dn] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dn);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Returns `q` with `self = q · divisor`, or `InexactDivision`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, ArithError> {
        if divisor.is_constant() {
            let c = divisor.leading().ok_or(ArithError::DivisionByZero)?;
            return Ok(self.scale(&c.inv()?));
        }
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ArithError::InexactDivision)
        }
    }

    /// Scales to a monic polynomial (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(c) if !c.is_one() => self.scale(&c.inv().expect("leading coefficient is nonzero")),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor is nonzero");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        self.coeffs.iter().rev().fold(Cyclotomic::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.embed())
    }

    /// Applies complex conjugation to every coefficient.
    pub fn conj(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(Cyclotomic::conj).collect())
    }

    /// Human-readable rendering in the variable `var`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_string();
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(match (k, c.as_str()) {
                (0, _) => c,
                (_, "1") => power,
                (_, "-1") => format!("-{power}"),
                _ => format!("{c}*{power}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("λ"))
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("λ"))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&LambdaPoly> for &LambdaPoly {
            type Output = LambdaPoly;
            fn $method(self, rhs: &LambdaPoly) -> LambdaPoly {
                $body(self, rhs)
            }
        }
        impl $tr<LambdaPoly> for LambdaPoly {
            type Output = LambdaPoly;
            fn $method(self, rhs: LambdaPoly) -> LambdaPoly {
                $body(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &LambdaPoly, b: &LambdaPoly| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &LambdaPoly, b: &LambdaPoly| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &LambdaPoly, b: &LambdaPoly| a.mul_impl(b));

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        -&self
    }
}

impl Serialize for LambdaPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LambdaPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self::from_coeffs(Vec::<Cyclotomic>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> LambdaPoly {
        LambdaPoly::lambda()
    }

    #[test]
    fn exact_division_examples() {
        let a = LambdaPoly::from_ints(&[-1, 0, 1]);
        let b = LambdaPoly::from_ints(&[-1, 1]);
        assert_eq!(a.exact_div(&b).unwrap(), LambdaPoly::from_ints(&[1, 1]));

        let i = Cyclotomic::zeta(4, 1).unwrap();
        let a = LambdaPoly::from_ints(&[1, 0, 1]);
        let b = &lam() - &LambdaPoly::constant(i.clone());
        let expect = &lam() + &LambdaPoly::constant(i);
        assert_eq!(a.exact_div(&b).unwrap(), expect);

        assert_eq!(a.exact_div(&LambdaPoly::one()).unwrap(), a);
        assert_eq!(
            LambdaPoly::from_ints(&[1, 0, 1]).exact_div(&LambdaPoly::from_ints(&[-1, 1])),
            Err(ArithError::InexactDivision)
        );
        assert_eq!(a.exact_div(&LambdaPoly::zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn arithmetic_and_degree() {
        let p = &(&lam() * &lam()) - &LambdaPoly::one();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p, LambdaPoly::from_ints(&[-1, 0, 1]));
        assert!((&p - &p).is_zero());
        assert_eq!(LambdaPoly::zero().degree(), None);
        assert_eq!(p.eval(&Cyclotomic::from_int(3)), Cyclotomic::from_int(8));
    }

    #[test]
    fn gcd_is_monic() {
        let a = LambdaPoly::from_ints(&[-2, 0, 2]); // 2(λ-1)(λ+1)
        let b = LambdaPoly::from_ints(&[3, 3]); // 3(λ+1)
        assert_eq!(a.gcd(&b), LambdaPoly::from_ints(&[1, 1]));
        assert_eq!(a.gcd(&LambdaPoly::from_ints(&[5])), LambdaPoly::one());
        assert_eq!(a.gcd(&LambdaPoly::zero()), LambdaPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(LambdaPoly::from_ints(&[-1, 0, 1]).to_string(), "λ^2 - 1");
        assert_eq!(LambdaPoly::from_ints(&[0, -3]).to_string(), "-3*λ");
        assert_eq!(LambdaPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_is_a_list_of_cyclotomics() {
        let p = LambdaPoly::from_ints(&[2, 0, -1]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[{"N":1,"coeffs":["2"]},{"N":1,"coeffs":["0"]},{"N":1,"coeffs":["-1"]}]"#);
        let back: LambdaPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
