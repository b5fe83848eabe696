use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational, solve_rational, ArithError};

/// Largest conductor accepted anywhere in the crate.
pub const MAX_CONDUCTOR: u64 = 10_000;

/// `Q(ζ_N)` with its defining polynomial `Φ_N` (monic, integer coefficients,
/// index = power of `x`).
#[derive(Debug)]
struct Field {
    n: u64,
    phi: usize,
    modulus: Vec<i128>,
}

fn registry() -> &'static RwLock<HashMap<u64, Arc<Field>>> {
    static FIELDS: OnceLock<RwLock<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    FIELDS.get_or_init(|| RwLock::new(HashMap::new()))
}

fn try_field(n: u64) -> Result<Arc<Field>, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroConductor);
    }
    if n > MAX_CONDUCTOR {
        return Err(ArithError::ConductorTooLarge(n));
    }
    if let Some(f) = registry().read().expect("field registry poisoned").get(&n) {
        return Ok(Arc::clone(f));
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i128; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let divisor = try_field(d)?;
            poly = divide_monic(&poly, &divisor.modulus);
        }
    }
    let field = Arc::new(Field {
        n,
        phi: poly.len() - 1,
        modulus: poly,
    });
    let mut guard = registry().write().expect("field registry poisoned");
    Ok(Arc::clone(guard.entry(n).or_insert(field)))
}

fn field(n: u64) -> Arc<Field> {
    match try_field(n) {
        Ok(f) => f,
        Err(e) => panic!("cyclotomic arithmetic left the supported range: {e}"),
    }
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "cyclotomic division must be exact");
    quot
}

/// Euler's totient, the degree of `Q(ζ_N)` over `Q`.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Reduces a coefficient vector (any length) modulo `Φ_N`, returning exactly `φ(N)` entries.
fn reduce(mut v: Vec<BigRational>, f: &Field) -> Vec<BigRational> {
    let phi = f.phi;
    if v.len() > phi {
        for k in (phi..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[k], BigRational::zero());
            for i in 0..phi {
                let m = f.modulus[i];
                if m != 0 {
                    v[k - phi + i] -= &c * BigRational::from_integer(m.into());
                }
            }
        }
        v.truncate(phi);
    }
    v.resize(phi, BigRational::zero());
    v
}

/// An element of the cyclotomic field `Q(ζ_N)`, stored in the power basis
/// `1, ζ, …, ζ^{φ(N)-1}` reduced modulo `Φ_N`.
///
/// Results of arithmetic live in `Q(ζ_lcm)`; elements whose non-constant
/// coordinates vanish are demoted to conductor 1 so rationals are always
/// stored as rationals. Equality lifts both sides to a common conductor.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<Field>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    fn from_parts(field: Arc<Field>, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), field.phi);
        if field.n > 1 && coeffs[1..].iter().all(Zero::is_zero) {
            let c = coeffs.into_iter().next().unwrap_or_else(BigRational::zero);
            return Self::from_rational(c);
        }
        Cyclotomic { field, coeffs }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclotomic {
            field: field(1),
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `ζ_N^k` with `ζ_N = e^{2πi/N}`.
    pub fn zeta(n: u64, k: i64) -> Result<Self, ArithError> {
        let f = try_field(n)?;
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        let coeffs = reduce(v, &f);
        Ok(Self::from_parts(f, coeffs))
    }

    /// Builds `Σ coeffs[i] ζ_N^i`; `coeffs` may be longer than `φ(N)`.
    pub fn from_power_coeffs(n: u64, coeffs: Vec<BigRational>) -> Result<Self, ArithError> {
        let f = try_field(n)?;
        let coeffs = reduce(coeffs, &f);
        Ok(Self::from_parts(f, coeffs))
    }

    pub fn conductor(&self) -> u64 {
        self.field.n
    }

    /// Power-basis coordinates at the stored conductor.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.field.n == 1 && self.coeffs[0].is_one()
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.field.n == 1).then(|| &self.coeffs[0])
    }

    fn lifted(&self, target: &Arc<Field>) -> Cow<'_, [BigRational]> {
        if self.field.n == target.n {
            return Cow::Borrowed(&self.coeffs);
        }
        let step = (target.n / self.field.n) as usize;
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Cow::Owned(reduce(v, target))
    }

    fn common_field(&self, other: &Self) -> Arc<Field> {
        if self.field.n == other.field.n {
            Arc::clone(&self.field)
        } else {
            field(self.field.n.lcm(&other.field.n))
        }
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let f = self.common_field(other);
        let a = self.lifted(&f);
        let b = other.lifted(&f);
        let coeffs = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| if negate { x - y } else { x + y })
            .collect();
        Self::from_parts(f, coeffs)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if let Some(r) = self.as_rational() {
            return other.scale(r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(r);
        }
        let f = self.common_field(other);
        let a = self.lifted(&f);
        let b = other.lifted(&f);
        let mut prod = vec![BigRational::zero(); 2 * f.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let coeffs = reduce(prod, &f);
        Self::from_parts(f, coeffs)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let f = Arc::clone(&self.field);
        let phi = f.phi;
        // Column j holds the coordinates of self · ζ^j.
        let mut columns = Vec::with_capacity(phi);
        for j in 0..phi {
            let mut v = vec![BigRational::zero(); j + phi];
            for (i, c) in self.coeffs.iter().enumerate() {
                v[i + j] = c.clone();
            }
            columns.push(reduce(v, &f));
        }
        let rows = (0..phi)
            .map(|i| columns.iter().map(|col| col[i].clone()).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); phi];
        rhs[0] = BigRational::one();
        let x = solve_rational(rows, rhs).ok_or(ArithError::DivisionByZero)?;
        Ok(Self::from_parts(f, x))
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.field.n == 1 {
            return self.clone();
        }
        let n = self.field.n as usize;
        let mut v = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(n - i) % n] += c;
        }
        let f = Arc::clone(&self.field);
        let coeffs = reduce(v, &f);
        Self::from_parts(f, coeffs)
    }

    pub fn pow(&self, k: i64) -> Result<Self, ArithError> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Numeric value under `ζ_N ↦ e^{2πi/N}`.
    pub fn embed(&self) -> Complex64 {
        let n = self.field.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * std::f64::consts::PI * (i as f64) / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// The same element written over the smallest conductor that contains it.
    pub fn reduce_conductor(&self) -> Self {
        let n = self.field.n;
        if n == 1 {
            return self.clone();
        }
        for m in (2..n).filter(|m| n % m == 0) {
            let sub = field(m);
            let step = (n / m) as usize;
            let basis: Vec<Vec<BigRational>> = (0..sub.phi)
                .map(|j| {
                    let mut v = vec![BigRational::zero(); j * step + 1];
                    v[j * step] = BigRational::one();
                    reduce(v, &self.field)
                })
                .collect();
            let rows = (0..self.field.phi)
                .map(|i| basis.iter().map(|b| b[i].clone()).collect())
                .collect();
            if let Some(x) = solve_rational(rows, self.coeffs.clone()) {
                return Self::from_parts(sub, x);
            }
        }
        self.clone()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            return self.coeffs == other.coeffs;
        }
        let f = self.common_field(other);
        self.lifted(&f) == other.lifted(&f)
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_conductor();
        if let Some(q) = r.as_rational() {
            return write!(f, "{}", format_rational(q));
        }
        let mut parts = Vec::new();
        for (i, c) in r.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let c = format_rational(c);
            parts.push(match i {
                0 => c,
                1 => format!("{c}*ζ{}", r.field.n),
                _ => format!("{c}*ζ{}^{i}", r.field.n),
            });
        }
        write!(f, "({})", parts.join(" + "))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                $body(self, rhs)
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Cyclotomic, b: &Cyclotomic| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &Cyclotomic, b: &Cyclotomic| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &Cyclotomic, b: &Cyclotomic| a.mul_impl(b));

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.field.n == rhs.field.n && self.field.n != 1 {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
            let f = Arc::clone(&self.field);
            *self = Self::from_parts(f, std::mem::take(&mut self.coeffs));
        } else if self.field.n == 1 && rhs.field.n == 1 {
            self.coeffs[0] += &rhs.coeffs[0];
        } else {
            *self = self.add_impl(rhs, false);
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        if self.field.n == 1 && rhs.field.n == 1 {
            self.coeffs[0] -= &rhs.coeffs[0];
        } else {
            *self = self.add_impl(rhs, true);
        }
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = self.mul_impl(rhs);
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl From<BigRational> for Cyclotomic {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    #[serde(rename = "N")]
    n: u64,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.reduce_conductor();
        CyclotomicRepr {
            n: r.field.n,
            coeffs: r.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = CyclotomicRepr::deserialize(d)?;
        let f = try_field(repr.n).map_err(D::Error::custom)?;
        if repr.coeffs.len() != f.phi {
            return Err(D::Error::custom(ArithError::CoefficientCount {
                conductor: repr.n,
                expected: f.phi,
                found: repr.coeffs.len(),
            }));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Self::from_parts(f, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    fn z(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::zeta(n, k).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(field(1).modulus, vec![-1, 1]);
        assert_eq!(field(6).modulus, vec![1, -1, 1]);
        assert_eq!(field(12).modulus, vec![1, 0, -1, 0, 1]);
        assert_eq!(field(105).phi, 48);
        // Φ_105 is the first with a coefficient of absolute value 2.
        assert!(field(105).modulus.iter().any(|&c| c == -2));
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(z(1, 0), Cyclotomic::one());
        assert_eq!(z(6, 3), Cyclotomic::from_int(-1));
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_int(-1));
        assert_eq!(z(5, 7), z(5, 2));
        assert_eq!(z(5, -1), z(5, 4));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&z(6, 1) * &z(6, 5), Cyclotomic::one());
        let i = z(4, 1);
        let one = Cyclotomic::one();
        assert_eq!((&one + &i) * (&one - &i), Cyclotomic::from_int(2));
        assert_eq!(z(3, 1).inv().unwrap(), z(3, 2));
        assert_eq!(Cyclotomic::zero().inv(), Err(ArithError::DivisionByZero));
        assert_eq!(z(8, 3).conj(), z(8, 5));
    }

    #[test]
    fn mixed_conductors_compare_by_lifting() {
        // ζ_3 = ζ_6^2 and ζ_2 = -1.
        assert_eq!(z(3, 1), z(6, 2));
        assert_eq!(z(2, 1), Cyclotomic::from_int(-1));
        let sum = &z(2, 1) + &z(3, 1);
        assert_eq!(sum.conductor(), 3);
        assert_eq!(&z(4, 1) * &z(3, 1), z(12, 7));
    }

    #[test]
    fn conductor_reduction_finds_subfields() {
        let x = z(6, 2);
        assert_eq!(x.conductor(), 6);
        let r = x.reduce_conductor();
        assert_eq!(r.conductor(), 3);
        assert_eq!(r, x);
        let sum = &z(3, 1) + &z(3, 2);
        assert_eq!(sum, Cyclotomic::from_int(-1));
        assert_eq!(z(12, 3).reduce_conductor().conductor(), 4);
    }

    #[test]
    fn embed_examples() {
        let e = z(8, 1).embed();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.re - h).abs() < 1e-12 && (e.im - h).abs() < 1e-12);
        let e = (&z(3, 1) + &z(3, 2)).embed();
        assert!((e.re + 1.0).abs() < 1e-12 && e.im.abs() < 1e-12);
        let half = Cyclotomic::from_rational(BigRational::new(1.into(), 2.into()));
        assert_eq!(half.embed(), Complex64::new(0.5, 0.0));
        let e = z(256, 37).embed();
        let angle = 2.0 * std::f64::consts::PI * 37.0 / 256.0;
        assert!((e - Complex64::from_polar(1.0, angle)).norm() < 1e-12);
    }

    #[test]
    fn conductor_limit_is_enforced() {
        assert_eq!(Cyclotomic::zeta(10_001, 1), Err(ArithError::ConductorTooLarge(10_001)));
        assert_eq!(Cyclotomic::zeta(0, 1), Err(ArithError::ZeroConductor));
    }

    #[test]
    fn multiplicative_order_of_zeta() {
        for n in 1..=24u64 {
            for k in 0..n as i64 {
                let g = num_integer::gcd(n as i64, k).max(1);
                let order = if k == 0 { 1 } else { n as i64 / g };
                let x = z(n, k);
                let mut acc = Cyclotomic::one();
                for step in 1..=order {
                    acc = &acc * &x;
                    assert_eq!(acc.is_one(), step == order, "n={n} k={k} step={step}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip_uses_minimal_conductor() {
        let x = &z(6, 2) + &Cyclotomic::from_rational(BigRational::new(1.into(), 3.into()));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"N":3,"coeffs":["1/3","1"]}"#);
        let back: Cyclotomic = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"N":3,"coeffs":["1"]}"#).is_err());
    }

    fn arb_cyclotomic() -> impl Strategy<Value = Cyclotomic> {
        // Conductors divide 120 so that mixed operations stay in a small field.
        let conductors = prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24]);
        (conductors, prop::collection::vec((-5i64..=5, 1i64..=4), 24)).prop_map(|(n, raw)| {
            let coeffs = raw
                .into_iter()
                .take(euler_phi(n) as usize)
                .map(|(p, q)| BigRational::new(p.into(), q.into()))
                .collect();
            Cyclotomic::from_power_coeffs(n, coeffs).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn field_axioms(a in arb_cyclotomic(), b in arb_cyclotomic(), c in arb_cyclotomic()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn embedding_is_a_ring_morphism(a in arb_cyclotomic(), b in arb_cyclotomic()) {
            let prod = (&a * &b).embed();
            prop_assert!((prod - a.embed() * b.embed()).norm() <= 1e-10);
            let sum = (&a + &b).embed();
            prop_assert!((sum - (a.embed() + b.embed())).norm() <= 1e-10);
            prop_assert!((a.conj().embed() - a.embed().conj()).norm() <= 1e-10);
        }

        #[test]
        fn reduced_conductor_is_equal(a in arb_cyclotomic()) {
            let r = a.reduce_conductor();
            prop_assert!(r.conductor() <= a.conductor());
            prop_assert_eq!(r, a);
        }
    }

    #[test]
    fn rationals_are_demoted() {
        let x = &z(5, 1) - &z(5, 1);
        assert_eq!(x.conductor(), 1);
        assert!(x.is_zero());
        assert_eq!(Cyclotomic::from_int(3).as_rational(), Some(&rat(3)));
    }
}
