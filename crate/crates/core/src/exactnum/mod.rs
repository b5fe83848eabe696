//! Exact arithmetic: rationals, cyclotomic field elements, and univariate
//! polynomials in the spectral parameter λ over them.

mod cyclotomic;
mod lambda;
mod linsolve;

pub use cyclotomic::{euler_phi, Cyclotomic, MAX_CONDUCTOR};
pub use lambda::LambdaPoly;
pub(crate) use linsolve::solve_rational;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_traits::{One, Zero};

/// Errors raised by the exact arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division: the remainder is nonzero")]
    InexactDivision,
    #[error("conductor {0} exceeds the supported maximum of {MAX_CONDUCTOR}")]
    ConductorTooLarge(u64),
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("malformed rational literal {0:?}")]
    ParseRational(String),
    #[error("conductor {conductor} needs {expected} coefficients, found {found}")]
    CoefficientCount {
        conductor: u64,
        expected: usize,
        found: usize,
    },
}

/// Parses `"p"`, `"-p"` or `"p/q"` (no decimals, no exponents) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ArithError> {
    let bad = || ArithError::ParseRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) || den.starts_with('-') {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(format_rational(&parse_rational("-4/6").unwrap()), "-2/3");
    }

    #[test]
    fn parse_rejects_decimals_and_zero_denominators() {
        for bad in ["1.5", "1/0", "", "1e3", "2/-3", "i", "1+2i"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }
}
