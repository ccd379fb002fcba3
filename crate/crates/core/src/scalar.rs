//! Exact scalar types.
//!
//! Everything in the workbench is generic over [`Scalar`]. Two concrete
//! implementations are provided: arbitrary-precision rationals and dual
//! numbers `a + b·nil` with `nil² = 0` built on top of any scalar.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact scalar used for coefficients and structure-function values.
///
/// Unlike [`num_traits::Num`] there is no total division: [`Scalar::inverse`]
/// returns `None` for elements that are not units (zero for a field, any
/// dual number with vanishing real part).
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Embeds an exact rational.
    fn from_rational(q: &BigRational) -> Self;

    /// Multiplicative inverse, `None` when the value is not a unit.
    fn inverse(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// `self / rhs`, `None` when `rhs` is not a unit.
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self.clone() * inv)
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// A scalar in which every nonzero element is invertible.
///
/// Linear solvers (coboundary detection) require this.
pub trait Field: Scalar {}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for BigRational {}

/// Dual number `re + nil·nil_part` with `nil² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dual<T> {
    pub re: T,
    pub nil: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, nil: T) -> Self {
        Dual { re, nil }
    }

    pub fn real(re: T) -> Self {
        Dual { re, nil: T::zero() }
    }

    /// The nilpotent unit itself.
    pub fn unit_nil() -> Self {
        Dual {
            re: T::zero(),
            nil: T::one(),
        }
    }
}

impl<T: Scalar> Zero for Dual<T> {
    fn zero() -> Self {
        Dual::real(T::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.nil.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    fn one() -> Self {
        Dual::real(T::one())
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            re: self.re + rhs.re,
            nil: self.nil + rhs.nil,
        }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            re: self.re - rhs.re,
            nil: self.nil - rhs.nil,
        }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let nil = self.re.clone() * rhs.nil + self.nil * rhs.re.clone();
        Dual {
            re: self.re * rhs.re,
            nil,
        }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            re: -self.re,
            nil: -self.nil,
        }
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn from_rational(q: &BigRational) -> Self {
        Dual::real(T::from_rational(q))
    }

    // (a + b·nil)⁻¹ = a⁻¹ − b·a⁻²·nil
    fn inverse(&self) -> Option<Self> {
        let inv = self.re.inverse()?;
        let nil = -(self.nil.clone() * inv.clone() * inv.clone());
        Some(Dual { re: inv, nil })
    }
}

impl<T: Scalar> fmt::Display for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nil.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*nil", self.nil)
        } else {
            write!(f, "{}+{}*nil", self.re, self.nil)
        }
    }
}

/// Error produced by [`parse_rational`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

/// Parses `p`, `-p`, `p/q` or `-p/q` into a reduced rational.
///
/// Decimal notation is rejected on purpose; all inputs stay exact.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let t = text.trim();
    let err = || RationalParseError(t.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(err());
    }
    let n = BigInt::from_str(num).map_err(|_| err())?;
    let d = BigInt::from_str(den).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals_are_reduced() {
        let x = parse_rational("6/-4").err();
        assert!(x.is_some(), "sign only allowed on numerator");
        let y = parse_rational("-6/4").unwrap();
        assert_eq!(y, q(-3, 2));
        assert_eq!(y.denom(), &BigInt::from(2));
    }

    #[test]
    fn rejects_decimals_and_zero_denominator() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1e3").is_err());
    }

    #[test]
    fn dual_square_has_expected_parts() {
        let x = Dual::new(q(3, 2), q(-5, 7));
        let sq = x.clone() * x;
        assert_eq!(sq.re, q(9, 4));
        assert_eq!(sq.nil, q(2, 1) * q(3, 2) * q(-5, 7));
    }

    #[test]
    fn nil_is_nilpotent() {
        let n = Dual::<BigRational>::unit_nil();
        assert!((n.clone() * n).is_zero());
        assert!(Dual::<BigRational>::unit_nil().inverse().is_none());
    }

    #[test]
    fn dual_inverse_roundtrip() {
        let x = Dual::new(q(2, 3), q(7, 5));
        let inv = x.inverse().unwrap();
        assert_eq!(x * inv, Dual::one());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = q(-2, 3);
        assert_eq!(Scalar::pow(&x, 0), BigRational::one());
        assert_eq!(Scalar::pow(&x, 5), x.clone() * x.clone() * x.clone() * x.clone() * x);
    }

    #[test]
    fn display_forms() {
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(-1, 2)), "-1/2");
        assert_eq!(Dual::new(q(1, 2), q(0, 1)).to_string(), "1/2");
        assert_eq!(Dual::new(q(0, 1), q(-2, 1)).to_string(), "-2*nil");
        assert_eq!(Dual::new(q(1, 1), q(3, 1)).to_string(), "1+3*nil");
    }
}
