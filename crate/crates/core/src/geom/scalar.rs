//! Arbitrary-precision rational scalars.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use num_traits::ToPrimitive;

use super::GeomError;

/// An exact rational number.
///
/// `Scalar` wraps a reduced big rational and is the coordinate type for the
/// whole crate. Ordering is the usual order on rationals. The textual form
/// is `numerator/denominator` in lowest terms (the `/denominator` part is
/// omitted when the denominator is 1), and parsing accepts both forms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    /// The scalar 0.
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    /// The scalar 1.
    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    /// The integer `v` as a scalar.
    pub fn from_int(v: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(v)))
    }

    /// The fraction `num/den`.
    ///
    /// # Panics
    /// Panics if `den == 0`. Use [`Scalar::from_str`] for untrusted input.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds a scalar from big integer numerator and denominator.
    ///
    /// # Panics
    /// Panics if `den` is zero.
    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Scalar(BigRational::new(num, den))
    }

    /// The power `2^exp` for any (possibly negative) integer exponent.
    pub fn pow2(exp: i64) -> Self {
        let one = BigInt::one();
        if exp >= 0 {
            Scalar(BigRational::from_integer(one << exp as usize))
        } else {
            Scalar(BigRational::new(one.clone(), one << (-exp) as usize))
        }
    }

    /// Borrows the underlying rational.
    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// Consumes the scalar and returns the underlying rational.
    pub fn into_rational(self) -> BigRational {
        self.0
    }

    /// Numerator in lowest terms (sign-carrying).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator in lowest terms (always positive).
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Whether the scalar equals 0.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Whether the scalar is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Whether the scalar is strictly negative.
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Sign of the scalar: -1, 0, or 1.
    pub fn signum(&self) -> i8 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// The square of the scalar.
    pub fn sq(&self) -> Self {
        Scalar(&self.0 * &self.0)
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// Panics if the scalar is zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Scalar(self.0.recip())
    }

    /// Largest integer not exceeding the scalar.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Nearest 64-bit float (for display and rendering only).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Minimum of two scalars by value.
    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Maximum of two scalars by value.
    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Scalar {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = s.trim();
        let body = raw.strip_prefix('+').unwrap_or(raw);
        let bad = || GeomError::BadScalarLiteral(raw.to_string());
        match body.split_once('/') {
            None => {
                let n = BigInt::from_str(body).map_err(|_| bad())?;
                Ok(Scalar(BigRational::from_integer(n)))
            }
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar(BigRational::new(n, d)))
            }
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(&self.0 $op rhs.0)
            }
        }
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);
impl_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(Scalar::from_int(5).to_string(), "5");
        assert_eq!(Scalar::from_int(-7).to_string(), "-7");
        assert_eq!(Scalar::ratio(1, 2).to_string(), "1/2");
        assert_eq!(Scalar::ratio(-2, 4).to_string(), "-1/2");
        assert_eq!(Scalar::ratio(3, -6).to_string(), "-1/2");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn parse_round_trips() {
        for text in ["0", "5", "-7", "1/2", "-1/2", "355/113"] {
            let v: Scalar = text.parse().unwrap();
            assert_eq!(v.to_string(), text);
        }
        // Non-canonical inputs normalize.
        assert_eq!("2/4".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("+3".parse::<Scalar>().unwrap(), Scalar::from_int(3));
        assert_eq!(" -6/4 ".parse::<Scalar>().unwrap(), Scalar::ratio(-3, 2));
    }

    #[test]
    fn parse_rejects_garbage() {
        for text in ["", "/", "1/", "/2", "1/0", "a", "1.5", "1 / 0"] {
            assert!(text.parse::<Scalar>().is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        assert_eq!(&a + &b, Scalar::ratio(1, 2));
        assert_eq!(&a - &b, Scalar::ratio(1, 6));
        assert_eq!(&a * &b, Scalar::ratio(1, 18));
        assert_eq!(&a / &b, Scalar::from_int(2));
        assert_eq!(-&a, Scalar::ratio(-1, 3));
        assert_eq!(a.sq(), Scalar::ratio(1, 9));
    }

    #[test]
    fn pow2_covers_both_signs() {
        assert_eq!(Scalar::pow2(0), Scalar::one());
        assert_eq!(Scalar::pow2(10), Scalar::from_int(1024));
        assert_eq!(Scalar::pow2(-3), Scalar::ratio(1, 8));
    }

    #[test]
    fn ordering_matches_rationals() {
        let vals = [
            Scalar::ratio(-3, 2),
            Scalar::from_int(-1),
            Scalar::zero(),
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 2),
            Scalar::from_int(2),
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn signum_and_predicates() {
        assert_eq!(Scalar::ratio(-1, 5).signum(), -1);
        assert_eq!(Scalar::zero().signum(), 0);
        assert_eq!(Scalar::ratio(7, 5).signum(), 1);
        assert!(Scalar::zero().is_zero());
        assert!(Scalar::ratio(1, 9).is_positive());
        assert!(Scalar::ratio(-1, 9).is_negative());
    }

    #[test]
    fn floor_int_rounds_toward_negative_infinity() {
        assert_eq!(Scalar::ratio(7, 2).floor_int(), BigInt::from(3));
        assert_eq!(Scalar::ratio(-7, 2).floor_int(), BigInt::from(-4));
        assert_eq!(Scalar::from_int(4).floor_int(), BigInt::from(4));
    }
}
