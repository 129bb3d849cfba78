use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
///
/// Serialises as `{"num": "<decimal>", "den": "<decimal>"}` so that large
/// denominators never pass through floating point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        ExactRational(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` significant digits, computed exactly
    /// (no float round trip).
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();
        let ten = BigInt::from(10);
        // Scale so that the integer part has exactly `digits` digits.
        let mut exp10: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
        let value_at = |e: i64| -> BigInt {
            let shift = digits as i64 - 1 - e;
            if shift >= 0 {
                (&num * num_traits::pow(ten.clone(), shift as usize)) / &den
            } else {
                &num / (&den * num_traits::pow(ten.clone(), (-shift) as usize))
            }
        };
        let limit = num_traits::pow(ten.clone(), digits - 1);
        while value_at(exp10) < limit {
            exp10 -= 1;
        }
        while value_at(exp10) >= &limit * &ten {
            exp10 += 1;
        }
        // Round half up on the next digit.
        let shift = digits as i64 - exp10;
        let scaled = if shift >= 0 {
            (&num * num_traits::pow(ten.clone(), shift as usize)) / &den
        } else {
            &num / (&den * num_traits::pow(ten.clone(), (-shift) as usize))
        };
        let mut mantissa = &scaled / &ten;
        if &scaled % &ten >= BigInt::from(5) {
            mantissa += 1;
        }
        if mantissa >= &limit * &ten {
            mantissa /= &ten;
            exp10 += 1;
        }
        let mut s = mantissa.to_string();
        let point = exp10 + 1;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if point <= 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat('0').take((-point) as usize));
            out.push_str(s.trim_end_matches('0'));
        } else if point as usize >= s.len() {
            out.push_str(&s);
            out.extend(std::iter::repeat('0').take(point as usize - s.len()));
        } else {
            let frac = s.split_off(point as usize);
            out.push_str(&s);
            let frac = frac.trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        }
        out
    }

    /// Parse from separate numerator and denominator decimal strings.
    pub fn from_parts(num: &str, den: &str) -> Result<Self> {
        let n = BigInt::from_str(num.trim())
            .map_err(|e| Error::InvalidArgument(format!("numerator {num:?}: {e}")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|e| Error::InvalidArgument(format!("denominator {den:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(ExactRational::new(n, d))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

#[derive(Serialize, Deserialize)]
struct Parts {
    num: String,
    den: String,
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Parts {
            num: self.numer().to_string(),
            den: self.denom().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = Parts::deserialize(d)?;
        ExactRational::from_parts(&p.num, &p.den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d)
    }

    #[test]
    fn reduced_and_signed() {
        let x = r(30, -480);
        assert_eq!(x.numer(), &BigInt::from(-1));
        assert_eq!(x.denom(), &BigInt::from(16));
        assert_eq!(x.to_string(), "-1/16");
        assert_eq!(r(6, 3).to_string(), "2");
    }

    #[test]
    fn decimals() {
        assert_eq!(r(1, 16).to_decimal(15), "0.0625");
        assert_eq!(r(47, 288).to_decimal(15), "0.163194444444444");
        assert_eq!(r(2, 3).to_decimal(15), "0.666666666666667");
        assert_eq!(r(-5, 36).to_decimal(3), "-0.139");
        assert_eq!(r(12345, 1).to_decimal(3), "12300");
        assert_eq!(r(1, 3_000_000).to_decimal(4), "0.0000003333");
        assert_eq!(r(999_999, 1_000_000).to_decimal(3), "1");
        assert_eq!(ExactRational::zero().to_decimal(15), "0");
    }

    #[test]
    fn parts_round_trip() {
        let x = r(-7, 1_234_567);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"num":"-7","den":"1234567"}"#);
        let back: ExactRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(ExactRational::from_parts("1", "0").is_err());
    }

    fn arb() -> impl Strategy<Value = ExactRational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn field_laws(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            let s = &(&a * &b) - &c;
            prop_assert!(s.denom() > &BigInt::from(0));
            prop_assert!(s.numer().gcd(s.denom()) == BigInt::from(1) || s.is_zero());
        }

        #[test]
        fn decimal_close_to_float(a in arb()) {
            let d: f64 = a.to_decimal(15).parse().unwrap();
            prop_assert!((d - a.to_f64()).abs() <= 1e-12 * a.to_f64().abs().max(1e-300));
        }
    }
}
