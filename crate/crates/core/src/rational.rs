//! Arbitrary-precision rationals kept in lowest terms.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number `numerator / denominator` with
/// `gcd(|numerator|, denominator) = 1` and `denominator >= 1`.
/// Zero is always stored as `0/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Returns `None` when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Self> {
        let den = den.into();
        if den.is_zero() {
            return None;
        }
        Some(Self(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn pow(&self, exp: i32) -> Self {
        Self(num_traits::Pow::pow(&self.0, exp))
    }

    /// Nearest `f64`; saturates to ±inf for out-of-range magnitudes.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.0.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// `gcd(|num|, den) == 1 && den >= 1`.
    pub fn is_canonical(&self) -> bool {
        let (n, d) = (self.0.numer(), self.0.denom());
        d.is_positive() && n.abs().gcd(d).is_one() && (!n.is_zero() || d.is_one())
    }

    /// Correctly rounded scientific notation with `digits` significant digits,
    /// e.g. `5.00000000000000e-1` for 1/2 at 15 digits. Ties round away from zero.
    pub fn to_sci(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return format!("{}e0", pad_mantissa("0", digits));
        }
        let sign = if self.0.is_negative() { "-" } else { "" };
        let num = self.0.numer().abs();
        let den = self.0.denom().clone();

        // Decimal exponent e with 10^e <= |q| < 10^(e+1).
        let mut exp = num.to_string().len() as i64 - den.to_string().len() as i64;
        let ten = BigInt::from(10u8);
        let scaled_cmp = |e: i64| -> std::cmp::Ordering {
            // compare |q| against 10^e
            if e >= 0 {
                num.cmp(&(&den * ten.pow(e as u32)))
            } else {
                (&num * ten.pow((-e) as u32)).cmp(&den)
            }
        };
        while scaled_cmp(exp) == std::cmp::Ordering::Less {
            exp -= 1;
        }
        while scaled_cmp(exp + 1) != std::cmp::Ordering::Less {
            exp += 1;
        }

        let shift = digits as i64 - 1 - exp;
        let (n, d) = if shift >= 0 {
            (&num * ten.pow(shift as u32), den)
        } else {
            (num, den * ten.pow((-shift) as u32))
        };
        let (q, r) = n.div_rem(&d);
        let mut mantissa = if (&r * 2u8) >= d { q + 1u8 } else { q };
        if mantissa == ten.pow(digits as u32) {
            mantissa /= 10u8;
            exp += 1;
        }
        format!("{sign}{}e{exp}", pad_mantissa(&mantissa.to_string(), digits))
    }
}

fn pad_mantissa(raw: &str, digits: usize) -> String {
    let mut s = String::with_capacity(digits + 1);
    s.push_str(&raw[..1]);
    if digits > 1 {
        s.push('.');
        s.push_str(&raw[1..]);
        for _ in raw.len()..digits {
            s.push('0');
        }
    }
    s
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    /// `num/den`, or just `num` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactRational({self})")
    }
}

impl std::str::FromStr for ExactRational {
    type Err = crate::Error;

    /// Accepts `n` or `n/d` with decimal integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || crate::error::invalid(format!("not a rational: {s:?}"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Self::new(n, d).ok_or_else(bad)
    }
}

impl Neg for ExactRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $assign_trait<&'a ExactRational> for ExactRational {
            fn $assign_method(&mut self, rhs: &'a ExactRational) {
                self.0 = (&self.0).$method(&rhs.0);
            }
        }
        impl $assign_trait for ExactRational {
            fn $assign_method(&mut self, rhs: ExactRational) {
                self.0 = (&self.0).$method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Div for ExactRational {
    type Output = ExactRational;
    /// Panics on division by zero, like the integer types.
    fn div(self, rhs: ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "ExactRational division by zero");
        ExactRational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &'a ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "ExactRational division by zero");
        ExactRational(&self.0 / &rhs.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}
