//! Dyadic rationals `n / 2^k` in canonical form, and the exact [`Rational`]
//! type used where dyadics are not closed (orbital endpoints, evaluation at
//! arbitrary points).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// A dyadic rational `numer / 2^exp`.
///
/// Canonical form: either `exp == 0` (an integer, zero included) or `numer`
/// is odd. All constructors and arithmetic preserve this, so structural
/// equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numer: BigInt,
    exp: u64,
}

impl Dyadic {
    /// Builds `numer / 2^exp` and reduces it to canonical form.
    pub fn new(numer: impl Into<BigInt>, exp: u64) -> Self {
        let mut numer = numer.into();
        let mut exp = exp;
        if numer.is_zero() {
            return Dyadic { numer, exp: 0 };
        }
        while exp > 0 && (&numer % 2u8).is_zero() {
            numer /= 2;
            exp -= 1;
        }
        Dyadic { numer, exp }
    }

    pub fn zero() -> Self {
        Dyadic { numer: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { numer: BigInt::one(), exp: 0 }
    }

    /// `2^e` for any integer `e`, negative exponents included.
    pub fn pow2(e: i64) -> Self {
        if e >= 0 {
            Dyadic { numer: BigInt::one() << e as u64, exp: 0 }
        } else {
            Dyadic { numer: BigInt::one(), exp: e.unsigned_abs() }
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    /// The canonical exponent `k` of the denominator `2^k`.
    pub fn exp(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numer.is_positive()
    }

    /// Multiplies by `2^e` exactly.
    pub fn mul_pow2(&self, e: i64) -> Self {
        if e >= 0 {
            Dyadic::new(&self.numer << e as u64, self.exp)
        } else {
            Dyadic::new(self.numer.clone(), self.exp + e.unsigned_abs())
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.numer.clone(), BigInt::one() << self.exp)
    }

    /// Converts back from a rational whose denominator is a power of two.
    pub fn try_from_rational(r: &Rational) -> Option<Self> {
        let denom = r.denom();
        if !is_power_of_two(denom) {
            return None;
        }
        let exp = denom.trailing_zeros().unwrap_or(0);
        Some(Dyadic { numer: r.numer().clone(), exp })
    }
}

fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && {
        let tz = n.trailing_zeros().unwrap_or(0);
        (n >> tz).is_one()
    }
}

/// Error from [`slope_exponent`]: the ratio is not an integral power of two.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("slope {dy}/{dx} is not an exact power of two")]
pub struct NotPowerOfTwo {
    pub dx: Dyadic,
    pub dy: Dyadic,
}

/// The exact exponent `e` with `dy / dx = 2^e`, for positive `dx`, `dy`.
///
/// Errors when either argument is non-positive or the ratio has an odd
/// factor.
pub fn slope_exponent(dx: &Dyadic, dy: &Dyadic) -> Result<i64, NotPowerOfTwo> {
    let err = || NotPowerOfTwo { dx: dx.clone(), dy: dy.clone() };
    if !dx.is_positive() || !dy.is_positive() {
        return Err(err());
    }
    let tz_x = dx.numer.trailing_zeros().expect("positive numerator");
    let tz_y = dy.numer.trailing_zeros().expect("positive numerator");
    if (&dx.numer >> tz_x) != (&dy.numer >> tz_y) {
        return Err(err());
    }
    // dy/dx = 2^(tz_y - exp_y) / 2^(tz_x - exp_x) once odd parts agree.
    let e = (tz_y as i128 - dy.exp as i128) - (tz_x as i128 - dx.exp as i128);
    Ok(e as i64)
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, BigInt::one() << self.exp)
        }
    }
}

/// Error from parsing a [`Dyadic`] or [`Rational`] out of `p/q` text.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NumberParseError {
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("denominator in `{0}` must be positive")]
    DenominatorNotPositive(String),
    #[error("denominator in `{0}` is not a power of two")]
    DenominatorNotPowerOfTwo(String),
}

fn split_fraction(s: &str) -> Result<(BigInt, Option<BigInt>), NumberParseError> {
    let malformed = || NumberParseError::Malformed(s.to_owned());
    let mut parts = s.splitn(2, '/');
    let numer_part = parts.next().ok_or_else(malformed)?.trim();
    let numer = BigInt::from_str(numer_part).map_err(|_| malformed())?;
    match parts.next() {
        None => Ok((numer, None)),
        Some(denom_part) => {
            let denom = BigInt::from_str(denom_part.trim()).map_err(|_| malformed())?;
            if !denom.is_positive() {
                return Err(NumberParseError::DenominatorNotPositive(s.to_owned()));
            }
            Ok((numer, Some(denom)))
        }
    }
}

impl FromStr for Dyadic {
    type Err = NumberParseError;

    /// Parses `p` or `p/q` where `q` is a positive power of two.
    fn from_str(s: &str) -> Result<Self, NumberParseError> {
        let (numer, denom) = split_fraction(s.trim())?;
        match denom {
            None => Ok(Dyadic::new(numer, 0)),
            Some(d) => {
                if !is_power_of_two(&d) {
                    return Err(NumberParseError::DenominatorNotPowerOfTwo(s.to_owned()));
                }
                let exp = d.trailing_zeros().unwrap_or(0);
                Ok(Dyadic::new(numer, exp))
            }
        }
    }
}

/// Parses `p` or `p/q` with any positive denominator `q` as an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumberParseError> {
    let (numer, denom) = split_fraction(s.trim())?;
    Ok(match denom {
        None => Rational::from_integer(numer),
        Some(d) => Rational::new(numer, d),
    })
}

/// Renders a rational as `p/q` text (or bare `p` for integers).
pub fn display_rational(r: &Rational) -> String {
    r.to_string()
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic { numer: BigInt::from(n), exp: 0 }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // a/2^j vs b/2^k  <=>  a*2^(m-j) vs b*2^(m-k) with m = max(j, k).
        let m = self.exp.max(other.exp);
        let lhs = &self.numer << (m - self.exp);
        let rhs = &other.numer << (m - other.exp);
        lhs.cmp(&rhs)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let m = self.exp.max(rhs.exp);
        let numer = (&self.numer << (m - self.exp)) + (&rhs.numer << (m - rhs.exp));
        Dyadic::new(numer, m)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let m = self.exp.max(rhs.exp);
        let numer = (&self.numer << (m - self.exp)) - (&rhs.numer << (m - rhs.exp));
        Dyadic::new(numer, m)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numer * &rhs.numer, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic { numer: -&self.numer, exp: self.exp }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}
