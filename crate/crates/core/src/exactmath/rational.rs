//! Exact rational scalars.
//!
//! Values that fit in a pair of `i64` are kept inline and combined with
//! `i128` intermediates; anything larger falls back to [`BigRational`].
//! The representation is canonical (lowest terms, positive denominator,
//! inline whenever it fits), so structural equality and hashing agree with
//! numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `den > 0`, `gcd(num, den) = 1`, and both magnitudes `<= i64::MAX`.
    Small { num: i64, den: i64 },
    /// Only used when the reduced value does not fit `Small`.
    Big(BigRational),
}

/// Arbitrary-precision fraction, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn fits(v: i128) -> bool {
    v >= -(i64::MAX as i128) && v <= i64::MAX as i128
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    pub fn from_integer(v: i64) -> Self {
        if v == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(v)));
        }
        Rational(Repr::Small { num: v, den: 1 })
    }

    /// `num / den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigs(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if fits(n) && fits(d) {
            Rational(Repr::Small {
                num: n as i64,
                den: d as i64,
            })
        } else {
            Rational(Repr::Big(BigRational::new_raw(
                BigInt::from(n),
                BigInt::from(d),
            )))
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces; demote when it fits.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small { num: n, den: d });
            }
        }
        Rational(Repr::Big(r))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                Self::from_i128(*den as i128, *num as i128)
            }
            Repr::Big(r) => Self::from_big(r.recip()),
        }
    }

    /// Magnitude of the numerator as a comparison key for pivot selection,
    /// together with the denominator magnitude.
    pub(crate) fn pivot_key(&self) -> (BigInt, BigInt) {
        (self.numer().abs(), self.denom())
    }

    pub(crate) fn small_parts(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small { num, den } => Some((num, den)),
            Repr::Big(_) => None,
        }
    }

    /// `self - a * b`, the elimination kernel.
    pub fn sub_mul(&self, a: &Rational, b: &Rational) -> Rational {
        if a.is_zero() || b.is_zero() {
            return self.clone();
        }
        self - &(a * b)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Self::from_integer(v as i64)
    }
}

impl From<usize> for Rational {
    fn from(v: usize) -> Self {
        match i64::try_from(v) {
            Ok(v) => Self::from_integer(v),
            Err(_) => Self::from_big(BigRational::from_integer(BigInt::from(v))),
        }
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(v))
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Self::from_big(v)
    }
}

impl From<&Rational> for BigRational {
    fn from(v: &Rational) -> Self {
        v.to_big()
    }
}

fn add_impl(a: &Rational, b: &Rational) -> Rational {
    if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) = (&a.0, &b.0) {
        let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
        if ad == bd {
            return Rational::from_i128(an + bn, ad);
        }
        if let Some(n) = (an * bd).checked_add(bn * ad) {
            return Rational::from_i128(n, ad * bd);
        }
    }
    Rational::from_big(a.to_big() + b.to_big())
}

fn mul_impl(a: &Rational, b: &Rational) -> Rational {
    if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) = (&a.0, &b.0) {
        // Cross-reduce first so the i128 products stay comfortably in range.
        let g1 = gcd_u128(an.unsigned_abs() as u128, bd.unsigned_abs() as u128).max(1) as i128;
        let g2 = gcd_u128(bn.unsigned_abs() as u128, ad.unsigned_abs() as u128).max(1) as i128;
        let n = (*an as i128 / g1) * (*bn as i128 / g2);
        let d = (*ad as i128 / g2) * (*bd as i128 / g1);
        return Rational::from_i128(n, d);
    }
    Rational::from_big(a.to_big() * b.to_big())
}

fn neg_impl(a: &Rational) -> Rational {
    match &a.0 {
        Repr::Small { num, den } => Rational(Repr::Small {
            num: -*num,
            den: *den,
        }),
        Repr::Big(r) => Rational(Repr::Big(-r.clone())),
    }
}

fn div_impl(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero");
    mul_impl(a, &b.recip())
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $imp(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $imp(self, &rhs)
            }
        }
    };
}

fn sub_impl(a: &Rational, b: &Rational) -> Rational {
    add_impl(a, &neg_impl(b))
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

macro_rules! forward_assign {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Rational> for Rational {
            fn $method(&mut self, rhs: &Rational) {
                *self = $imp(self, rhs);
            }
        }
        impl $trait<Rational> for Rational {
            fn $method(&mut self, rhs: Rational) {
                *self = $imp(self, &rhs);
            }
        }
    };
}

forward_assign!(AddAssign, add_assign, add_impl);
forward_assign!(SubAssign, sub_assign, sub_impl);
forward_assign!(MulAssign, mul_assign, mul_impl);
forward_assign!(DivAssign, div_assign, div_impl);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_impl(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_impl(self)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) =
            (&self.0, &other.0)
        {
            return (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128));
        }
        self.to_big().cmp(&other.to_big())
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `"p"` or `"p/q"` with optional sign on `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() || d.is_negative() {
            return Err(err());
        }
        Ok(Rational::from_bigs(n, d))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_str(RationalVisitor)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}
