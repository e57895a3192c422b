//! Arbitrary precision integers with an inline fast path.
//!
//! Values that fit in an `i64` are stored inline; everything else spills to a
//! boxed [`BigInt`]. All operations are exact and renormalize their result, so
//! two equal values always have the same representation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Integer {
    Small(i64),
    Large(Box<BigInt>),
}

impl Integer {
    pub const ZERO: Integer = Integer::Small(0);
    pub const ONE: Integer = Integer::Small(1);

    fn from_big(b: BigInt) -> Integer {
        match b.to_i64() {
            Some(v) => Integer::Small(v),
            None => Integer::Large(Box::new(b)),
        }
    }

    fn from_i128(v: i128) -> Integer {
        match i64::try_from(v) {
            Ok(v) => Integer::Small(v),
            Err(_) => Integer::Large(Box::new(BigInt::from(v))),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Integer::Small(v) => BigInt::from(*v),
            Integer::Large(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Integer::Small(v) => Some(*v),
            Integer::Large(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Integer::Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Integer::Small(1))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Integer::Small(1) | Integer::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Integer::Small(v) => *v < 0,
            Integer::Large(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Integer::Small(v) => v.signum() as i32,
            Integer::Large(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Integer {
        match self {
            Integer::Small(v) => match v.checked_abs() {
                Some(a) => Integer::Small(a),
                None => Integer::from_i128((*v as i128).abs()),
            },
            Integer::Large(b) => Integer::from_big(b.abs()),
        }
    }

    /// Compares absolute values.
    pub fn cmp_abs(&self, other: &Integer) -> Ordering {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a.unsigned_abs().cmp(&b.unsigned_abs()),
            _ => self.to_big().abs().cmp(&other.to_big().abs()),
        }
    }

    /// Floor division and the matching non-negative-or-same-sign remainder.
    pub fn div_mod_floor(&self, other: &Integer) -> (Integer, Integer) {
        assert!(!other.is_zero(), "division by zero");
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => {
                if let (Some(_), Some(_)) = (a.checked_div(*b), a.checked_rem(*b)) {
                    let (q, r) = a.div_mod_floor(b);
                    (Integer::Small(q), Integer::Small(r))
                } else {
                    let (q, r) = (*a as i128).div_mod_floor(&(*b as i128));
                    (Integer::from_i128(q), Integer::from_i128(r))
                }
            }
            _ => {
                let (q, r) = self.to_big().div_mod_floor(&other.to_big());
                (Integer::from_big(q), Integer::from_big(r))
            }
        }
    }

    /// Quotient rounded to the nearest integer, used to keep reduced entries small.
    pub fn div_round(&self, other: &Integer) -> Integer {
        let (q, r) = self.div_mod_floor(other);
        let twice = &r + &r;
        // The floor remainder has the sign of `other`; stepping the quotient up
        // moves it to the other side of zero.
        if twice.cmp_abs(other) == Ordering::Greater {
            q + Integer::ONE
        } else {
            q
        }
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Integer) -> Option<Integer> {
        if other.is_zero() {
            return if self.is_zero() { Some(Integer::ZERO) } else { None };
        }
        let (q, r) = self.div_mod_floor(other);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Integer) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_mod_floor(self).1.is_zero()
    }

    /// Non-negative greatest common divisor.
    pub fn gcd(&self, other: &Integer) -> Integer {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => {
                let g = (a.unsigned_abs()).gcd(&b.unsigned_abs());
                match i64::try_from(g) {
                    Ok(g) => Integer::Small(g),
                    Err(_) => Integer::from_big(BigInt::from(g)),
                }
            }
            _ => Integer::from_big(self.to_big().gcd(&other.to_big())),
        }
    }

    pub fn lcm(&self, other: &Integer) -> Integer {
        if self.is_zero() || other.is_zero() {
            return Integer::ZERO;
        }
        let g = self.gcd(other);
        (self.abs().div_exact(&g).expect("gcd divides")) * other.abs()
    }

    /// Extended gcd: returns `(g, x, y)` with `x*self + y*other = g >= 0`.
    pub fn ext_gcd(&self, other: &Integer) -> (Integer, Integer, Integer) {
        let (mut old_r, mut r) = (self.clone(), other.clone());
        let (mut old_s, mut s) = (Integer::ONE, Integer::ZERO);
        let (mut old_t, mut t) = (Integer::ZERO, Integer::ONE);
        while !r.is_zero() {
            let (q, rem) = old_r.div_mod_floor(&r);
            old_r = std::mem::replace(&mut r, rem);
            let ns = &old_s - &(&q * &s);
            old_s = std::mem::replace(&mut s, ns);
            let nt = &old_t - &(&q * &t);
            old_t = std::mem::replace(&mut t, nt);
        }
        if old_r.is_negative() {
            (-old_r, -old_s, -old_t)
        } else {
            (old_r, old_s, old_t)
        }
    }

    pub fn pow(&self, exp: u32) -> Integer {
        let mut acc = Integer::ONE;
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl Default for Integer {
    fn default() -> Self {
        Integer::ZERO
    }
}

impl From<i64> for Integer {
    fn from(v: i64) -> Self {
        Integer::Small(v)
    }
}

impl From<i32> for Integer {
    fn from(v: i32) -> Self {
        Integer::Small(v as i64)
    }
}

impl From<usize> for Integer {
    fn from(v: usize) -> Self {
        match i64::try_from(v) {
            Ok(v) => Integer::Small(v),
            Err(_) => Integer::from_big(BigInt::from(v)),
        }
    }
}

impl From<BigInt> for Integer {
    fn from(b: BigInt) -> Self {
        Integer::from_big(b)
    }
}

impl Ord for Integer {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Integer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Integer> for &'a Integer {
    type Output = Integer;
    fn add(self, rhs: &'a Integer) -> Integer {
        match (self, rhs) {
            (Integer::Small(a), Integer::Small(b)) => match a.checked_add(*b) {
                Some(v) => Integer::Small(v),
                None => Integer::from_i128(*a as i128 + *b as i128),
            },
            _ => Integer::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Integer> for &'a Integer {
    type Output = Integer;
    fn sub(self, rhs: &'a Integer) -> Integer {
        match (self, rhs) {
            (Integer::Small(a), Integer::Small(b)) => match a.checked_sub(*b) {
                Some(v) => Integer::Small(v),
                None => Integer::from_i128(*a as i128 - *b as i128),
            },
            _ => Integer::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Integer> for &'a Integer {
    type Output = Integer;
    fn mul(self, rhs: &'a Integer) -> Integer {
        match (self, rhs) {
            (Integer::Small(a), Integer::Small(b)) => match a.checked_mul(*b) {
                Some(v) => Integer::Small(v),
                None => Integer::from_i128(*a as i128 * *b as i128),
            },
            _ => Integer::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        match self {
            Integer::Small(a) => match a.checked_neg() {
                Some(v) => Integer::Small(v),
                None => Integer::from_i128(-(*a as i128)),
            },
            Integer::Large(b) => Integer::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Integer> for Integer {
            type Output = Integer;
            fn $m(self, rhs: Integer) -> Integer {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Integer> for Integer {
            type Output = Integer;
            fn $m(self, rhs: &'a Integer) -> Integer {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Integer> for &'a Integer {
            type Output = Integer;
            fn $m(self, rhs: Integer) -> Integer {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Integer> for Integer {
    fn add_assign(&mut self, rhs: &Integer) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Integer> for Integer {
    fn sub_assign(&mut self, rhs: &Integer) {
        *self = &*self - rhs;
    }
}

impl Zero for Integer {
    fn zero() -> Self {
        Integer::ZERO
    }
    fn is_zero(&self) -> bool {
        Integer::is_zero(self)
    }
}

impl One for Integer {
    fn one() -> Self {
        Integer::ONE
    }
}

impl std::iter::Sum for Integer {
    fn sum<I: Iterator<Item = Integer>>(iter: I) -> Integer {
        iter.fold(Integer::ZERO, |a, b| a + b)
    }
}

impl std::iter::Product for Integer {
    fn product<I: Iterator<Item = Integer>>(iter: I) -> Integer {
        iter.fold(Integer::ONE, |a, b| a * b)
    }
}

impl fmt::Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integer::Small(v) => write!(f, "{v}"),
            Integer::Large(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Integer {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Integer::from_big(s.trim().parse::<BigInt>()?))
    }
}

// Small values serialize as JSON numbers, large ones as decimal strings.
impl Serialize for Integer {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Integer::Small(v) => serializer.serialize_i64(*v),
            Integer::Large(b) => serializer.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Integer {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct IntegerVisitor;
        impl Visitor<'_> for IntegerVisitor {
            type Value = Integer;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Integer, E> {
                Ok(Integer::Small(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Integer, E> {
                Ok(Integer::from_big(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Integer, E> {
                v.parse().map_err(|_| E::custom(format!("invalid integer {v:?}")))
            }
        }
        deserializer.deserialize_any(IntegerVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Integer::from(i64::MAX) + Integer::ONE;
        assert!(matches!(big, Integer::Large(_)));
        let back = &big - &Integer::ONE;
        assert_eq!(back, Integer::Small(i64::MAX));
        let sq = &big * &big;
        assert_eq!(sq.to_big(), BigInt::from(i64::MAX as i128 + 1).pow(2));
        assert_eq!(-Integer::from(i64::MIN), big);
    }

    #[test]
    fn floor_division_and_gcd() {
        let (q, r) = Integer::from(-7).div_mod_floor(&Integer::from(2));
        assert_eq!((q, r), (Integer::from(-4), Integer::from(1)));
        assert_eq!(Integer::from(-12).gcd(&Integer::from(18)), Integer::from(6));
        let (g, x, y) = Integer::from(240).ext_gcd(&Integer::from(46));
        assert_eq!(g, Integer::from(2));
        assert_eq!(x * Integer::from(240) + y * Integer::from(46), g);
        assert_eq!(Integer::from(7).div_round(&Integer::from(2)).cmp_abs(&Integer::from(4)), Ordering::Less);
        assert_eq!(Integer::from(4).lcm(&Integer::from(6)), Integer::from(12));
    }

    #[test]
    fn rounded_remainders_are_at_most_half() {
        for a in -30i64..=30 {
            for b in (-9i64..=9).filter(|&b| b != 0) {
                let q = Integer::from(a).div_round(&Integer::from(b)).to_i64().unwrap();
                let r = a - q * b;
                assert!(2 * r.abs() <= b.abs(), "{a} / {b} gave {q}");
            }
        }
    }

    #[test]
    fn serde_roundtrip_large() {
        let v = Integer::from(i64::MAX) * Integer::from(10);
        let s = serde_json::to_string(&v).unwrap();
        let back: Integer = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);
        let small: Integer = serde_json::from_str("-5").unwrap();
        assert_eq!(small, Integer::from(-5));
    }
}
