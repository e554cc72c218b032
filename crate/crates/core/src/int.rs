//! Arbitrary precision integers with an inline fast path for values that fit
//! in an `i64`.
//!
//! Gröbner runs over ℤ produce a few huge coefficients and millions of tiny
//! ones; keeping the tiny ones off the heap matters more than anything else
//! here.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => match b.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *a != i64::MIN && *b != i64::MIN => {
                let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
                while b != 0 {
                    let r = a % b;
                    a = b;
                    b = r;
                }
                Int::from_big(BigInt::from(a))
            }
            _ => Int::from_big(self.to_big().gcd(&other.to_big())),
        }
    }

    pub fn lcm(&self, other: &Int) -> Int {
        if self.is_zero() || other.is_zero() {
            return Int::ZERO;
        }
        let g = self.gcd(other);
        (&self.div_exact(&g) * other).abs()
    }

    /// Extended gcd: returns `(g, s, t)` with `g = s*self + t*other`, `g >= 0`.
    pub fn ext_gcd(&self, other: &Int) -> (Int, Int, Int) {
        let e = self.to_big().extended_gcd(&other.to_big());
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        (Int::from_big(g), Int::from_big(s), Int::from_big(t))
    }

    /// Exponent of 2 in a nonzero integer.
    pub fn two_adic_valuation(&self) -> u32 {
        match self {
            Int::Small(v) if *v != 0 => v.trailing_zeros(),
            _ => self.to_big().trailing_zeros().unwrap_or(0) as u32,
        }
    }

    /// `self` with all factors 2 removed, sign kept.
    pub fn odd_part(&self) -> Int {
        if self.is_zero() {
            return Int::ZERO;
        }
        let k = self.two_adic_valuation();
        match self {
            Int::Small(v) => Int::Small(v >> k),
            Int::Big(b) => Int::from_big(&**b >> k as usize),
        }
    }

    pub fn pow2(k: u32) -> Int {
        if k < 62 {
            Int::Small(1 << k)
        } else {
            Int::from_big(BigInt::one() << k as usize)
        }
    }

    /// Division that is known to be exact.
    pub fn div_exact(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *b != 0 => match a.checked_div(*b) {
                Some(q) => Int::Small(q),
                None => Int::from_big(self.to_big() / other.to_big()),
            },
            _ => Int::from_big(self.to_big() / other.to_big()),
        }
    }

    /// Whether `other` divides `self` (`0` divides only `0`).
    pub fn is_divisible_by(&self, other: &Int) -> bool {
        if other.is_zero() {
            return self.is_zero();
        }
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => match a.checked_rem(*b) {
                Some(r) => r == 0,
                None => true,
            },
            _ => (self.to_big() % other.to_big()).is_zero(),
        }
    }

    /// `q` with `|self − q·b|` at most `|b|/2`.
    pub fn div_round(&self, b: &Int) -> Int {
        let bb = b.abs();
        let half = bb.div_mod_floor(&Int::Small(2)).0;
        let (q, _) = (self + &half).div_mod_floor(&bb);
        if b.is_negative() {
            -&q
        } else {
            q
        }
    }

    /// Floor division with nonnegative remainder for positive divisor.
    pub fn div_mod_floor(&self, other: &Int) -> (Int, Int) {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *b != 0 && !(*a == i64::MIN && *b == -1) => {
                let (q, r) = (a.div_euclid(*b), a.rem_euclid(*b));
                (Int::Small(q), Int::Small(r))
            }
            _ => {
                let (q, r) = self.to_big().div_mod_floor(&other.to_big());
                (Int::from_big(q), Int::from_big(r))
            }
        }
    }

    pub fn rem_euclid_u64(&self, m: u64) -> u64 {
        match self {
            Int::Small(v) => (*v as i128).rem_euclid(m as i128) as u64,
            Int::Big(b) => {
                let r = b.mod_floor(&BigInt::from(m));
                r.to_u64().expect("remainder fits")
            }
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        Int::from_big(BigInt::from(v))
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int::from_big(v)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a == b,
            (Int::Big(a), Int::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl std::hash::Hash for Int {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Int::Small(v) => v.hash(state),
            Int::Big(b) => b.hash(state),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Int> for &'a Int {
    type Output = Int;
    fn add(self, rhs: &'a Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() + rhs.to_big())
    }
}

impl<'a> Sub<&'a Int> for &'a Int {
    type Output = Int;
    fn sub(self, rhs: &'a Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() - rhs.to_big())
    }
}

impl<'a> Mul<&'a Int> for &'a Int {
    type Output = Int;
    fn mul(self, rhs: &'a Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_mul(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Add for Int {
    type Output = Int;
    fn add(self, rhs: Int) -> Int {
        &self + &rhs
    }
}

impl Sub for Int {
    type Output = Int;
    fn sub(self, rhs: Int) -> Int {
        &self - &rhs
    }
}

impl Mul for Int {
    type Output = Int;
    fn mul(self, rhs: Int) -> Int {
        &self * &rhs
    }
}

impl AddAssign<&Int> for Int {
    fn add_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                *self = Int::Small(s);
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Int> for Int {
    fn sub_assign(&mut self, rhs: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                *self = Int::Small(s);
                return;
            }
        }
        *self = &*self - rhs;
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Int {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        Ok(Int::from_big(s.parse::<BigInt>()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        assert_eq!((&b - &Int::ONE), a);
        let sq = &a * &a;
        assert_eq!(sq.div_exact(&a), a);
        assert_eq!((-&Int::from(i64::MIN)).to_string(), "9223372036854775808");
    }

    #[test]
    fn gcd_and_bezout() {
        let (g, s, t) = Int::from(12).ext_gcd(&Int::from(-18));
        assert_eq!(g, Int::from(6));
        assert_eq!(&(&s * &Int::from(12)) + &(&t * &Int::from(-18)), g);
        assert_eq!(Int::from(4).lcm(&Int::from(6)), Int::from(12));
        assert!(Int::from(10).is_divisible_by(&Int::from(-5)));
        assert!(!Int::from(10).is_divisible_by(&Int::from(3)));
    }
}
