use std::fmt;

use crate::error::{Error, Result};
use crate::int::Int;

/// The numerical ring polynomial coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    /// ℤ/nℤ with `n >= 2`.
    IntegersMod(u64),
}

impl CoefficientRing {
    pub fn integers_mod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(CoefficientRing::IntegersMod(n))
    }

    pub fn is_field(&self) -> bool {
        match self {
            CoefficientRing::Integers => false,
            CoefficientRing::Rationals => true,
            CoefficientRing::IntegersMod(n) => is_prime(*n),
        }
    }

    pub fn zero(&self) -> Coeff {
        Coeff::ZERO
    }

    pub fn one(&self) -> Coeff {
        self.from_int(Int::ONE)
    }

    pub fn from_int(&self, v: Int) -> Coeff {
        match self {
            CoefficientRing::IntegersMod(n) => Coeff::int(Int::from(v.rem_euclid_u64(*n))),
            _ => Coeff::int(v),
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_int(Int::from(v))
    }

    /// Build `num/den` in this ring. Over ℤ the division must be exact; over
    /// ℤ/n the denominator must be invertible.
    pub fn from_fraction(&self, num: Int, den: Int) -> Result<Coeff> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            CoefficientRing::Integers => {
                if num.is_divisible_by(&den) {
                    Ok(Coeff::int(num.div_exact(&den)))
                } else {
                    Err(Error::NotInRing(format!("{num}/{den}")))
                }
            }
            CoefficientRing::Rationals => Ok(Coeff::normalized_fraction(num, den)),
            CoefficientRing::IntegersMod(_) => {
                let d = self.from_int(den);
                let inv = self.inverse(&d).ok_or_else(|| Error::NotInRing(format!("1/{}", d)))?;
                Ok(self.mul(&self.from_int(num), &inv))
            }
        }
    }

    #[inline]
    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            CoefficientRing::Integers => Coeff::int(&a.num + &b.num),
            CoefficientRing::IntegersMod(n) => {
                let s = (&a.num + &b.num).rem_euclid_u64(*n);
                Coeff::int(Int::from(s))
            }
            CoefficientRing::Rationals => {
                if a.den.is_one() && b.den.is_one() {
                    return Coeff::int(&a.num + &b.num);
                }
                let num = &(&a.num * &b.den) + &(&b.num * &a.den);
                Coeff::normalized_fraction(num, &a.den * &b.den)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: &Coeff) -> Coeff {
        match self {
            CoefficientRing::IntegersMod(n) => {
                let v = (-&a.num).rem_euclid_u64(*n);
                Coeff::int(Int::from(v))
            }
            _ => Coeff { num: -&a.num, den: a.den.clone() },
        }
    }

    #[inline]
    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            CoefficientRing::Integers => Coeff::int(&a.num * &b.num),
            CoefficientRing::IntegersMod(n) => {
                let v = (&a.num * &b.num).rem_euclid_u64(*n);
                Coeff::int(Int::from(v))
            }
            CoefficientRing::Rationals => {
                if a.den.is_one() && b.den.is_one() {
                    return Coeff::int(&a.num * &b.num);
                }
                Coeff::normalized_fraction(&a.num * &b.num, &a.den * &b.den)
            }
        }
    }

    /// Multiplicative inverse, if the element is a unit.
    pub fn inverse(&self, a: &Coeff) -> Option<Coeff> {
        if a.is_zero() {
            return None;
        }
        match self {
            CoefficientRing::Integers => {
                if a.num.is_one() || a.num == Int::from(-1) {
                    Some(a.clone())
                } else {
                    None
                }
            }
            CoefficientRing::Rationals => Some(Coeff::normalized_fraction(a.den.clone(), a.num.clone())),
            CoefficientRing::IntegersMod(n) => {
                let (g, s, _) = a.num.ext_gcd(&Int::from(*n));
                if g.is_one() {
                    Some(self.from_int(s))
                } else {
                    None
                }
            }
        }
    }

    /// Whether `b` divides `a` in this ring.
    pub fn divides(&self, b: &Coeff, a: &Coeff) -> bool {
        match self {
            CoefficientRing::Integers => a.num.is_divisible_by(&b.num),
            CoefficientRing::Rationals => !b.is_zero() || a.is_zero(),
            CoefficientRing::IntegersMod(_) => self.inverse(b).is_some() || a.is_zero(),
        }
    }

    /// `a / b`, assuming `divides(b, a)`.
    pub fn div_exact(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match self {
            CoefficientRing::Integers => Coeff::int(a.num.div_exact(&b.num)),
            _ => self.mul(a, &self.inverse(b).expect("divisor is a unit")),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::IntegersMod(n) => write!(f, "Z{n}"),
        }
    }
}

impl std::str::FromStr for CoefficientRing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "ZZ" => Ok(CoefficientRing::Integers),
            "Q" | "QQ" => Ok(CoefficientRing::Rationals),
            _ => {
                let digits = s.strip_prefix("Z/").or_else(|| s.strip_prefix('Z'));
                match digits.and_then(|d| d.parse::<u64>().ok()) {
                    Some(n) => CoefficientRing::integers_mod(n),
                    None => Err(Error::Parse(format!("unknown coefficient ring `{s}`"))),
                }
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A coefficient value. Over ℤ and ℤ/n the denominator is always 1; over ℚ
/// the fraction is kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub(crate) num: Int,
    pub(crate) den: Int,
}

impl Coeff {
    pub const ZERO: Coeff = Coeff { num: Int::ZERO, den: Int::ONE };

    #[inline]
    pub fn int(num: Int) -> Coeff {
        Coeff { num, den: Int::ONE }
    }

    fn normalized_fraction(num: Int, den: Int) -> Coeff {
        if num.is_zero() {
            return Coeff::ZERO;
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.div_exact(&g), den.div_exact(&g));
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Coeff { num, den }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn numerator(&self) -> &Int {
        &self.num
    }

    pub fn denominator(&self) -> &Int {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = CoefficientRing::Rationals;
        let a = q.from_fraction(Int::from(2), Int::from(-4)).unwrap();
        assert_eq!(a.to_string(), "-1/2");
        let b = q.add(&a, &q.from_fraction(Int::from(1), Int::from(2)).unwrap());
        assert!(b.is_zero());
        assert_eq!(b.den, Int::ONE);
    }

    #[test]
    fn modular_arithmetic() {
        let r = CoefficientRing::integers_mod(7).unwrap();
        let three = r.from_i64(3);
        let inv = r.inverse(&three).unwrap();
        assert!(r.mul(&three, &inv).is_one());
        assert_eq!(r.from_i64(-1).to_string(), "6");
        assert!(CoefficientRing::integers_mod(1).is_err());
        assert!(!CoefficientRing::IntegersMod(6).is_field());
    }

    #[test]
    fn integer_division_must_be_exact() {
        let z = CoefficientRing::Integers;
        assert!(z.from_fraction(Int::from(3), Int::from(2)).is_err());
        assert_eq!(z.from_fraction(Int::from(6), Int::from(-2)).unwrap().to_string(), "-3");
    }
}
