use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Coeff;

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    /// Exact `p`-th root when `self` is a perfect `p`-th power of a rational.
    pub fn exact_root(&self, p: u32) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.signum() < 0 && p.is_multiple_of(2) {
            return None;
        }
        let n = self.numer().abs().nth_root(p);
        let d = self.denom().nth_root(p);
        let sign = if self.signum() < 0 { -1 } else { 1 };
        let cand = Rational::new(n * sign, d);
        (cand.pow(p) == *self).then_some(cand)
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Rational(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational(&self.0 * &o.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn cmp_canonical(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn nth_root(&self, m: u32) -> Option<Self> {
        self.exact_root(m)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|e| format!("{e}"))?;
                let d: BigInt = d.trim().parse().map_err(|e| format!("{e}"))?;
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rational::new(n, d))
            }
            None => Ok(Rational::from_int(s.parse::<BigInt>().map_err(|e| format!("{e}"))?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_halves_and_thirds() {
        let a = Rational::new(1, 2);
        let b = Rational::new(1, 3);
        assert_eq!(a.add(&b), Rational::new(5, 6));
        assert_eq!(a.add(&b).to_string(), "5/6");
    }

    #[test]
    fn canonical_sign_and_gcd() {
        let r = Rational::new(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert!(r.sub(&r).is_zero());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Rational::zero().try_inv().is_none());
        assert_eq!(Rational::from(-4).try_inv().unwrap(), Rational::new(-1, 4));
    }

    #[test]
    fn roots() {
        assert_eq!(Rational::new(9, 4).exact_root(2), Some(Rational::new(3, 2)));
        assert_eq!(Rational::new(-8, 27).exact_root(3), Some(Rational::new(-2, 3)));
        assert_eq!(Rational::from(2).exact_root(2), None);
        assert_eq!(Rational::from(-1).exact_root(2), None);
    }

    #[test]
    fn parse_roundtrip() {
        let r: Rational = "-4/3".parse().unwrap();
        assert_eq!(r.to_string(), "-4/3");
    }
}
