use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Coeff, Field, Rational};
use crate::error::{Error, Result};
use crate::series::Series;

/// Prime for the modular divisibility filter.
const MOD_P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    // Mersenne fold
    let x = a as u128 * b as u128;
    let r = (x as u64 & MOD_P) + (x >> 61) as u64;
    let r = (r & MOD_P) + (r >> 61);
    if r >= MOD_P {
        r - MOD_P
    } else {
        r
    }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn rational_mod_p(c: &Rational) -> Option<u64> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let red = |x: &BigInt| match x.to_i64() {
        Some(v) => Some(v.rem_euclid(MOD_P as i64) as u64),
        None => x.mod_floor(&BigInt::from(MOD_P)).to_u64(),
    };
    let n = red(c.numer())?;
    let d = red(c.denom())?;
    if d == 1 {
        return Some(n);
    }
    (d != 0).then(|| mul_mod(n, pow_mod(d, MOD_P - 2)))
}

/// Sparse polynomial in the tau-block over the rationals.
///
/// Exponent vectors are stored with trailing zeros trimmed so that
/// polynomials in different numbers of indeterminates compare equal.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TauPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn trim_exp(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        let n = a.len().max(b.len());
        for i in 0..n {
            let (x, y) = (a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
            if x != y {
                return x.cmp(&y);
            }
        }
        Ordering::Equal
    })
}

impl TauPoly {
    pub fn zero() -> Self {
        TauPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = TauPoly::zero();
        p.push(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        TauPoly::constant(Rational::one())
    }

    /// The indeterminate `tau_i`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = TauPoly::zero();
        p.push(e, Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = TauPoly::zero();
        for (e, c) in terms {
            p.push(e, c);
        }
        p
    }

    fn push(&mut self, e: Vec<u32>, c: Rational) {
        let e = trim_exp(e);
        let v = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *v = v.add(&c);
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == TauPoly::one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.push(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        TauPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return TauPoly::zero();
        }
        TauPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.mul(s))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = TauPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                r.push(e, c1.mul(c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(TauPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, pt: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    let x = pt.get(i).cloned().unwrap_or_else(Rational::zero);
                    t = t.mul(&x.pow(*k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    /// Dense image mod [`MOD_P`] of a polynomial in at most one
    /// indeterminate, lowest degree first; `None` otherwise or when a
    /// denominator vanishes mod p.
    fn dense_mod_p(&self) -> Option<Vec<u64>> {
        let deg = self.terms.keys().map(|e| if e.len() > 1 { None } else { Some(e.first().copied().unwrap_or(0)) });
        let mut out = vec![0u64; deg.clone().try_fold(0, |m, d| d.map(|d| m.max(d)))? as usize + 1];
        for (e, c) in &self.terms {
            out[e.first().copied().unwrap_or(0) as usize] = rational_mod_p(c)?;
        }
        Some(out)
    }

    /// `false` only if `d` certainly does not divide `self` over Q: when both
    /// are p-integral and `d` is nonzero mod p, divisibility survives
    /// reduction mod p (Gauss's lemma over the localization at p).
    fn may_divide(&self, d: &Self) -> bool {
        let (Some(mut a), Some(mut b)) = (self.dense_mod_p(), d.dense_mod_p()) else {
            return true;
        };
        while b.last() == Some(&0) {
            b.pop();
        }
        let Some(&lc) = b.last() else {
            return true;
        };
        let inv = pow_mod(lc, MOD_P - 2);
        let db = b.len() - 1;
        while a.len() > db {
            let top = a.pop().unwrap();
            if top == 0 {
                continue;
            }
            let q = mul_mod(top, inv);
            let shift = a.len() - db;
            for (i, &bi) in b[..db].iter().enumerate() {
                let t = mul_mod(q, bi);
                a[shift + i] = (a[shift + i] + MOD_P - t) % MOD_P;
            }
        }
        a.iter().all(|&x| x == 0)
    }

    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if !self.may_divide(d) {
            return None;
        }
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = TauPoly::zero();
        while let Some((re, rc)) = rem.leading() {
            if re.len() < de.len() && de[re.len()..].iter().any(|&x| x > 0) {
                return None;
            }
            let mut e = Vec::with_capacity(re.len());
            for (i, &x) in re.iter().enumerate() {
                let y = de.get(i).copied().unwrap_or(0);
                if x < y {
                    return None;
                }
                e.push(x - y);
            }
            let c = rc.mul(&dc.inv());
            let t = TauPoly::from_terms([(e, c)]);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex(b, a));
        let mut out = String::new();
        for e in keys {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| {
                    let n = names.get(i).cloned().unwrap_or_else(|| format!("tau{i}"));
                    if *k == 1 {
                        n
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            let neg = c.signum() < 0;
            let a = c.abs();
            let term = if mono.is_empty() {
                a.to_string()
            } else if a.is_one() {
                mono.join("*")
            } else {
                format!("{a}*{}", mono.join("*"))
            };
            if out.is_empty() {
                out = if neg { format!("-{term}") } else { term };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        out
    }

    fn cmp_canonical(&self, o: &Self) -> Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = o.terms.iter().collect();
        a.len().cmp(&b.len()).then_with(|| a.cmp(&b))
    }
}

impl fmt::Debug for TauPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

/// Uniformly rational coefficient `b(tau) / c(tau)^k`.
///
/// The base `c` is shared between all coefficients of one series; combining
/// values with different bases moves both onto a common base (the larger
/// one when it is a multiple of the other, otherwise the product).
#[derive(Clone)]
pub struct UniRational {
    num: TauPoly,
    base: Arc<TauPoly>,
    power: u32,
    names: Arc<Vec<String>>,
}

impl UniRational {
    pub fn new(num: TauPoly, base: TauPoly, power: u32) -> Self {
        assert!(!base.is_zero(), "zero denominator base");
        UniRational { num, base: Arc::new(base), power, names: Arc::new(Vec::new()) }.normalize()
    }

    pub fn poly(num: TauPoly) -> Self {
        UniRational::new(num, TauPoly::one(), 0)
    }

    pub fn tau(i: usize) -> Self {
        UniRational::poly(TauPoly::var(i))
    }

    pub fn with_names(mut self, names: Arc<Vec<String>>) -> Self {
        self.names = names;
        self
    }

    pub fn numerator(&self) -> &TauPoly {
        &self.num
    }

    pub fn base(&self) -> &TauPoly {
        &self.base
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// Reduce the power while the base divides the numerator.
    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.power = 0;
            return self;
        }
        if self.base.is_one() {
            self.power = 0;
            return self;
        }
        while self.power > 0 {
            match self.num.exact_div(&self.base) {
                Some(q) => {
                    self.num = q;
                    self.power -= 1;
                }
                None => break,
            }
        }
        self
    }

    fn names_of(&self, o: &Self) -> Arc<Vec<String>> {
        if self.names.len() >= o.names.len() {
            self.names.clone()
        } else {
            o.names.clone()
        }
    }

    /// Rewrite on base `c = self.base * q` (same value).
    fn rebase(&self, c: &Arc<TauPoly>, q: &TauPoly) -> Self {
        UniRational {
            num: self.num.mul(&q.pow(self.power)),
            base: c.clone(),
            power: self.power,
            names: self.names.clone(),
        }
    }

    /// Move two values onto a common base.
    fn align(&self, o: &Self) -> (Self, Self) {
        if o.power == 0 || Arc::ptr_eq(&self.base, &o.base) || *self.base == *o.base {
            let mut b = o.clone();
            b.base = self.base.clone();
            return (self.clone(), b);
        }
        if self.power == 0 {
            let mut a = self.clone();
            a.base = o.base.clone();
            return (a, o.clone());
        }
        if let Some(q) = self.base.exact_div(&o.base) {
            return (self.clone(), o.rebase(&self.base, &q));
        }
        if let Some(q) = o.base.exact_div(&self.base) {
            return (self.rebase(&o.base, &q), o.clone());
        }
        let c = Arc::new(self.base.mul(&o.base));
        (self.rebase(&c, &o.base), o.rebase(&c, &self.base))
    }

    /// Same value with the numerator multiplied up to power `k >= self.power`.
    fn at_power(&self, k: u32) -> TauPoly {
        self.num.mul(&self.base.pow(k - self.power))
    }

    /// Extend the base to `base * b`, keeping the value.
    pub fn extend_base(&self, b: &TauPoly) -> Self {
        let c = Arc::new(self.base.mul(b));
        self.rebase(&c, b)
    }

    /// Evaluate at `tau_bar`.
    pub fn specialize(&self, tau_bar: &[Rational]) -> Result<Rational> {
        let c = self.base.eval(tau_bar);
        if c.is_zero() {
            return Err(Error::InadmissibleSpecialization(self.base.fmt_with(&self.names)));
        }
        Ok(self.num.eval(tau_bar).mul(&c.pow(self.power).inv()))
    }

    /// True if `c(tau_bar) != 0`.
    pub fn admissible(&self, tau_bar: &[Rational]) -> bool {
        !self.base.eval(tau_bar).is_zero()
    }
}

impl PartialEq for UniRational {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = self.align(o);
        let k = a.power.max(b.power);
        a.at_power(k) == b.at_power(k)
    }
}

impl Coeff for UniRational {
    fn zero() -> Self {
        UniRational::poly(TauPoly::zero())
    }
    fn one() -> Self {
        UniRational::poly(TauPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let (a, b) = self.align(o);
        let k = a.power.max(b.power);
        UniRational { num: a.at_power(k).add(&b.at_power(k)), base: a.base, power: k, names: self.names_of(o) }
            .normalize()
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.align(o);
        UniRational { num: a.num.mul(&b.num), base: a.base, power: a.power + b.power, names: self.names_of(o) }
            .normalize()
    }
    fn neg(&self) -> Self {
        UniRational { num: self.num.neg(), ..self.clone() }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        if let Some(c) = self.num.as_constant() {
            let num = self.base.pow(self.power).scale(&c.inv());
            return Some(UniRational { num, base: self.base.clone(), power: 0, names: self.names.clone() });
        }
        // 1/(a/c^k) = c^(k+1) / (c*a)
        let base = if self.base.is_one() { self.num.clone() } else { self.base.mul(&self.num) };
        let num = if self.base.is_one() { TauPoly::one() } else { self.base.pow(self.power + 1) };
        Some(UniRational { num, base: Arc::new(base), power: 1, names: self.names.clone() }.normalize())
    }
    fn from_rational(r: &Rational) -> Self {
        UniRational::poly(TauPoly::constant(r.clone()))
    }
    fn cmp_canonical(&self, o: &Self) -> Ordering {
        self.power
            .cmp(&o.power)
            .then_with(|| self.base.cmp_canonical(&o.base))
            .then_with(|| self.num.cmp_canonical(&o.num))
    }
}

impl Field for UniRational {}

impl fmt::Display for UniRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num.fmt_with(&self.names);
        if self.power == 0 {
            return write!(f, "{n}");
        }
        let n = if self.num.terms.len() > 1 { format!("({n})") } else { n };
        let c = self.base.fmt_with(&self.names);
        let c = if self.base.terms.len() > 1 { format!("({c})") } else { c };
        if self.power == 1 {
            write!(f, "{n}/{c}")
        } else {
            write!(f, "{n}/{c}^{}", self.power)
        }
    }
}

impl fmt::Debug for UniRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Substitute `tau = tau_bar` in every coefficient of `f`.
pub fn specialize_series(f: &Series<UniRational>, tau_bar: &[Rational]) -> Result<Series<Rational>> {
    f.try_map_coeffs(|c| c.specialize(tau_bar))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau() -> UniRational {
        UniRational::tau(0)
    }

    fn q(n: i64) -> UniRational {
        UniRational::from_i64(n)
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let one_plus = q(1).add(&tau());
        let a = tau().mul(&one_plus.inv());
        let b = one_plus.mul(&tau().inv());
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn base_is_reduced() {
        let c = TauPoly::one().add(&TauPoly::var(0));
        let x = UniRational::new(c.mul(&TauPoly::var(0)), c.clone(), 1);
        assert_eq!(x.power(), 0);
        assert_eq!(x, tau());
    }

    #[test]
    fn specialization() {
        let c = TauPoly::one().add(&TauPoly::var(0));
        let x = UniRational::new(TauPoly::var(0), c, 1);
        assert_eq!(x.specialize(&[Rational::from(1)]).unwrap(), Rational::new(1, 2));
        assert!(matches!(
            x.specialize(&[Rational::from(-1)]),
            Err(Error::InadmissibleSpecialization(_))
        ));
    }

    #[test]
    fn display() {
        let names = Arc::new(vec!["t".to_string(), "u".to_string()]);
        let c = TauPoly::one().add(&TauPoly::var(1));
        let num = TauPoly::var(0).scale(&Rational::from(2)).add(&TauPoly::one());
        let x = UniRational::new(num, c, 3).with_names(names);
        assert_eq!(x.to_string(), "(2*t + 1)/(u + 1)^3");
    }

    #[test]
    fn exact_division() {
        let a = TauPoly::var(0).add(&TauPoly::var(1));
        let b = TauPoly::var(0).sub(&TauPoly::one());
        assert_eq!(a.mul(&b).exact_div(&b), Some(a.clone()));
        assert_eq!(a.exact_div(&b), None);
    }
}
