use std::cmp::Ordering;
use std::fmt;

use super::{Coeff, Field, Rational};

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> UPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate.
    pub fn x() -> Self {
        Self::new(vec![C::zero(), C::one()])
    }

    pub fn monomial(c: C, deg: usize) -> Self {
        let mut v = vec![C::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| C::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.mul(s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&C::from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(g).add(&Self::constant(c.clone())))
    }

    /// Deterministic order: by degree, then coefficients from the top down.
    pub fn cmp_canonical(&self, o: &Self) -> Ordering {
        self.coeffs.len().cmp(&o.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(o.coeffs.iter().rev()) {
                match a.cmp_canonical(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }

    pub fn fmt_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{c}");
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(if mono.is_empty() {
                format!("({cs})")
            } else if c.is_one() {
                mono
            } else {
                format!("({cs})*{mono}")
            });
        }
        parts.join(" + ")
    }
}

impl<F: Field> UPoly<F> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lc().is_one()
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let inv = d.lc().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let c = rem[i + dd].mul(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].sub(&c.mul(dc));
            }
            q[i] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Resultant by the Euclidean remainder sequence.
    pub fn resultant(&self, o: &Self) -> F {
        if self.is_zero() || o.is_zero() {
            return F::zero();
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        let mut acc = F::one();
        loop {
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                return acc.mul(&b.lc().pow(da as u32));
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return F::zero();
            }
            if (da * db) % 2 == 1 {
                acc = acc.neg();
            }
            acc = acc.mul(&b.lc().pow((da - r.deg()) as u32));
            a = b;
            b = r;
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Yun's squarefree decomposition: monic squarefree factors with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            b = b.divrem(&g).0;
            if b.is_constant() {
                break;
            }
            c = d.divrem(&g).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Self::one(), |acc, (g, _)| acc.mul(&g))
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[F], ys: &[F]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<F> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = dd[i].sub(&dd[i - 1]);
                let den = xs[i].sub(&xs[i - j]);
                dd[i] = num.div(&den);
            }
        }
        let mut p = Self::zero();
        for i in (0..n).rev() {
            p = p
                .mul(&Self::new(vec![xs[i].neg(), F::one()]))
                .add(&Self::constant(dd[i].clone()));
        }
        p
    }
}

impl UPoly<Rational> {
    /// Shift `x -> x + a`.
    pub fn shift(&self, a: &Rational) -> Self {
        self.compose(&Self::new(vec![a.clone(), Rational::one()]))
    }
}

impl<C: Coeff> fmt::Display for UPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = UPoly<Rational>;

    #[test]
    fn divrem_and_gcd() {
        let a = P::from_i64(&[-1, 0, 1]); // x^2 - 1
        let b = P::from_i64(&[1, 1]); // x + 1
        let (q, r) = a.divrem(&b);
        assert_eq!(q, P::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&P::from_i64(&[-1, 1]).mul(&P::from_i64(&[2, 1]))), P::from_i64(&[-1, 1]));
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x - 3) = 3^2 - 2 = 7 for monic first argument with linear second.
        let a = P::from_i64(&[-2, 0, 1]);
        let b = P::from_i64(&[-3, 1]);
        assert_eq!(a.resultant(&b), Rational::from(7));
        // symmetric sign rule
        assert_eq!(b.resultant(&a), Rational::from(7));
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^2 (x+2)^3 x
        let f = P::from_i64(&[-1, 1])
            .pow(2)
            .mul(&P::from_i64(&[2, 1]).pow(3))
            .mul(&P::x());
        let d = f.squarefree_decomposition();
        assert_eq!(
            d,
            vec![(P::x(), 1), (P::from_i64(&[-1, 1]), 2), (P::from_i64(&[2, 1]), 3)]
        );
        assert_eq!(f.squarefree_part().deg(), 3);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = P::from_i64(&[3, -1, 0, 2]);
        let xs: Vec<Rational> = (0..4).map(Rational::from).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(P::interpolate(&xs, &ys), f);
    }

    #[test]
    fn xgcd_bezout() {
        let a = P::from_i64(&[1, 0, 1]);
        let b = P::from_i64(&[0, 1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_constant());
    }
}
