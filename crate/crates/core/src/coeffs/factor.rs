//! Univariate factorization over the rationals (big-prime Zassenhaus) and
//! over algebraic towers (Trager's norm method).

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::tower::Tower;
use super::{AlgElem, Coeff, Rational, UPoly};

type ZPoly = Vec<BigInt>;

fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Arithmetic in `F_p[x]` on little-endian coefficient vectors.
struct ModP {
    p: BigInt,
}

impl ModP {
    fn red(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.p)
    }

    fn norm(&self, a: &[BigInt]) -> ZPoly {
        let mut v: ZPoly = a.iter().map(|c| self.red(c)).collect();
        trim(&mut v);
        v
    }

    fn inv(&self, a: &BigInt) -> BigInt {
        let e = a.extended_gcd(&self.p);
        debug_assert!(e.gcd.is_one());
        self.red(&e.x)
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> ZPoly {
        let n = a.len().max(b.len());
        let z = BigInt::zero();
        let v: ZPoly = (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect();
        self.norm(&v)
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> ZPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        self.norm(&v)
    }

    fn divrem(&self, a: &[BigInt], d: &[BigInt]) -> (ZPoly, ZPoly) {
        let dd = d.len() - 1;
        let mut r = self.norm(a);
        if r.len() < d.len() {
            return (Vec::new(), r);
        }
        let inv = self.inv(&d[dd]);
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = self.red(&(&r[i + dd] * &inv));
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.iter().enumerate() {
                r[i + j] = self.red(&(&r[i + j] - &c * dc));
            }
            q[i] = c;
        }
        r.truncate(dd);
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    fn rem(&self, a: &[BigInt], d: &[BigInt]) -> ZPoly {
        self.divrem(a, d).1
    }

    fn monic(&self, a: &[BigInt]) -> ZPoly {
        let inv = self.inv(a.last().unwrap());
        self.norm(&a.iter().map(|c| c * &inv).collect::<Vec<_>>())
    }

    fn gcd(&self, a: &[BigInt], b: &[BigInt]) -> ZPoly {
        let (mut a, mut b) = (self.norm(a), self.norm(b));
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn powmod(&self, base: &[BigInt], e: &BigInt, m: &[BigInt]) -> ZPoly {
        let mut acc: ZPoly = vec![BigInt::one()];
        let base = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
        }
        acc
    }

    fn derivative(&self, a: &[BigInt]) -> ZPoly {
        let v: ZPoly = a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
        self.norm(&v)
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn ddf(&self, f: &[BigInt]) -> Vec<(ZPoly, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x: ZPoly = vec![BigInt::zero(), BigInt::one()];
        let mut h = x.clone();
        let mut d = 0;
        while f.len() > 2 * (d + 1) {
            d += 1;
            h = self.powmod(&h, &self.p, &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    /// Equal-degree splitting (Cantor–Zassenhaus, odd p).
    fn edf(&self, f: &[BigInt], d: usize, rng: &mut ChaCha8Rng) -> Vec<ZPoly> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let e = (self.p.pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: ZPoly = self.norm(&(0..n).map(|_| rng.gen_bigint_range(&BigInt::zero(), &self.p)).collect::<Vec<_>>());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, f), &[BigInt::one()]);
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let q = self.divrem(f, &g).0;
                let mut out = self.edf(&g, d, rng);
                out.extend(self.edf(&q, d, rng));
                return out;
            }
        }
    }
}

fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if *n < two {
        return false;
    }
    for sp in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let sp = BigInt::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primitive integer polynomial with positive leading coefficient.
fn to_primitive(f: &UPoly<Rational>) -> ZPoly {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v: ZPoly = f.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if v.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    v.iter().map(|c| c / &g * &sign).collect()
}

fn zpoly_to_q(v: &[BigInt]) -> UPoly<Rational> {
    UPoly::new(v.iter().map(|c| Rational::from_int(c.clone())).collect())
}

/// Exact quotient over Z, if `d` divides `a`.
fn zdiv(a: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let (q, r) = zpoly_to_q(a).divrem(&zpoly_to_q(d));
    if !r.is_zero() || !q.coeffs().iter().all(|c| c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.numer().clone()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn factor_squarefree_z(g: &ZPoly) -> Vec<ZPoly> {
    let n = g.len() - 1;
    if n <= 1 {
        return vec![g.clone()];
    }
    // coefficient bound for factors of lc*g
    let lc = g[n].abs();
    let norm1: BigInt = g.iter().map(|c| c.abs()).sum();
    let bound = (BigInt::one() << n) * &norm1 * &lc;
    let mut p = bound * 2u32 + 1u32;
    let ctx = loop {
        if is_probable_prime(&p) && !(&lc % &p).is_zero() {
            let m = ModP { p: p.clone() };
            let gm = m.norm(g);
            if m.gcd(&gm, &m.derivative(&gm)).len() == 1 {
                break m;
            }
        }
        p += 1u32;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let gm = ctx.monic(&ctx.norm(g));
    let mut modular: Vec<ZPoly> = Vec::new();
    for (h, d) in ctx.ddf(&gm) {
        modular.extend(ctx.edf(&h, d, &mut rng));
    }
    let half = &ctx.p / 2u32;
    let symm = |c: BigInt| if c > half { c - &ctx.p } else { c };

    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut k = 1;
    while 2 * k <= modular.len() {
        let mut found = false;
        for s in subsets(modular.len(), k) {
            let lcr = rest.last().unwrap().clone();
            let mut prod = vec![lcr];
            for &i in &s {
                prod = ctx.mul(&prod, &modular[i]);
            }
            let cand: ZPoly = prod.into_iter().map(&symm).collect();
            let cont = cand.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            let cand: ZPoly = cand.iter().map(|c| c / &cont).collect();
            if let Some(q) = zdiv(&rest, &cand) {
                out.push(cand);
                rest = q;
                modular = modular
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !s.contains(i))
                    .map(|(_, f)| f)
                    .collect();
                found = true;
                break;
            }
        }
        if !found {
            k += 1;
        }
    }
    out.push(rest);
    out
}

fn sort_factors<C: Coeff>(v: &mut [(UPoly<C>, u32)]) {
    v.sort_by(|a, b| a.0.cmp_canonical(&b.0).then(a.1.cmp(&b.1)));
}

/// Monic irreducible factors over the rationals with multiplicities, in
/// deterministic order (degree, then coefficients).
pub fn factor_over_q(f: &UPoly<Rational>) -> Vec<(UPoly<Rational>, u32)> {
    let mut out = Vec::new();
    for (g, m) in f.squarefree_decomposition() {
        for h in factor_squarefree_z(&to_primitive(&g)) {
            out.push((zpoly_to_q(&h).monic(), m));
        }
    }
    sort_factors(&mut out);
    out
}

fn rational_of(c: &AlgElem) -> Rational {
    c.simplify().as_rational().expect("coefficient outside the base field")
}

/// Monic irreducible factors of `f` over the field `base`, with multiplicities.
pub fn factor_over(base: &Tower, f: &UPoly<AlgElem>) -> Vec<(UPoly<AlgElem>, u32)> {
    let Some(node) = base else {
        let fq = f.map(rational_of);
        return factor_over_q(&fq)
            .into_iter()
            .map(|(g, m)| (g.map(|c| AlgElem::rational(c.clone())), m))
            .collect();
    };
    let f = f.map(|c| c.embed_in(base));
    let alpha = AlgElem::generator(node);
    let mut out = Vec::new();
    for (g, m) in f.squarefree_decomposition() {
        for h in trager(base, &alpha, &g) {
            out.push((h, m));
        }
    }
    sort_factors(&mut out);
    out
}

fn norm_poly(base: &Tower, g: &UPoly<AlgElem>) -> UPoly<AlgElem> {
    let node = base.as_ref().unwrap();
    let n = g.deg() * node.degree();
    let xs: Vec<AlgElem> = (0..=n).map(|i| AlgElem::from_i64(i as i64)).collect();
    let ys: Vec<AlgElem> = xs.iter().map(|x| g.eval(x).embed_in(base).norm_down()).collect();
    let xs: Vec<AlgElem> = xs.iter().map(|x| x.embed_in(node.parent())).collect();
    let ys: Vec<AlgElem> = ys.iter().map(|y| y.embed_in(node.parent())).collect();
    UPoly::interpolate(&xs, &ys)
}

fn trager(base: &Tower, alpha: &AlgElem, g: &UPoly<AlgElem>) -> Vec<UPoly<AlgElem>> {
    let g = g.monic();
    if g.deg() <= 1 {
        return vec![g];
    }
    let parent = base.as_ref().unwrap().parent().clone();
    for k in 0i64.. {
        let s = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
        let sa = alpha.mul(&AlgElem::from_i64(s));
        let shifted = g.compose(&UPoly::new(vec![sa.neg(), AlgElem::one()]));
        let nrm = norm_poly(base, &shifted);
        if !nrm.is_squarefree() {
            continue;
        }
        let parts = factor_over(&parent, &nrm);
        if parts.len() == 1 {
            return vec![g];
        }
        let back = UPoly::new(vec![sa.clone(), AlgElem::one()]);
        let mut out = Vec::new();
        for (h, _) in parts {
            let h = h.map(|c| c.embed_in(base));
            let d = shifted.gcd(&h);
            if !d.is_constant() {
                out.push(d.compose(&back).monic());
            }
        }
        return out;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::adjoin;

    fn qp(cs: &[i64]) -> UPoly<Rational> {
        UPoly::from_i64(cs)
    }

    #[test]
    fn factors_over_q() {
        // (x^2+1)(x-2)^2(3x+1)
        let f = qp(&[1, 0, 1]).mul(&qp(&[-2, 1]).pow(2)).mul(&qp(&[1, 3]));
        let fs = factor_over_q(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0].0.deg(), 1);
        let prod = fs.iter().fold(UPoly::one(), |acc, (g, m)| acc.mul(&g.pow(*m)));
        assert_eq!(prod, f.monic());
        assert!(fs.iter().any(|(g, m)| *g == qp(&[1, 0, 1]) && *m == 1));
    }

    #[test]
    fn irreducible_quartic_stays_whole() {
        // x^4 + 1 is irreducible over Q but splits mod every prime
        let fs = factor_over_q(&qp(&[1, 0, 0, 0, 1]));
        assert_eq!(fs, vec![(qp(&[1, 0, 0, 0, 1]), 1)]);
    }

    #[test]
    fn cyclotomic_split() {
        let fs = factor_over_q(&qp(&[-1, 0, 0, 0, 0, 0, 1]));
        let degs: Vec<usize> = fs.iter().map(|(g, _)| g.deg()).collect();
        assert_eq!(degs, vec![1, 1, 2, 2]);
    }

    #[test]
    fn x4_plus_1_over_gaussian() {
        let i = adjoin(&None, &UPoly::from_i64(&[1, 0, 1]), "i").unwrap();
        let f: UPoly<AlgElem> = UPoly::from_i64(&[1, 0, 0, 0, 1]);
        let fs = factor_over(&i.tower, &f);
        // x^4+1 = (x^2 - i)(x^2 + i)
        assert_eq!(fs.len(), 2);
        let prod = fs.iter().fold(UPoly::<AlgElem>::one(), |acc, (g, _)| acc.mul(g));
        assert_eq!(prod, f);
    }
}
