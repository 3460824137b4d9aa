//! Determinants over commutative rings.

use crate::coeffs::{Coeff, Field};
use crate::series::Series;

/// Minimal ring interface for determinant evaluation. Constants are made
/// from an existing element so that context (variable lists) carries over.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_neg(&self) -> Self;
    fn r_is_zero(&self) -> bool;
}

impl<C: Coeff> Ring for Series<C> {
    fn zero_like(&self) -> Self {
        Series::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        Series::one(self.vars())
    }
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn r_is_zero(&self) -> bool {
        self.is_zero()
    }
}

macro_rules! coeff_ring {
    ($t:ty) => {
        impl Ring for $t {
            fn zero_like(&self) -> Self {
                <$t as Coeff>::zero()
            }
            fn one_like(&self) -> Self {
                <$t as Coeff>::one()
            }
            fn r_add(&self, o: &Self) -> Self {
                Coeff::add(self, o)
            }
            fn r_sub(&self, o: &Self) -> Self {
                Coeff::sub(self, o)
            }
            fn r_mul(&self, o: &Self) -> Self {
                Coeff::mul(self, o)
            }
            fn r_neg(&self) -> Self {
                Coeff::neg(self)
            }
            fn r_is_zero(&self) -> bool {
                Coeff::is_zero(self)
            }
        }
    };
}

coeff_ring!(crate::coeffs::Rational);
coeff_ring!(crate::coeffs::AlgElem);
coeff_ring!(crate::coeffs::UniRational);

/// Division-free determinant (Berkowitz), `O(n^4)` ring operations.
///
/// `unit` supplies the ring context for the empty matrix.
pub fn det_berkowitz<R: Ring>(m: &[Vec<R>], unit: &R) -> R {
    let n = m.len();
    if n == 0 {
        return unit.one_like();
    }
    let one = unit.one_like();
    // coefficients of the characteristic polynomial of the leading r x r block
    let mut v: Vec<R> = vec![one.clone()];
    for r in 0..n {
        // t = [1, -a_rr, -R S, -R A S, ..., -R A^{r-1} S]
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(m[r][r].r_neg());
        let mut col: Vec<R> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let mut dot = unit.zero_like();
            for (j, c) in col.iter().enumerate() {
                if !c.r_is_zero() && !m[r][j].r_is_zero() {
                    dot = dot.r_add(&m[r][j].r_mul(c));
                }
            }
            t.push(dot.r_neg());
            let next: Vec<R> = (0..r)
                .map(|i| {
                    let mut acc = unit.zero_like();
                    for (j, c) in col.iter().enumerate() {
                        if !c.r_is_zero() && !m[i][j].r_is_zero() {
                            acc = acc.r_add(&m[i][j].r_mul(c));
                        }
                    }
                    acc
                })
                .collect();
            col = next;
        }
        // v <- T v with T lower-triangular Toeplitz, size (r+2) x (r+1)
        let mut nv = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = unit.zero_like();
            for (j, vj) in v.iter().enumerate() {
                if j <= i && i - j < t.len() && !vj.r_is_zero() && !t[i - j].r_is_zero() {
                    acc = acc.r_add(&t[i - j].r_mul(vj));
                }
            }
            nv.push(acc);
        }
        v = nv;
    }
    let d = v[n].clone();
    if n % 2 == 1 {
        d.r_neg()
    } else {
        d
    }
}

/// Fraction-free Gaussian elimination (Bareiss) for exact polynomial entries.
pub fn det_bareiss<F: Field>(m: &[Vec<Series<F>>], unit: &Series<F>) -> Series<F> {
    let n = m.len();
    if n == 0 {
        return unit.one_like();
    }
    let mut a: Vec<Vec<Series<F>>> = m.to_vec();
    let mut neg = false;
    let mut prev = unit.one_like();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    neg = !neg;
                }
                None => return unit.zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = if prev.is_one_const() {
                    num
                } else {
                    num.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            a[i][k] = unit.zero_like();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if neg {
        d.neg()
    } else {
        d
    }
}

impl<C: Coeff> Series<C> {
    fn is_one_const(&self) -> bool {
        self.len() == 1 && self.constant_term().is_one()
    }
}

/// Gaussian elimination over the coefficient field.
fn det_field<F: Field>(mut a: Vec<Vec<F>>) -> F {
    let n = a.len();
    let mut d = F::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return F::zero();
        };
        if p != k {
            a.swap(p, k);
            d = d.neg();
        }
        let piv = a[k][k].clone();
        d = d.mul(&piv);
        let inv = piv.inv();
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let f = row[k].mul(&inv);
            for (x, y) in row[k + 1..n].iter_mut().zip(&pivot_row[k + 1..n]) {
                *x = x.sub(&f.mul(y));
            }
        }
    }
    d
}

/// Degree bound of the determinant in variable `i`.
fn det_degree_bound<F: Field>(m: &[Vec<Series<F>>], i: usize) -> u32 {
    let deg = |s: &Series<F>| s.degree_in(i).unwrap_or(0);
    let rows: u32 = m.iter().map(|r| r.iter().map(deg).max().unwrap_or(0)).sum();
    let cols: u32 = (0..m.len()).map(|j| m.iter().map(|r| deg(&r[j])).max().unwrap_or(0)).sum();
    rows.min(cols)
}

/// Determinant of an exact polynomial matrix by evaluation at integer
/// points and Newton interpolation, one variable at a time.
fn det_interp<F: Field>(m: &[Vec<Series<F>>], unit: &Series<F>, vars_left: &[(usize, u32)]) -> Series<F> {
    let Some((&(v, bound), rest)) = vars_left.split_first() else {
        let a: Vec<Vec<F>> = m.iter().map(|r| r.iter().map(|e| e.constant_term()).collect()).collect();
        return Series::constant(unit.vars(), det_field(a));
    };
    let bound = bound.min(det_degree_bound(m, v));
    if bound == 0 {
        return det_interp(m, unit, rest);
    }
    let vars = unit.vars();
    if rest.is_empty() {
        return det_interp_last(m, unit, v, bound);
    }
    let pts: Vec<F> = interp_points(bound);
    let mut c: Vec<Series<F>> = pts
        .iter()
        .map(|a| {
            let sub: Vec<Vec<Series<F>>> = m
                .iter()
                .map(|r| r.iter().map(|e| crate::series::lift(&e.eval_var(v, a).expect("exact"), vars, v)).collect())
                .collect();
            det_interp(&sub, unit, rest)
        })
        .collect();
    let n = c.len();
    for j in 1..n {
        for i in (j..n).rev() {
            let den = pts[i].sub(&pts[i - j]).inv();
            c[i] = c[i].sub(&c[i - 1]).scale(&den);
        }
    }
    let x = Series::var(vars, v);
    let mut r = c[n - 1].clone();
    for j in (0..n - 1).rev() {
        r = r.mul(&x.sub(&Series::constant(vars, pts[j].clone()))).add(&c[j]);
    }
    r
}

// 0, 1, -1, 2, -2, ... keeps the evaluated numbers small
fn interp_points<F: Field>(bound: u32) -> Vec<F> {
    (0..=bound as i64).map(|k| F::from_i64(if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 })).collect()
}

/// Innermost level: entries are univariate in `v`; work on dense vectors.
fn det_interp_last<F: Field>(m: &[Vec<Series<F>>], unit: &Series<F>, v: usize, bound: u32) -> Series<F> {
    let dense: Vec<Vec<Vec<F>>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| {
                    let mut c = vec![F::zero(); e.degree_in(v).map_or(0, |d| d as usize + 1)];
                    for (ex, x) in e.terms() {
                        c[ex[v] as usize] = x.clone();
                    }
                    c
                })
                .collect()
        })
        .collect();
    let pts: Vec<F> = interp_points(bound);
    let mut c: Vec<F> = pts
        .iter()
        .map(|a| {
            let ev: Vec<Vec<F>> = dense
                .iter()
                .map(|r| r.iter().map(|p| p.iter().rev().fold(F::zero(), |acc, x| acc.mul(a).add(x))).collect())
                .collect();
            det_field(ev)
        })
        .collect();
    let n = c.len();
    for j in 1..n {
        for i in (j..n).rev() {
            let den = pts[i].sub(&pts[i - j]).inv();
            c[i] = c[i].sub(&c[i - 1]).mul(&den);
        }
    }
    // expand the Newton form into monomial coefficients
    let mut poly: Vec<F> = vec![c[n - 1].clone()];
    for j in (0..n - 1).rev() {
        let mut next = vec![F::zero(); poly.len() + 1];
        for (k, p) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(p);
            next[k] = next[k].sub(&p.mul(&pts[j]));
        }
        next[0] = next[0].add(&c[j]);
        poly = next;
    }
    let vars = unit.vars();
    let mut r = Series::zero(vars);
    for (k, x) in poly.into_iter().enumerate() {
        let mut e = vec![0u32; vars.len()];
        e[v] = k as u32;
        r.insert(e, x);
    }
    r
}

/// Grid size above which interpolation is not attempted.
const INTERP_LIMIT: u64 = 1 << 14;

/// Determinant: interpolation or Bareiss for exact data, Berkowitz otherwise.
pub fn det<F: Field>(m: &[Vec<Series<F>>], unit: &Series<F>) -> Series<F> {
    det_with_bounds(m, unit, &[])
}

/// As [`det`], with optional external degree bounds per variable.
///
/// An interpolated determinant is checked at one further point; on a
/// mismatch (an invalid bound) the fraction-free route is used instead.
pub fn det_with_bounds<F: Field>(m: &[Vec<Series<F>>], unit: &Series<F>, bounds: &[Option<u32>]) -> Series<F> {
    if !m.iter().all(|row| row.iter().all(|e| e.is_exact())) {
        return det_berkowitz(m, unit);
    }
    let used: Vec<(usize, u32)> = (0..unit.nvars())
        .filter(|&i| m.iter().any(|r| r.iter().any(|e| e.degree_in(i).unwrap_or(0) > 0)))
        .map(|i| {
            let b = det_degree_bound(m, i);
            (i, bounds.get(i).copied().flatten().map_or(b, |x| x.min(b)))
        })
        .collect();
    let grid = used.iter().try_fold(1u64, |acc, &(_, b)| acc.checked_mul(b as u64 + 1));
    match grid {
        Some(g) if g <= INTERP_LIMIT && m.len() > 2 => {
            let d = det_interp(m, unit, &used);
            // spot check at an off-grid point
            let pt: Vec<F> = (0..unit.nvars()).map(|i| F::from_i64(1009 + 17 * i as i64)).collect();
            let ev = |s: &Series<F>| -> F {
                s.terms().fold(F::zero(), |acc, (e, c)| {
                    acc.add(&e.iter().zip(&pt).fold(c.clone(), |t, (k, x)| t.mul(&x.pow(*k))))
                })
            };
            let a: Vec<Vec<F>> = m.iter().map(|r| r.iter().map(ev).collect()).collect();
            if det_field(a) == ev(&d) {
                d
            } else {
                det_bareiss(m, unit)
            }
        }
        _ => det_bareiss(m, unit),
    }
}
