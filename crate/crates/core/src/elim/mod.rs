//! Resultants, discriminants, subresultants and squarefree parts.
//!
//! Polynomials in the eliminated variable are passed as little-endian
//! coefficient lists of series in the remaining variables.

mod det;
pub mod mgcd;

use std::any::Any;
use std::sync::Arc;

use crate::coeffs::{Coeff, Field, Rational, UniRational};
use crate::error::{Error, Result};
use crate::series::{lift, weierstrass_prepare, z_order, Provenance, Pseudopolynomial, Series, Vars};

pub use det::{det, det_bareiss, det_berkowitz, det_with_bounds, Ring};

fn trim<F: Field>(p: &[Series<F>]) -> &[Series<F>] {
    let mut n = p.len();
    while n > 0 && p[n - 1].is_zero() {
        n -= 1;
    }
    &p[..n]
}

/// Rows `x^i f` (`i < n-k`) and `x^i g` (`i < m-k`) of the `k`-th
/// subresultant matrix, columns ordered from degree `m+n-k-1` down to 0.
fn subres_rows<F: Field>(f: &[Series<F>], g: &[Series<F>], k: usize, zero: &Series<F>) -> Vec<Vec<Series<F>>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let width = m + n - k;
    let mut rows = Vec::new();
    for (p, cnt) in [(f, n - k), (g, m - k)] {
        let dp = p.len() - 1;
        for i in (0..cnt).rev() {
            // coefficients of x^i p, from degree width-1 down to 0
            let row = (0..width)
                .map(|col| {
                    let deg = width - 1 - col;
                    if deg >= i && deg - i <= dp {
                        p[deg - i].clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Sylvester matrix of `f` and `g` (rows of `f` first).
pub fn sylvester<F: Field>(f: &[Series<F>], g: &[Series<F>], vars: &Vars) -> Vec<Vec<Series<F>>> {
    subres_rows(trim(f), trim(g), 0, &Series::zero(vars))
}

/// `Res(f, g)` as the Sylvester determinant; `Res(f, c) = c^deg f`.
pub fn resultant<F: Field>(f: &[Series<F>], g: &[Series<F>], vars: &Vars) -> Series<F> {
    let (f, g) = (trim(f), trim(g));
    if f.is_empty() || g.is_empty() {
        return Series::zero(vars);
    }
    let one = Series::one(vars);
    // Bezout: deg_v Res <= tdeg_{v,z}(f) * tdeg_{v,z}(g)
    let tdeg = |p: &[Series<F>], v: usize| p.iter().enumerate().filter_map(|(j, c)| c.degree_in(v).map(|d| d + j as u32)).max().unwrap_or(0);
    let bounds: Vec<Option<u32>> = (0..vars.len()).map(|v| Some(tdeg(f, v) * tdeg(g, v))).collect();
    det_scaled(sylvester(f, g, vars), &one, &bounds)
}

/// Determinant, clearing rational denominators row by row first so that
/// fraction-free elimination runs on integer data.
fn det_scaled<F: Field>(mut m: Vec<Vec<Series<F>>>, one: &Series<F>, bounds: &[Option<u32>]) -> Series<F> {
    let Some(rows) = (&mut m as &mut dyn Any).downcast_mut::<Vec<Vec<Series<Rational>>>>() else {
        return det_with_bounds(&m, one, bounds);
    };
    let mut scale = Rational::from(1);
    for row in rows.iter_mut() {
        let l = row
            .iter()
            .flat_map(|e| e.terms().map(|(_, c)| c.denom().clone()))
            .fold(num_bigint::BigInt::from(1), |a, b| num_integer::Integer::lcm(&a, &b));
        let l = Rational::from_int(l);
        if !l.is_one() {
            for e in row.iter_mut() {
                *e = e.scale(&l);
            }
            scale = scale.mul(&l);
        }
    }
    let d = det_with_bounds(&m, one, bounds);
    d.scale(&F::from_rational(&scale.inv()))
}

/// Principal subresultant coefficient `psc_k(f, g)`, `deg g <= deg f`.
pub fn psc<F: Field>(f: &[Series<F>], g: &[Series<F>], k: usize, vars: &Vars) -> Series<F> {
    let (f, g) = (trim(f), trim(g));
    let (m, n) = (f.len() - 1, g.len() - 1);
    let one = Series::one(vars);
    if k == n {
        return g[n].pow((m - n) as u32);
    }
    let rows = subres_rows(f, g, k, &Series::zero(vars));
    let sq: Vec<Vec<Series<F>>> = rows.iter().map(|r| r[..m + n - 2 * k].to_vec()).collect();
    det_scaled(sq, &one, &[])
}

/// Polynomial subresultant `S_k(f, g)` (coefficient list, degree <= k).
pub fn subresultant<F: Field>(f: &[Series<F>], g: &[Series<F>], k: usize, vars: &Vars) -> Vec<Series<F>> {
    let (f, g) = (trim(f), trim(g));
    let (m, n) = (f.len() - 1, g.len() - 1);
    let one = Series::one(vars);
    if k == n {
        let c = g[n].pow((m - n).saturating_sub(1) as u32);
        return g.iter().map(|a| a.mul(&c)).collect();
    }
    let rows = subres_rows(f, g, k, &Series::zero(vars));
    let w = m + n - k;
    let lead = m + n - 2 * k - 1;
    (0..=k)
        .map(|i| {
            let col = w - 1 - i;
            let sq: Vec<Vec<Series<F>>> = rows
                .iter()
                .map(|r| {
                    let mut v = r[..lead].to_vec();
                    v.push(r[col].clone());
                    v
                })
                .collect();
            det_scaled(sq, &one, &[])
        })
        .collect()
}

fn derivative_coeffs<F: Field>(p: &[Series<F>]) -> Vec<Series<F>> {
    p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&F::from_i64(i as i64))).collect()
}

/// `D_F = Res(F, dF/dz)`; 1 for degree <= 1.
pub fn discriminant<F: Field>(p: &Pseudopolynomial<F>) -> Series<F> {
    let vars = p.base_vars();
    if p.degree() <= 1 {
        return Series::one(&vars);
    }
    let all = p.all_coeffs();
    resultant(&all, &derivative_coeffs(&all), &vars)
}

/// Generalized discriminants `Delta_j = psc_{j-1}(F, F')`, `j = 1..d`, and
/// the first index with a represented nonzero value.
pub fn generalized_discriminants<F: Field>(p: &Pseudopolynomial<F>) -> (Vec<Series<F>>, usize) {
    let vars = p.base_vars();
    let d = p.degree();
    if d <= 1 {
        return (vec![Series::one(&vars)], 1);
    }
    let all = p.all_coeffs();
    let der = derivative_coeffs(&all);
    let seq: Vec<Series<F>> = (1..=d).map(|j| psc(&all, &der, j - 1, &vars)).collect();
    let first = seq.iter().position(|s| !s.is_zero()).map_or(d, |i| i + 1);
    (seq, first)
}

/// Monic division in the eliminated variable.
fn monic_divrem<F: Field>(a: &[Series<F>], b: &[Series<F>]) -> (Vec<Series<F>>, Vec<Series<F>>) {
    let b = trim(b);
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Series::zero(b[0].vars()); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] = r[i + j].sub(&c.mul(bc));
        }
        q[i] = c;
    }
    r.truncate(db);
    (q, r)
}

/// Squarefree part `F / gcd(F, F')`, monic.
///
/// Exact data uses a multivariate gcd; truncated data divides by the
/// monic subresultant gcd, which needs its principal coefficient to be a unit.
pub fn squarefree_part<F: Field>(p: &Pseudopolynomial<F>) -> Result<Pseudopolynomial<F>> {
    let d = p.degree();
    if d <= 1 {
        return Ok(p.clone());
    }
    if p.prec().is_none() {
        let f = p.to_series();
        let g = mgcd::gcd(&f, &f.derivative(p.pos()));
        let q = f.div_exact(&g)?;
        // g has a constant leading coefficient in z, so q is monic up to scale
        let lc = q.coeff_of(p.pos(), q.degree_in(p.pos()).unwrap_or(0)).constant_term();
        return Pseudopolynomial::from_monic(&q.scale(&lc.inv()), p.pos());
    }
    let (_, jstar) = generalized_discriminants(p);
    if jstar == 1 {
        return Ok(p.clone());
    }
    let vars = p.base_vars();
    let all = p.all_coeffs();
    let der = derivative_coeffs(&all);
    let s = subresultant(&all, &der, jstar - 1, &vars);
    // S = psc * G with G monic; strip monomial factors of psc, then invert the unit
    let mut s = s;
    let mut lc = s[jstar - 1].clone();
    for i in 0..lc.nvars() {
        let k = lc.order_in(i).unwrap_or(0);
        if k > 0 {
            lc = lc.div_var_power(i, k)?;
            s = s.iter().map(|c| c.div_var_power(i, k)).collect::<Result<_>>()?;
        }
    }
    if !lc.is_unit() {
        return Err(Error::PrecisionExhausted(
            "squarefree part of truncated data: subresultant coefficient is not a monomial times a unit".into(),
        ));
    }
    let n = lc.prec().or(p.prec()).unwrap_or(u32::MAX);
    let inv = lc.invert_unit(n)?;
    let g: Vec<Series<F>> = s.iter().map(|c| c.mul(&inv)).collect();
    let (q, _) = monic_divrem(&all, &g);
    let mut q = q;
    q.pop();
    Ok(Pseudopolynomial::from_coeffs(p.full_vars(), p.pos(), q))
}

/// Discriminant data for one elimination step.
#[derive(Clone, Debug)]
pub struct DiscriminantRecord<F: Field> {
    pub source: Pseudopolynomial<F>,
    pub eliminated: String,
    pub value: Series<F>,
    pub reduced_value: Series<F>,
    pub gen_disc_index: usize,
    pub provenance: Provenance,
}

pub fn discriminant_record<F: Field>(p: &Pseudopolynomial<F>) -> Result<DiscriminantRecord<F>> {
    let value = discriminant(p);
    let (_, j) = generalized_discriminants(p);
    let red = squarefree_part(p)?;
    let reduced_value = discriminant(&red);
    let provenance = Provenance::of(&value).join(Provenance::of(&reduced_value));
    Ok(DiscriminantRecord {
        source: p.clone(),
        eliminated: p.var().to_string(),
        value,
        reduced_value,
        gen_disc_index: j,
        provenance,
    })
}

fn coeff_list<F: Field>(f: &Series<F>, pos: usize) -> Vec<Series<F>> {
    let d = f.degree_in(pos).unwrap_or(0);
    (0..=d).map(|j| f.coeff_of(pos, j)).collect()
}

/// Exact polynomials whose `Res(f, f_z)` is a unit multiple of the
/// discriminant of the Weierstrass polynomial: the `z`-leading coefficient
/// is a unit and `f(0, z) / z^d` has only simple roots.
pub fn shortcut_applies<F: Field>(f: &Series<F>, pos: usize) -> bool {
    if !f.is_exact() {
        return false;
    }
    let Some(d) = z_order(f, pos) else { return false };
    let top = f.degree_in(pos).unwrap_or(0);
    let restricted: Vec<F> = (0..=top)
        .map(|k| {
            let e: Vec<u32> = (0..f.nvars()).map(|i| if i == pos { k } else { 0 }).collect();
            f.coeff(&e)
        })
        .collect();
    if restricted[top as usize].is_zero() {
        return false;
    }
    let q = crate::coeffs::UPoly::new(restricted[d as usize..].to_vec());
    q.is_squarefree()
}

/// Zero locus data of the discriminant of `f` in variable `pos`.
#[derive(Clone, Debug)]
pub struct DiscLocus<F: Field> {
    /// A unit multiple of the discriminant of the Weierstrass polynomial of `f`.
    pub value: Series<F>,
    pub provenance: Provenance,
    /// `true` when computed directly from `Res(f, f_z)`.
    pub shortcut: bool,
}

/// Discriminant (or, with `reduced`, the discriminant of the squarefree
/// part) of the germ of `f` in variable `pos`, expressed in the remaining variables.
pub fn discriminant_locus<F: Field>(f: &Series<F>, pos: usize, n: u32, reduced: bool) -> Result<DiscLocus<F>> {
    let vars = {
        let mut v = f.vars().as_ref().clone();
        v.remove(pos);
        Arc::new(v)
    };
    if shortcut_applies(f, pos) {
        let g = if reduced {
            let r = f.div_exact(&mgcd::gcd(f, &f.derivative(pos)))?;
            if !shortcut_applies(&r, pos) {
                return prepared_locus(f, pos, n, reduced);
            }
            r
        } else {
            f.clone()
        };
        let all = coeff_list(&g, pos);
        if all.len() <= 2 {
            return Ok(DiscLocus { value: Series::one(&vars), provenance: Provenance::Exact, shortcut: true });
        }
        let value = resultant(&all, &derivative_coeffs(&all), &vars);
        return Ok(DiscLocus { value, provenance: Provenance::Exact, shortcut: true });
    }
    prepared_locus(f, pos, n, reduced)
}

fn prepared_locus<F: Field>(f: &Series<F>, pos: usize, n: u32, reduced: bool) -> Result<DiscLocus<F>> {
    let (_, p) = weierstrass_prepare(f, pos, n)?;
    let p = if reduced { squarefree_part(&p)? } else { p };
    let value = discriminant(&p);
    let provenance = Provenance::of(&value).join(p.provenance());
    Ok(DiscLocus { value, provenance, shortcut: false })
}

/// Outcome of one specialization sample.
#[derive(Clone, Debug)]
pub struct CommutationSample {
    pub tau: Vec<Rational>,
    pub pass: bool,
    pub provenance: Provenance,
}

/// Compare `specialize(disc(prepare(f)))` with `disc(prepare(specialize(f)))`
/// for every sample.
pub fn specialization_commutation_check(
    f: &Series<UniRational>,
    pos: usize,
    n: u32,
    samples: &[Vec<Rational>],
) -> Result<Vec<CommutationSample>> {
    let (_, p) = weierstrass_prepare(f, pos, n)?;
    let d = discriminant(&p);
    let mut out = Vec::new();
    for tau in samples {
        let left = crate::coeffs::specialize_series(&d, tau)?;
        let fs = crate::coeffs::specialize_series(f, tau)?;
        let (_, ps) = weierstrass_prepare(&fs, pos, n)?;
        let right = discriminant(&ps);
        let provenance = Provenance::of(&left).join(Provenance::of(&right));
        out.push(CommutationSample { tau: tau.clone(), pass: left.eq_mod_prec(&right), provenance });
    }
    Ok(out)
}

/// Convenience: the coefficient list of a pseudopolynomial lifted back
/// into the full ring.
pub fn lifted_coeffs<C: Coeff>(p: &Pseudopolynomial<C>) -> Vec<Series<C>> {
    p.all_coeffs().iter().map(|a| lift(a, p.full_vars(), p.pos())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::vars;

    type S = Series<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn resultant_examples() {
        let v = vars(&["x"]);
        let x = S::var(&v, 0);
        let one = S::one(&v);
        let zero = S::zero(&v);
        // Res_z(z^2 - x, 2z) = -4x
        let f = vec![x.neg(), zero.clone(), one.clone()];
        let g = vec![zero.clone(), S::from_i64(&v, 2)];
        assert_eq!(resultant(&f, &g, &v), x.scale(&q(-4)));
        // Res(F, 1) = 1
        assert_eq!(resultant(&f, std::slice::from_ref(&one), &v), one);
    }

    #[test]
    fn discriminant_of_cusp_sum() {
        let v = vars(&["x", "y", "z"]);
        let s = crate::parse::parse_rational("z^2 - y^3 - x^3", &v).unwrap();
        let p = Pseudopolynomial::from_monic(&s, 2).unwrap();
        let w = vars(&["x", "y"]);
        let expect = crate::parse::parse_rational("-4*x^3 - 4*y^3", &w).unwrap();
        assert_eq!(discriminant(&p), expect);
    }

    #[test]
    fn generalized_discriminant_of_square() {
        let v = vars(&["x", "y"]);
        let s = crate::parse::parse_rational("(y - x)^2", &v).unwrap();
        let p = Pseudopolynomial::from_monic(&s, 1).unwrap();
        let (seq, j) = generalized_discriminants(&p);
        assert!(seq[0].is_zero());
        assert_eq!(j, 2);
        assert_eq!(seq[1].constant_term(), q(2));
        let red = squarefree_part(&p).unwrap();
        assert_eq!(red.to_series(), crate::parse::parse_rational("y - x", &v).unwrap());
    }

    #[test]
    fn squarefree_truncated() {
        let v = vars(&["x", "y"]);
        let s = crate::parse::parse_rational("y^2*(y - x)", &v).unwrap().truncate(12);
        let p = Pseudopolynomial::from_monic(&s, 1).unwrap();
        let red = squarefree_part(&p).unwrap();
        let expect = crate::parse::parse_rational("y^2 - x*y", &v).unwrap();
        assert!(red.to_series().eq_mod_prec(&expect));
    }
}
