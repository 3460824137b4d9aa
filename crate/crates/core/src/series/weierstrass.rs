use std::sync::Arc;

use serde::Serialize;

use super::trunc::{Series, Vars};
use crate::coeffs::{Coeff, Field};
use crate::error::{Error, Result};

/// Where a claim comes from: exact polynomial data, or series data that
/// is only known modulo total degree `N`.
/// Serializes as its display form, `exact` or `certified-mod-N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    CertifiedModN(u32),
}

impl Provenance {
    pub fn of<C: Coeff>(s: &Series<C>) -> Self {
        match s.prec() {
            None => Provenance::Exact,
            Some(n) => Provenance::CertifiedModN(n),
        }
    }

    pub fn join(self, o: Provenance) -> Provenance {
        match (self, o) {
            (Provenance::Exact, p) | (p, Provenance::Exact) => p,
            (Provenance::CertifiedModN(a), Provenance::CertifiedModN(b)) => Provenance::CertifiedModN(a.min(b)),
        }
    }

    pub fn is_exact(self) -> bool {
        self == Provenance::Exact
    }
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Exact => write!(f, "exact"),
            Provenance::CertifiedModN(n) => write!(f, "certified-mod-{n}"),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Monic polynomial `z^d + a_{d-1} z^{d-1} + ... + a_0` in a distinguished
/// variable with series coefficients in the remaining variables.
#[derive(Clone, Debug)]
pub struct Pseudopolynomial<C: Coeff> {
    full: Vars,
    pos: usize,
    coeffs: Vec<Series<C>>,
}

impl<C: Coeff> Pseudopolynomial<C> {
    /// Read a series that is monic of z-degree `d` in variable `pos`.
    pub fn from_monic(f: &Series<C>, pos: usize) -> Result<Self> {
        let d = f.degree_in(pos).unwrap_or(0);
        let lead = f.coeff_of(pos, d);
        if !(lead.len() == 1 && lead.constant_term().is_one()) {
            return Err(Error::NotRegular { var: f.vars()[pos].clone(), level: None });
        }
        Ok(Pseudopolynomial {
            full: f.vars().clone(),
            pos,
            coeffs: (0..d).map(|j| f.coeff_of(pos, j)).collect(),
        })
    }

    pub fn from_coeffs(full: &Vars, pos: usize, coeffs: Vec<Series<C>>) -> Self {
        Pseudopolynomial { full: full.clone(), pos, coeffs }
    }

    /// The constant polynomial 1 (degree 0).
    pub fn one(full: &Vars, pos: usize) -> Self {
        Pseudopolynomial { full: full.clone(), pos, coeffs: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn var(&self) -> &str {
        &self.full[self.pos]
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn full_vars(&self) -> &Vars {
        &self.full
    }

    /// The variables of the coefficients.
    pub fn base_vars(&self) -> Vars {
        let mut v = self.full.as_ref().clone();
        v.remove(self.pos);
        Arc::new(v)
    }

    /// Non-leading coefficients `a_0 .. a_{d-1}`.
    pub fn coeffs(&self) -> &[Series<C>] {
        &self.coeffs
    }

    /// All coefficients including the leading 1.
    pub fn all_coeffs(&self) -> Vec<Series<C>> {
        let mut v = self.coeffs.clone();
        v.push(Series::one(&self.base_vars()));
        v
    }

    /// Every non-leading coefficient vanishes at the origin.
    pub fn is_pseudo(&self) -> bool {
        self.coeffs.iter().all(|a| a.constant_term().is_zero())
    }

    pub fn prec(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(j, a)| a.prec().map(|p| p + j as u32))
            .min()
    }

    pub fn provenance(&self) -> Provenance {
        match self.prec() {
            None => Provenance::Exact,
            Some(n) => Provenance::CertifiedModN(n),
        }
    }

    pub fn to_series(&self) -> Series<C> {
        let z = Series::var(&self.full, self.pos);
        let mut acc = Series::zero(&self.full);
        let mut zk = Series::one(&self.full);
        for a in &self.coeffs {
            let a = lift(a, &self.full, self.pos);
            acc = acc.add(&a.mul(&zk));
            zk = zk.mul(&z);
        }
        acc.add(&zk)
    }
}

/// Re-insert variable `pos` (with exponent 0) into a coefficient series.
pub fn lift<C: Coeff>(a: &Series<C>, full: &Vars, pos: usize) -> Series<C> {
    Series::from_terms(
        full,
        a.terms().map(|(e, c)| {
            let mut e = e.clone();
            e.insert(pos, 0);
            (e, c.clone())
        }),
        a.prec(),
    )
}

/// Order of `f(0,...,0,z)` in `z`, if that restriction is nonzero.
pub fn z_order<C: Coeff>(f: &Series<C>, pos: usize) -> Option<u32> {
    f.terms()
        .filter(|(e, _)| e.iter().enumerate().all(|(i, k)| i == pos || *k == 0))
        .map(|(e, _)| e[pos])
        .min()
}

/// Split `f = z^d h + R` with `deg_z R < d`.
fn split<C: Coeff>(f: &Series<C>, pos: usize, d: u32) -> (Series<C>, Series<C>) {
    let v = f.vars();
    let mut h = Series::zero(v).with_prec(f.prec().map(|p| p.saturating_sub(d)));
    let mut r = Series::zero(v).with_prec(f.prec());
    for (e, c) in f.terms() {
        if e[pos] >= d {
            let mut e = e.clone();
            e[pos] -= d;
            h.insert(e, c.clone());
        } else {
            r.insert(e.clone(), c.clone());
        }
    }
    (h, r)
}

/// Weierstrass preparation `f = unit * prep` in variable `pos`, modulo
/// total degree `n`.
///
/// Runs the fixed-point iteration `f <- h(f)^{-1} f` where `f = z^d h(f) + R`
/// until `h` is 1. If `f` is an exact polynomial whose part of z-degree
/// `>= d` is a constant times `z^d`, the result is exact.
pub fn weierstrass_prepare<F: Field>(f: &Series<F>, pos: usize, n: u32) -> Result<(Series<F>, Pseudopolynomial<F>)> {
    let var = f.vars()[pos].clone();
    let d = z_order(f, pos).ok_or(Error::NotRegular { var: var.clone(), level: None })?;
    if f.is_exact() {
        let (h, _) = split(f, pos, d);
        if h.len() == 1 && h.is_unit() {
            let c = h.constant_term();
            let prep = f.scale(&c.inv());
            return Ok((Series::constant(f.vars(), c), Pseudopolynomial::from_monic(&prep, pos)?));
        }
    }
    let n = f.prec().map_or(n, |p| p.min(n));
    if d >= n {
        return Err(Error::NotRegular { var, level: None });
    }
    let mut cur = f.truncate(n);
    let mut unit = Series::one(f.vars()).with_prec(Some(n));
    for _ in 0..=n + 1 {
        let (h, _) = split(&cur, pos, d);
        let h = h.truncate(n);
        let done = h.len() == 1 && h.constant_term().is_one();
        if done {
            let mut prep = cur.clone();
            // drop everything of z-degree > d: only z^d itself remains there
            prep = prep.with_prec(Some(n));
            let coeffs = (0..d).map(|j| prep.coeff_of(pos, j)).collect();
            let pp = Pseudopolynomial { full: f.vars().clone(), pos, coeffs };
            return Ok((unit, pp));
        }
        let hinv = h.clone().with_prec(Some(n)).invert_unit(n)?;
        unit = unit.mul(&h.with_prec(Some(n))).truncate(n);
        cur = hinv.mul(&cur).truncate(n);
    }
    Err(Error::PrecisionExhausted("Weierstrass iteration did not stabilize".into()))
}

/// `D = x^M * cofactor` with `M` maximal over represented terms.
#[derive(Clone, Debug)]
pub struct MonomialUnit<C: Coeff> {
    pub m: u32,
    pub cofactor: Series<C>,
    pub is_unit: bool,
    pub provenance: Provenance,
}

pub fn monomial_unit_decompose<C: Coeff>(d: &Series<C>, x: usize) -> Result<MonomialUnit<C>> {
    let m = d.order_in(x).ok_or(Error::ZeroToPrecision)?;
    let cofactor = d.div_var_power(x, m)?;
    Ok(MonomialUnit {
        m,
        is_unit: cofactor.is_unit(),
        provenance: Provenance::of(&cofactor),
        cofactor,
    })
}

/// `m`-th root of a unit whose constant term has a root in the coefficient ring.
pub fn unit_root<F: Field>(f: &Series<F>, m: u32, n: u32) -> Result<Series<F>> {
    let c0 = f.constant_term();
    if c0.is_zero() {
        return Err(Error::NotAUnit);
    }
    let r0 = c0
        .nth_root(m)
        .ok_or_else(|| Error::HypothesisViolated(format!("{c0} has no {m}-th root in the coefficient field")))?;
    f.unit_root_with(m, n, &r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Rational;
    use crate::series::vars;

    type S = Series<Rational>;

    #[test]
    fn prepare_divides_by_unit() {
        let v = vars(&["x", "z"]);
        let (x, z) = (S::var(&v, 0), S::var(&v, 1));
        let one = S::one(&v);
        let f = one.add(&x).mul(&z).mul(&z).sub(&x);
        let (u, p) = weierstrass_prepare(&f, 1, 5).unwrap();
        assert_eq!(p.degree(), 2);
        // z^2 - x + x^2 - x^3 + x^4
        let a0 = &p.coeffs()[0];
        let w = vars(&["x"]);
        let expect = S::from_terms(&w, (1..5).map(|k| (vec![k], Rational::from(if k % 2 == 1 { -1 } else { 1 }))), Some(5));
        assert_eq!(a0, &expect);
        assert!(p.coeffs()[1].is_zero());
        assert!(u.mul(&p.to_series()).eq_mod_prec(&f.truncate(5)));
        assert!(u.eq_mod_prec(&one.add(&x)));
    }

    #[test]
    fn prepare_degree_one() {
        let v = vars(&["z"]);
        let z = S::var(&v, 0);
        let f = z.add(&z.mul(&z));
        let (u, p) = weierstrass_prepare(&f, 0, 6).unwrap();
        assert_eq!(p.degree(), 1);
        assert!(p.coeffs()[0].is_zero());
        assert!(u.eq_mod_prec(&S::one(&v).add(&z)));
    }

    #[test]
    fn prepare_pure_power_is_exact() {
        let v = vars(&["x", "z"]);
        let z = S::var(&v, 1);
        let (u, p) = weierstrass_prepare(&z.mul(&z), 1, 6).unwrap();
        assert!(u.is_exact() && u.constant_term().is_one());
        assert_eq!(p.degree(), 2);
        assert!(p.provenance().is_exact());
    }

    #[test]
    fn not_regular() {
        let v = vars(&["x", "z"]);
        let f = S::var(&v, 0).mul(&S::var(&v, 1));
        assert!(matches!(weierstrass_prepare(&f, 1, 6), Err(Error::NotRegular { .. })));
    }

    #[test]
    fn monomial_unit_examples() {
        let v = vars(&["x", "t"]);
        let (x, t) = (S::var(&v, 0), S::var(&v, 1));
        let four = Rational::from(4);
        let d1 = x.pow(3).scale(&four.neg());
        let r1 = monomial_unit_decompose(&d1, 0).unwrap();
        assert_eq!((r1.m, r1.is_unit), (3, true));
        let d2 = x.pow(2).mul(&x.add(&t)).scale(&four);
        let r2 = monomial_unit_decompose(&d2, 0).unwrap();
        assert_eq!((r2.m, r2.is_unit), (2, false));
        assert_eq!(r2.cofactor, x.add(&t).scale(&four));
        let d3 = S::one(&v).add(&t).mul(&x.pow(2)).scale(&four.neg());
        let r3 = monomial_unit_decompose(&d3, 0).unwrap();
        assert_eq!((r3.m, r3.is_unit), (2, true));
        assert!(r3.provenance.is_exact());
        assert_eq!(monomial_unit_decompose(&S::zero(&v), 0).unwrap_err(), Error::ZeroToPrecision);
    }
}
