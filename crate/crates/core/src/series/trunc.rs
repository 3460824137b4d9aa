use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::coeffs::{Coeff, Field};
use crate::error::{Error, Result};

/// Ordered list of variable names shared by series of one ring.
pub type Vars = Arc<Vec<String>>;

pub fn vars(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Multivariate power series truncated at total degree `prec`.
///
/// `prec == None` means the series is an exact polynomial. Terms of total
/// degree `>= prec` are unknown and never stored.
#[derive(Clone)]
pub struct Series<C: Coeff> {
    vars: Vars,
    terms: BTreeMap<Mono, C>,
    prec: Option<u32>,
}

fn min_prec(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn below(deg: u32, prec: Option<u32>) -> bool {
    prec.is_none_or(|p| deg < p)
}

impl<C: Coeff> Series<C> {
    pub fn zero(vars: &Vars) -> Self {
        Series { vars: vars.clone(), terms: BTreeMap::new(), prec: None }
    }

    pub fn constant(vars: &Vars, c: C) -> Self {
        let mut s = Series::zero(vars);
        s.insert(vec![0; vars.len()], c);
        s
    }

    pub fn one(vars: &Vars) -> Self {
        Series::constant(vars, C::one())
    }

    pub fn from_i64(vars: &Vars, n: i64) -> Self {
        Series::constant(vars, C::from_i64(n))
    }

    /// The variable with index `i`.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Series::monomial(vars, e, C::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Self {
        let i = vars.iter().position(|v| v == name).expect("unknown variable");
        Series::var(vars, i)
    }

    pub fn monomial(vars: &Vars, exp: Vec<u32>, c: C) -> Self {
        let mut s = Series::zero(vars);
        s.insert(exp, c);
        s
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, C)>, prec: Option<u32>) -> Self {
        let mut s = Series { vars: vars.clone(), terms: BTreeMap::new(), prec };
        for (e, c) in terms {
            s.insert(e, c);
        }
        s
    }

    /// Add `c * x^e`, dropping it if above precision.
    pub fn insert(&mut self, e: Vec<u32>, c: C) {
        debug_assert_eq!(e.len(), self.vars.len());
        let m = Mono(e);
        if !below(m.degree(), self.prec) || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn prec(&self) -> Option<u32> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter().map(|(m, c)| (&m.0, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(&Mono(e.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// No represented terms (the series may still be nonzero above precision).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Lower the precision to `n` (never raises it).
    pub fn truncate(&self, n: u32) -> Self {
        let prec = min_prec(self.prec, Some(n));
        Series {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| below(m.degree(), prec)).map(|(m, c)| (m.clone(), c.clone())).collect(),
            prec,
        }
    }

    /// Declare the stored terms exact (used when the data is known polynomial).
    pub fn with_prec(mut self, prec: Option<u32>) -> Self {
        if let Some(p) = prec {
            self.terms.retain(|m, _| m.degree() < p);
        }
        self.prec = prec;
        self
    }

    fn check_vars(&self, o: &Self) {
        if !Arc::ptr_eq(&self.vars, &o.vars) && self.vars != o.vars {
            panic!("{}", Error::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_vars(o);
        let mut r = self.truncate(o.prec.unwrap_or(u32::MAX));
        r.prec = min_prec(self.prec, o.prec);
        for (m, c) in &o.terms {
            r.insert(m.0.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        Series {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), prec: self.prec };
        if s.is_zero() {
            return r;
        }
        for (m, c) in &self.terms {
            let v = c.mul(s);
            if !v.is_zero() {
                r.terms.insert(m.clone(), v);
            }
        }
        r
    }

    /// Product; the precision is the smaller operand precision.
    pub fn mul(&self, o: &Self) -> Self {
        self.check_vars(o);
        self.mul_to(o, min_prec(self.prec, o.prec))
    }

    fn mul_to(&self, o: &Self, prec: Option<u32>) -> Self {
        let n = self.vars.len();
        let mut acc: HashMap<Vec<u32>, C> = HashMap::new();
        let bt: Vec<(&Mono, &C, u32)> = o.terms.iter().map(|(m, c)| (m, c, m.degree())).collect();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb, db) in &bt {
                if !below(da + db, prec) {
                    // terms of `o` are sorted by degree
                    break;
                }
                let e: Vec<u32> = (0..n).map(|i| ma.0[i] + mb.0[i]).collect();
                let v = ca.mul(cb);
                match acc.get_mut(&e) {
                    Some(x) => *x = x.add(&v),
                    None => {
                        acc.insert(e, v);
                    }
                }
            }
        }
        Series {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (Mono(e), c)).collect(),
            prec,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::one(&self.vars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Series::zero(&self.vars);
        r.prec = self.prec.map(|p| p.saturating_sub(1));
        for (m, c) in &self.terms {
            let k = m.0[i];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            r.insert(e, c.mul(&C::from_i64(k as i64)));
        }
        r
    }

    /// Minimal total degree of a represented term; `None` for no terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Order, or the precision flagged as a lower bound when nothing is represented.
    pub fn order_or_prec(&self) -> (u32, bool) {
        match self.order() {
            Some(o) => (o, true),
            None => (self.prec.unwrap_or(u32::MAX), false),
        }
    }

    /// Minimal exponent of variable `i` over represented terms.
    pub fn order_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    /// Maximal exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Lowest-degree homogeneous part.
    pub fn initial_form(&self) -> Self {
        let mut r = Series::zero(&self.vars);
        if let Some(o) = self.order() {
            for (m, c) in self.terms.iter().take_while(|(m, _)| m.degree() == o) {
                r.terms.insert(m.clone(), c.clone());
            }
        }
        r
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), prec: self.prec };
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                r.terms.insert(m.clone(), v);
            }
        }
        r
    }

    pub fn try_map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Series<D>> {
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), prec: self.prec };
        for (m, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                r.terms.insert(m.clone(), v);
            }
        }
        Ok(r)
    }

    /// Re-express in the variable list `to`; every variable of `self` that
    /// carries a nonzero exponent must occur in `to`.
    pub fn embed(&self, to: &Vars) -> Result<Self> {
        if Arc::ptr_eq(&self.vars, to) || self.vars == *to {
            let mut r = self.clone();
            r.vars = to.clone();
            return Ok(r);
        }
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| to.iter().position(|w| w == v)).collect();
        let mut r = Series { vars: to.clone(), terms: BTreeMap::new(), prec: self.prec };
        for (m, c) in &self.terms {
            let mut e = vec![0; to.len()];
            for (i, k) in m.0.iter().enumerate() {
                if *k > 0 {
                    let j = map[i].ok_or_else(|| Error::VariableMismatch(self.vars[i].clone()))?;
                    e[j] = *k;
                }
            }
            r.terms.insert(Mono(e), c.clone());
        }
        Ok(r)
    }

    /// Substitute the series `images[i]` (all in `to`) for variable `i`.
    ///
    /// Precision: a truncated input needs images of positive order, and the
    /// result is certified up to `prec * min order`; truncated images cap it
    /// at their own precision.
    pub fn compose(&self, to: &Vars, images: &[Series<C>]) -> Result<Self> {
        assert_eq!(images.len(), self.vars.len());
        let used: Vec<bool> = (0..self.vars.len()).map(|i| self.degree_in(i).unwrap_or(0) > 0).collect();
        let mut prec: Option<u32> = None;
        if let Some(p) = self.prec {
            let o = images.iter().filter_map(|s| s.order()).min().unwrap_or(u32::MAX / (p + 1));
            if o == 0 {
                return Err(Error::PrecisionExhausted(
                    "substituting a unit into a truncated series".into(),
                ));
            }
            prec = Some(p.saturating_mul(o));
        }
        for (i, s) in images.iter().enumerate() {
            if used[i] {
                if let Some(ps) = s.prec {
                    // lowest-order cofactor of x_i in self
                    prec = min_prec(prec, Some(ps));
                }
            }
        }
        let mut powers: Vec<Vec<Series<C>>> = images.iter().map(|s| vec![Series::one(to).with_prec(prec), s.clone()]).collect();
        let mut r = Series { vars: to.clone(), terms: BTreeMap::new(), prec };
        for (m, c) in &self.terms {
            let mut t = Series::constant(to, c.clone()).with_prec(prec);
            for (i, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    let next = match prec {
                        Some(p) => next.truncate(p),
                        None => next,
                    };
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize]);
                if let Some(p) = prec {
                    t = t.truncate(p);
                }
            }
            for (e, v) in t.terms {
                r.insert(e.0, v);
            }
        }
        Ok(r)
    }

    /// Substitute a constant for variable `i` and drop it from the variable list.
    pub fn eval_var(&self, i: usize, val: &C) -> Result<Self> {
        if !self.is_exact() && !val.is_zero() && self.degree_in(i).unwrap_or(0) > 0 {
            return Err(Error::PrecisionExhausted(format!(
                "evaluating {} on a truncated series",
                self.vars[i]
            )));
        }
        let mut names: Vec<String> = self.vars.as_ref().clone();
        names.remove(i);
        let to: Vars = Arc::new(names);
        let mut r = Series { vars: to, terms: BTreeMap::new(), prec: self.prec };
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(i);
            r.insert(e, c.mul(&val.pow(k)));
        }
        Ok(r)
    }

    /// Drop variable `i`, which must not occur.
    pub fn drop_var(&self, i: usize) -> Self {
        debug_assert!(self.degree_in(i).unwrap_or(0) == 0);
        self.eval_var(i, &C::zero()).expect("dropping an absent variable")
    }

    /// Coefficient of `x_i^k` as a series in the remaining variables.
    pub fn coeff_of(&self, i: usize, k: u32) -> Self {
        let mut names: Vec<String> = self.vars.as_ref().clone();
        names.remove(i);
        let mut r = Series {
            vars: Arc::new(names),
            terms: BTreeMap::new(),
            prec: self.prec.map(|p| p.saturating_sub(k)),
        };
        for (m, c) in &self.terms {
            if m.0[i] == k {
                let mut e = m.0.clone();
                e.remove(i);
                r.terms.insert(Mono(e), c.clone());
            }
        }
        r
    }

    /// Divide by `x_i^k`; every represented term must be divisible.
    pub fn div_var_power(&self, i: usize, k: u32) -> Result<Self> {
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), prec: self.prec.map(|p| p.saturating_sub(k)) };
        for (m, c) in &self.terms {
            if m.0[i] < k {
                return Err(Error::NotDivisible(format!("{} by {}^{k}", self, self.vars[i])));
            }
            let mut e = m.0.clone();
            e[i] -= k;
            r.terms.insert(Mono(e), c.clone());
        }
        Ok(r)
    }

    pub fn mul_var_power(&self, i: usize, k: u32) -> Self {
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), prec: self.prec.map(|p| p + k) };
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[i] += k;
            r.terms.insert(Mono(e), c.clone());
        }
        r
    }

    /// Equality on the terms both sides certify.
    pub fn eq_mod_prec(&self, o: &Self) -> bool {
        let p = min_prec(self.prec, o.prec);
        let d = self.sub(o);
        d.terms.keys().all(|m| !below(m.degree(), p))
    }

    pub fn cmp_canonical(&self, o: &Self) -> Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = o.terms.iter().collect();
        a.len().cmp(&b.len()).then_with(|| {
            for ((ma, ca), (mb, cb)) in a.iter().zip(&b) {
                let c = ma.cmp(mb).then_with(|| ca.cmp_canonical(cb));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }

    /// Render with the ring's variable names, highest terms first.
    pub fn to_string_terms(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { self.vars[i].clone() } else { format!("{}^{k}", self.vars[i]) })
                .collect();
            let cs = c.to_string();
            let compound = cs[1..].contains(['+', '-', ' ', '/']);
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let term = if mono.is_empty() {
                if compound && !out.is_empty() { format!("({body})") } else { body }
            } else if body == "1" {
                mono.join("*")
            } else if compound {
                format!("({body})*{}", mono.join("*"))
            } else {
                format!("{body}*{}", mono.join("*"))
            };
            if out.is_empty() {
                out = if neg { format!("-{term}") } else { term };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, o: &Self) -> bool {
        self.vars == o.vars && self.prec == o.prec && self.terms == o.terms
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_terms())?;
        if let Some(p) = self.prec {
            write!(f, " + O({p})")?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> Series<F> {
    /// Inverse of a unit modulo total degree `n` (Newton iteration).
    pub fn invert_unit(&self, n: u32) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let n = self.prec.map_or(n, |p| p.min(n));
        let f = self.truncate(n);
        let mut x = Series::constant(&self.vars, c0.inv()).with_prec(Some(1.min(n)));
        let mut k = 1;
        let two = Series::from_i64(&self.vars, 2);
        while k < n {
            k = (2 * k).min(n);
            let fx = f.truncate(k).mul(&x.clone().with_prec(Some(k))).truncate(k);
            x = x.with_prec(Some(k)).mul(&two.sub(&fx)).truncate(k);
        }
        Ok(x.with_prec(Some(n)))
    }

    /// `m`-th root of a unit modulo degree `n` with the constant root `r0`
    /// (so `r0^m = f(0)`), by the binomial series.
    pub fn unit_root_with(&self, m: u32, n: u32, r0: &F) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotAUnit);
        }
        debug_assert!(r0.pow(m) == c0);
        let n = self.prec.map_or(n, |p| p.min(n));
        let g = self.truncate(n).scale(&c0.inv()).sub(&Series::one(&self.vars)).truncate(n);
        let mut acc = Series::one(&self.vars).with_prec(Some(n));
        let mut gk = Series::one(&self.vars).with_prec(Some(n));
        // binom(1/m, k)
        let alpha = F::from_rational(&crate::coeffs::Rational::new(1, m as i64));
        let mut binom = F::one();
        for k in 1..n {
            gk = gk.mul(&g).truncate(n);
            if gk.is_zero() {
                break;
            }
            let kk = F::from_i64(k as i64);
            binom = binom.mul(&alpha.sub(&F::from_i64(k as i64 - 1))).div(&kk);
            acc = acc.add(&gk.scale(&binom));
        }
        Ok(acc.scale(r0))
    }

    /// Exact quotient of polynomials (multivariate division with grlex
    /// leading terms); for a unit divisor falls back to multiplication by the inverse.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        self.check_vars(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !(self.is_exact() && d.is_exact()) {
            if d.is_unit() {
                let p = min_prec(self.prec, d.prec).unwrap();
                return Ok(self.mul(&d.invert_unit(p)?).truncate(p));
            }
            // divide out the lowest monomial-free part where possible
            return Err(Error::NotDivisible(format!("{self} by non-unit {d}")));
        }
        let (lm, lc) = d.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lcinv = lc.inv();
        let n = self.vars.len();
        let mut rem = self.terms.clone();
        let mut q = Series::zero(&self.vars);
        while let Some((rm, rc)) = rem.pop_last() {
            if rm.0.iter().zip(&lm.0).any(|(a, b)| a < b) {
                return Err(Error::NotDivisible(format!("{self} by {d}")));
            }
            let e: Vec<u32> = rm.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
            let t = rc.mul(&lcinv);
            // rem -= t * x^e * (d - lead)
            for (dm, dc) in d.terms.iter().rev().skip(1) {
                let m = Mono((0..n).map(|i| dm.0[i] + e[i]).collect());
                let v = t.mul(dc);
                match rem.get_mut(&m) {
                    Some(x) => {
                        *x = x.sub(&v);
                        if x.is_zero() {
                            rem.remove(&m);
                        }
                    }
                    None => {
                        rem.insert(m, v.neg());
                    }
                }
            }
            q.terms.insert(Mono(e), t);
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Rational;

    type S = Series<Rational>;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn product_and_derivative() {
        let v = vars(&["x", "z"]);
        let x = S::var(&v, 0);
        let one = S::one(&v);
        let p = one.add(&x).mul(&one.sub(&x));
        assert_eq!(p, one.sub(&x.mul(&x)));
        let z = S::var(&v, 1);
        let f = z.mul(&z).sub(&x);
        assert_eq!(f.derivative(1), z.scale(&Rational::from(2)));
    }

    #[test]
    fn geometric_inverse() {
        let v = vars(&["x"]);
        let x = S::var(&v, 0);
        let inv = S::one(&v).add(&x).invert_unit(4).unwrap();
        let expect = S::from_terms(&v, (0..4).map(|k| (vec![k], Rational::from(if k % 2 == 0 { 1 } else { -1 }))), Some(4));
        assert_eq!(inv, expect);
        assert_eq!(S::var(&v, 0).invert_unit(4).unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn binomial_square_root() {
        let v = vars(&["t"]);
        let f = S::one(&v).add(&S::var(&v, 0));
        let s = f.unit_root_with(2, 3, &Rational::one()).unwrap();
        let expect = S::from_terms(&v, [(vec![0], r(1, 1)), (vec![1], r(1, 2)), (vec![2], r(-1, 8))], Some(3));
        assert_eq!(s, expect);
    }

    #[test]
    fn shear_substitution() {
        let v = vars(&["x", "y", "z"]);
        let w = vars(&["X", "Y", "Z", "b"]);
        let (x, y, z) = (S::var(&v, 0), S::var(&v, 1), S::var(&v, 2));
        let f = z.mul(&z).sub(&x.mul(&y).mul(&y));
        let (bx, by, bz, bb) = (S::var(&w, 0), S::var(&w, 1), S::var(&w, 2), S::var(&w, 3));
        let g = f.compose(&w, &[bx.clone(), by.add(&bb.mul(&bz)), bz.clone()]).unwrap();
        let yb = by.add(&bb.mul(&bz));
        assert_eq!(g, bz.mul(&bz).sub(&bx.mul(&yb).mul(&yb)));
    }

    #[test]
    fn exact_division() {
        let v = vars(&["x", "y"]);
        let (x, y) = (S::var(&v, 0), S::var(&v, 1));
        let a = x.add(&y).mul(&x.sub(&y.mul(&y)));
        assert_eq!(a.div_exact(&x.add(&y)).unwrap(), x.sub(&y.mul(&y)));
        assert!(a.div_exact(&x.add(&S::one(&v))).is_err());
    }
}
