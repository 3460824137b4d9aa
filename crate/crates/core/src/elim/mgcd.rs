//! Multivariate gcd and squarefree reduction of exact polynomials
//! (recursive primitive remainder sequences).

use std::any::Any;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coeffs::{Field, Rational};
use crate::series::{lift, Series};

/// Coefficient of `x_v^k`, keeping `x_v` in the variable list.
pub fn coeff_keep<F: Field>(a: &Series<F>, v: usize, k: u32) -> Series<F> {
    Series::from_terms(
        a.vars(),
        a.terms().filter(|(e, _)| e[v] == k).map(|(e, c)| {
            let mut e = e.clone();
            e[v] = 0;
            (e, c.clone())
        }),
        a.prec(),
    )
}

/// Variable to recurse on: the one of smallest degree occurring in both,
/// else any variable that occurs at all.
fn pick_var<F: Field>(a: &Series<F>, b: &Series<F>) -> Option<usize> {
    let deg = |s: &Series<F>, i: usize| s.degree_in(i).unwrap_or(0);
    (0..a.nvars())
        .filter(|&i| deg(a, i) > 0 && deg(b, i) > 0)
        .min_by_key(|&i| deg(a, i).max(deg(b, i)))
        .or_else(|| (0..a.nvars()).find(|&i| deg(a, i) > 0 || deg(b, i) > 0))
}

/// Scale so the grlex-leading coefficient is 1.
pub fn normalize<F: Field>(a: &Series<F>) -> Series<F> {
    match a.terms().next_back() {
        Some((_, c)) => a.scale(&c.inv()),
        None => a.clone(),
    }
}

fn content<F: Field>(a: &Series<F>, v: usize) -> Series<F> {
    let d = a.degree_in(v).unwrap_or(0);
    let mut g = Series::zero(a.vars());
    for k in 0..=d {
        let c = coeff_keep(a, v, k);
        if !c.is_zero() {
            g = gcd(&g, &c);
            if g.len() == 1 && g.constant_term().is_one() {
                break;
            }
        }
    }
    g
}

fn prem<F: Field>(a: &Series<F>, b: &Series<F>, v: usize) -> Series<F> {
    let db = b.degree_in(v).unwrap_or(0);
    let lb = coeff_keep(b, v, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v).unwrap_or(0) >= db {
        let dr = r.degree_in(v).unwrap();
        let lr = coeff_keep(&r, v, dr);
        r = r.mul(&lb).sub(&lr.mul(&b.mul_var_power(v, dr - db)));
    }
    r
}

fn primitive<F: Field>(a: &Series<F>, v: usize) -> Series<F> {
    let c = content(a, v);
    a.div_exact(&c).expect("content divides")
}

/// Greatest common divisor of exact polynomials, normalized.
pub fn gcd<F: Field>(a: &Series<F>, b: &Series<F>) -> Series<F> {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if let (Some(ra), Some(rb)) = (
        (a as &dyn Any).downcast_ref::<Series<Rational>>(),
        (b as &dyn Any).downcast_ref::<Series<Rational>>(),
    ) {
        if let Some(g) = heu_gcd_q(ra, rb) {
            let g = normalize(&g);
            return (&g as &dyn Any).downcast_ref::<Series<F>>().expect("same type").clone();
        }
    }
    let v = match pick_var(a, b) {
        Some(v) => v,
        None => return Series::one(a.vars()),
    };
    if a.degree_in(v).unwrap_or(0) == 0 {
        return gcd(a, &content(b, v));
    }
    if b.degree_in(v).unwrap_or(0) == 0 {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(v).unwrap_or(0) == 0 {
            break Series::one(a.vars());
        }
        p = q;
        q = primitive(&r, v);
    };
    normalize(&c.mul(&primitive(&g, v)))
}

fn integer_content(a: &Series<Rational>) -> BigInt {
    a.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

/// Scale to integer coefficients.
fn to_integral(a: &Series<Rational>) -> Series<Rational> {
    let l = a.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    a.scale(&Rational::from_int(l))
}

fn max_norm(a: &Series<Rational>) -> BigInt {
    a.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// Heuristic gcd over the rationals (evaluation at a large integer and
/// `xi`-adic reconstruction); `None` when it gives up.
fn heu_gcd_q(a: &Series<Rational>, b: &Series<Rational>) -> Option<Series<Rational>> {
    if !(a.is_exact() && b.is_exact()) {
        return None;
    }
    heu_gcd_z(&to_integral(a), &to_integral(b))
}

/// Gcd of integer polynomials with its integer content, positive leading coefficient.
fn heu_gcd_z(a: &Series<Rational>, b: &Series<Rational>) -> Option<Series<Rational>> {
    let vars = a.vars().clone();
    if a.is_zero() || b.is_zero() {
        let g = if a.is_zero() { b } else { a };
        return Some(positive_lead(g));
    }
    let ca = integer_content(a);
    let cb = integer_content(b);
    let c = ca.gcd(&cb);
    let Some(v) = (0..a.nvars()).rev().find(|&i| a.degree_in(i).unwrap_or(0) > 0 || b.degree_in(i).unwrap_or(0) > 0) else {
        return Some(Series::constant(&vars, Rational::from_int(c)));
    };
    let a = a.scale(&Rational::new(1, ca));
    let b = b.scale(&Rational::new(1, cb));
    let mut xi: BigInt = BigInt::from(2) * max_norm(&a).min(max_norm(&b)) + 29;
    for _ in 0..6 {
        let xv = Rational::from_int(xi.clone());
        let ea = lift(&a.eval_var(v, &xv).ok()?, &vars, v);
        let eb = lift(&b.eval_var(v, &xv).ok()?, &vars, v);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(h) = heu_gcd_z(&ea, &eb) {
                let g = interpolate(&h, v, &xi);
                let gc = integer_content(&g);
                if !gc.is_zero() {
                    let g = positive_lead(&g.scale(&Rational::new(1, gc)));
                    if a.div_exact(&g).is_ok() && b.div_exact(&g).is_ok() {
                        return Some(g.scale(&Rational::from_int(c)));
                    }
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn positive_lead(g: &Series<Rational>) -> Series<Rational> {
    match g.terms().next_back() {
        Some((_, c)) if c.signum() < 0 => g.neg(),
        _ => g.clone(),
    }
}

/// Symmetric `xi`-adic expansion of every coefficient into powers of `x_v`.
fn interpolate(h: &Series<Rational>, v: usize, xi: &BigInt) -> Series<Rational> {
    let half = xi / 2;
    let mut out = Series::zero(h.vars());
    for (e, c) in h.terms() {
        let mut n = c.numer().clone();
        let mut k = 0u32;
        while !n.is_zero() {
            let mut d = n.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            if !d.is_zero() {
                let mut e2 = e.clone();
                e2[v] += k;
                out.insert(e2, Rational::from_int(d.clone()));
            }
            n = (n - d) / xi;
            k += 1;
        }
    }
    out
}

/// Squarefree part: `reduce(content) * pp / gcd(pp, d pp / dv)` for the
/// primitive part `pp` in a variable `v` of least positive degree.
pub fn reduce<F: Field>(d: &Series<F>) -> Series<F> {
    let Some(v) = (0..d.nvars()).filter(|&i| d.degree_in(i).unwrap_or(0) > 0).min_by_key(|&i| d.degree_in(i)) else {
        return d.clone();
    };
    let c = content(d, v);
    let pp = d.div_exact(&c).expect("content divides");
    let g = gcd(&pp, &pp.derivative(v));
    let r = pp.div_exact(&g).expect("gcd divides");
    reduce(&c).mul(&r)
}

/// Whether an exact polynomial is squarefree.
pub fn is_reduced<F: Field>(d: &Series<F>) -> bool {
    let r = reduce(d);
    r.total_degree() == d.total_degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Rational;
    use crate::series::vars;

    type S = Series<Rational>;

    #[test]
    fn gcd_of_products() {
        let v = vars(&["x", "y", "t"]);
        let (x, y, t) = (S::var(&v, 0), S::var(&v, 1), S::var(&v, 2));
        let one = S::one(&v);
        let common = x.add(&y.mul(&t)).add(&one);
        let a = common.mul(&x.sub(&t)).mul(&y);
        let b = common.mul(&x.add(&y)).mul(&y).mul(&y);
        assert_eq!(gcd(&a, &b), normalize(&common.mul(&y)));
    }

    #[test]
    fn reduce_umbrella_discriminant() {
        let v = vars(&["X", "Y"]);
        let (x, y) = (S::var(&v, 0), S::var(&v, 1));
        let d = x.mul(&y).mul(&y).scale(&Rational::from(4));
        assert_eq!(reduce(&d), x.mul(&y).scale(&Rational::from(4)));
        assert!(!is_reduced(&d));
        let node = x.mul(&x).add(&y.mul(&y));
        assert_eq!(reduce(&node), node);
    }
}
