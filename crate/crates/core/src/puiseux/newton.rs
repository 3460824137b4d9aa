//! Newton–Puiseux expansion of a plane curve germ over a growing tower.

use num_integer::Integer;

use super::{embed_alg, PuiseuxBranch};
use crate::coeffs::{adjoin, factor_over, AlgElem, Coeff, Field, Rational, Tower, UPoly};
use crate::error::{Error, Result};
use crate::series::{vars, Series};

/// Dense truncated univariate series: `c[i]` is the coefficient of `x^i`,
/// known for `i < c.len()`.
type Dense = Vec<AlgElem>;

fn dmul(a: &Dense, b: &Dense, len: usize) -> Dense {
    let mut r = vec![AlgElem::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                r[i + j] = r[i + j].add(&x.mul(y));
            }
        }
    }
    r
}

fn dord(a: &Dense) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}

fn fit(mut a: Dense, len: usize) -> Dense {
    a.resize(len, AlgElem::zero());
    a
}

/// Name for a new generator: `i` and `w` for the usual suspects.
fn generator_name(f: &UPoly<AlgElem>, count: &mut usize) -> String {
    let r = |n: i64| AlgElem::rational(Rational::from(n));
    if f.deg() == 2 && f.coeff(1).is_zero() && f.coeff(0) == r(1) {
        return "i".into();
    }
    if f.deg() == 2 && f.coeff(1) == r(1) && f.coeff(0) == r(1) {
        return "w".into();
    }
    *count += 1;
    format!("a{count}")
}

/// All roots of `phi` with multiplicity, extending `tower` until `phi` splits.
pub(crate) fn split_roots(phi: &UPoly<AlgElem>, tower: &mut Tower, count: &mut usize) -> Result<Vec<(AlgElem, u32)>> {
    loop {
        let factors = factor_over(tower, &phi.monic());
        match factors.iter().find(|(f, _)| f.deg() > 1) {
            None => {
                return Ok(factors.into_iter().map(|(f, m)| (f.coeff(0).neg(), m)).collect());
            }
            Some((f, _)) => {
                let name = generator_name(f, count);
                let out = adjoin(tower, f, &name)?;
                *tower = out.tower;
            }
        }
    }
}

/// One branch relative to the current level: `x = u^q`, `y = Y(u)`.
struct RawBranch {
    q: u64,
    y: Dense,
}

struct Ctx<'a> {
    tower: &'a mut Tower,
    count: usize,
    max_len: usize,
}

/// Simple root of `G` with `G_1(0) != 0` by Newton iteration.
fn simple_root(g: &[Dense], len: usize) -> Result<Dense> {
    let mut y: Dense = vec![AlgElem::zero(); len];
    let eval = |y: &Dense| -> (Dense, Dense) {
        // Horner for G(y) and G'(y)
        let mut v = vec![AlgElem::zero(); len];
        let mut dv = vec![AlgElem::zero(); len];
        for a in g.iter().rev() {
            dv = dmul(&dv, y, len);
            for (k, c) in v.iter().enumerate() {
                dv[k] = dv[k].add(c);
            }
            v = dmul(&v, y, len);
            for (k, c) in a.iter().enumerate().take(len) {
                v[k] = v[k].add(c);
            }
        }
        (v, dv)
    };
    let mut k = 1;
    loop {
        let (v, dv) = eval(&y);
        if v.iter().all(|c| c.is_zero()) {
            return Ok(y);
        }
        if k > 2 * len + 2 {
            return Err(Error::PrecisionExhausted("Newton iteration for a simple root".into()));
        }
        // y -= v / dv
        let inv = Series::from_terms(&vars(&["x"]), dv.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())), Some(len as u32))
            .invert_unit(len as u32)?;
        let inv: Dense = (0..len).map(|i| inv.coeff(&[i as u32])).collect();
        let d = dmul(&v, &inv, len);
        for (i, c) in d.into_iter().enumerate() {
            y[i] = y[i].sub(&c);
        }
        k += 1;
    }
}

/// Roots of positive order of `G = sum a_j y^j` (coefficients known to `len` terms).
fn expand(ctx: &mut Ctx, g: Vec<Dense>, len: usize) -> Result<Vec<RawBranch>> {
    let mut g = g;
    let mut out = Vec::new();
    // number of roots of positive order
    let Some(r) = g.iter().position(|a| !a[0].is_zero()) else {
        return Err(Error::PrecisionExhausted("no unit coefficient in y".into()));
    };
    if r == 0 {
        return Ok(out);
    }
    // root y = 0 (to precision)
    if dord(&g[0]).is_none() {
        if r >= 2 && dord(&g[1]).is_none() {
            return Err(Error::NotReduced);
        }
        out.push(RawBranch { q: 1, y: vec![AlgElem::zero(); len] });
        g.remove(0);
        out.extend(expand(ctx, g, len)?);
        return Ok(out);
    }
    // lower convex hull of (j, ord a_j), j = 0..=r
    let pts: Vec<(usize, usize)> = (0..=r).filter_map(|j| dord(&g[j]).map(|o| (j, o))).collect();
    let mut hull = vec![pts[0]];
    for &p in &pts[1..] {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a-p
            let cross = (b.0 as i64 - a.0 as i64) * (p.1 as i64 - a.1 as i64) - (b.1 as i64 - a.1 as i64) * (p.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut edges: Vec<((usize, usize), (usize, usize))> = hull.windows(2).map(|w| (w[0], w[1])).collect();
    // increasing slope p/q
    edges.sort_by(|a, b| {
        let sa = ((a.0 .1 - a.1 .1) as u64, (a.1 .0 - a.0 .0) as u64);
        let sb = ((b.0 .1 - b.1 .1) as u64, (b.1 .0 - b.0 .0) as u64);
        (sa.0 * sb.1).cmp(&(sb.0 * sa.1))
    });
    for ((j1, o1), (j2, o2)) in edges {
        let num = (o1 - o2) as u64;
        let den = (j2 - j1) as u64;
        let gg = num.gcd(&den);
        let (p, q) = (num / gg, den / gg);
        // characteristic polynomial on the edge
        let mut cs = vec![AlgElem::zero(); j2 - j1 + 1];
        for (j, a) in g.iter().enumerate().take(j2 + 1).skip(j1) {
            let o = dord(a);
            // on the edge: o*q + j*p == o1*q + j1*p
            if let Some(o) = o {
                if (o as u64) * q + (j as u64) * p == (o1 as u64) * q + (j1 as u64) * p {
                    cs[j - j1] = a[o].clone();
                }
            }
        }
        let phi = UPoly::new(cs);
        let roots = split_roots(&phi, ctx.tower, &mut ctx.count)?;
        let m = (o1 as u64) * q + (j1 as u64) * p;
        for (c, mu) in roots {
            // G1(x1, y1) = G(x1^q, x1^p (c + y1)) / x1^m
            let len1 = ((q as usize) * len).saturating_sub(m as usize).clamp(1, ctx.max_len);
            let deg = g.len() - 1;
            let mut g1: Vec<Dense> = vec![vec![AlgElem::zero(); len1]; deg + 1];
            let cpow: Vec<AlgElem> = (0..=deg).map(|k| c.pow(k as u32)).collect();
            for (j, a) in g.iter().enumerate() {
                for (i, aji) in a.iter().enumerate() {
                    if aji.is_zero() {
                        continue;
                    }
                    let e = (q as i64) * (i as i64) + (j as i64) * (p as i64) - m as i64;
                    if e < 0 {
                        return Err(Error::DivisibilityFailure("point below the Newton polygon".into()));
                    }
                    if e as usize >= len1 {
                        continue;
                    }
                    // (c + y1)^j = sum_k binom(j,k) c^(j-k) y1^k
                    let mut binom = Rational::from(1);
                    for k in 0..=j {
                        let t = aji.mul(&cpow[j - k]).mul(&AlgElem::rational(binom.clone()));
                        g1[k][e as usize] = g1[k][e as usize].add(&t);
                        binom = binom.mul(&Rational::new((j - k) as i64, (k + 1) as i64));
                    }
                }
            }
            let y1s: Vec<RawBranch> = if mu == 1 {
                vec![RawBranch { q: 1, y: simple_root(&g1, len1)? }]
            } else {
                expand(ctx, g1, len1)?
            };
            for b in y1s {
                // x = u^(q q1), y = u^(p q1) (c + Y1(u))
                let shift = (p * b.q) as usize;
                let ylen = b.y.len() + shift;
                let mut y = vec![AlgElem::zero(); ylen];
                y[shift] = c.clone();
                for (i, v) in b.y.into_iter().enumerate() {
                    y[i + shift] = y[i + shift].add(&v);
                }
                out.push(RawBranch { q: q * b.q, y });
            }
        }
    }
    Ok(out)
}

/// Newton–Puiseux branches of `g(x, y)`, a polynomial monic in `y` of
/// positive-order roots, to `x`-precision `n_prec`.
///
/// `g` has the variables `[x, y]`. Roots are returned on a common
/// ramification `x = u^n` as series in `u`, in a deterministic order.
pub fn newton_puiseux<F: Field>(g: &Series<F>, n_prec: u32, tower: &mut Tower) -> Result<Vec<PuiseuxBranch>> {
    if g.nvars() != 2 {
        return Err(Error::VariableMismatch("newton_puiseux expects variables (x, y)".into()));
    }
    let g = embed_alg(g)?;
    let d = g.degree_in(1).unwrap_or(0);
    let len = n_prec as usize + 1;
    let coeffs: Vec<Dense> = (0..=d)
        .map(|j| {
            let s = g.coeff_of(1, j);
            fit((0..len).map(|i| s.coeff(&[i as u32])).collect(), len)
        })
        .collect();
    let mut ctx = Ctx { tower, count: 0, max_len: 64 * len };
    let raw = expand(&mut ctx, coeffs, len)?;
    if raw.len() != d as usize {
        return Err(Error::PrecisionExhausted(format!("found {} of {} branches", raw.len(), d)));
    }
    let n = raw.iter().fold(1u64, |acc, b| acc.lcm(&b.q));
    let uv = vars(&["u"]);
    Ok(raw
        .into_iter()
        .map(|b| {
            let k = n / b.q;
            let prec = (b.y.len() as u64 * k) as u32;
            let s = Series::from_terms(
                &uv,
                b.y.into_iter().enumerate().map(|(i, c)| (vec![(i as u64 * k) as u32], c)),
                Some(prec),
            );
            PuiseuxBranch { ramification_n: n as u32, series: s, multiplicity: 1 }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational;

    fn branches(s: &str) -> (Vec<PuiseuxBranch>, Tower) {
        let g = parse_rational(s, &vars(&["x", "y"])).unwrap();
        let mut t: Tower = None;
        (newton_puiseux(&g, 12, &mut t).unwrap(), t)
    }

    fn r(n: i64) -> AlgElem {
        AlgElem::rational(Rational::from(n))
    }

    #[test]
    fn cusp() {
        let (b, _) = branches("y^2 - x^3");
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].ramification_n, 2);
        let mut lead: Vec<AlgElem> = b.iter().map(|x| x.series.coeff(&[3])).collect();
        lead.sort_by(|a, b| a.cmp_canonical(b));
        assert_eq!(lead, vec![r(-1), r(1)]);
        assert!(b.iter().all(|x| x.series.order() == Some(3) && x.series.len() == 1));
    }

    #[test]
    fn node() {
        let (b, _) = branches("y^2 - x^2");
        assert_eq!(b[0].ramification_n, 1);
        assert!(b.iter().all(|x| x.series.len() == 1 && x.series.order() == Some(1)));
    }

    #[test]
    fn e6_type_cusp() {
        let (b, t) = branches("y^3 - x^2");
        assert_eq!(b[0].ramification_n, 3);
        assert!(t.is_some());
        for x in &b {
            let c = x.series.coeff(&[2]);
            assert_eq!(c.pow(3), r(1));
            assert_eq!(x.series.len(), 1);
        }
        assert_ne!(b[1].series.coeff(&[2]), b[2].series.coeff(&[2]));
    }

    #[test]
    fn cone_discriminant() {
        let (b, t) = branches("y^2 + x^2");
        assert_eq!(t.as_ref().unwrap().name(), "i");
        assert_eq!(b.len(), 2);
    }
}
