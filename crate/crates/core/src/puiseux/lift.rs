use std::sync::Arc;

use super::{embed_alg, PuiseuxBranch};
use crate::coeffs::{AlgElem, Coeff, Field};
use crate::elim::discriminant_locus;
use crate::error::{Error, ObstructionKind, Result};
use crate::series::{monomial_unit_decompose, Series, Vars};

fn param_degree(e: &[u32]) -> u32 {
    e[1..].iter().sum()
}

/// Keep terms of total degree `< w` and parameter degree `<= k`.
fn clip(s: &Series<AlgElem>, w: u32, k: u32) -> Series<AlgElem> {
    Series::from_terms(
        s.vars(),
        s.terms().filter(|(e, _)| e.iter().sum::<u32>() < w && param_degree(e) <= k).map(|(e, c)| (e.clone(), c.clone())),
        Some(s.prec().map_or(w, |p| p.min(w))),
    )
}

fn horner(a: &[Series<AlgElem>], y: &Series<AlgElem>, w: u32, k: u32) -> Series<AlgElem> {
    let mut acc = Series::zero(y.vars()).with_prec(Some(w));
    for c in a.iter().rev() {
        acc = clip(&acc.mul(y), w, k).add(c);
        acc = clip(&acc, w, k);
    }
    acc
}

fn obstruction<F: Field>(g: &Series<F>, degree: usize, n: u32) -> Error {
    let kind = match discriminant_locus(g, 1, n, false).and_then(|d| monomial_unit_decompose(&d.value, 0)) {
        Ok(mu) if mu.is_unit => ObstructionKind::PrecisionInsufficient,
        _ => ObstructionKind::NotEquisingular,
    };
    Error::LiftObstruction { kind, degree }
}

/// Lift branches of `g(x, y, 0)` to roots of `g(u^n, y, t)`.
///
/// `g` has the variables `(x, y, t_1, ..., t_r)`. The lift is graded by
/// total parameter degree: the degree-`k` part of the residual is divided
/// by `g_y(u^n, y_i, 0) = u^K * unit`, which must leave no negative powers
/// of `u`. The output is certified modulo total `(u, t)`-degree `n_prec`
/// (less if the input is truncated lower).
pub fn hensel_lift_parameter<F: Field>(
    branches: &[PuiseuxBranch],
    g: &Series<F>,
    n_prec: u32,
) -> Result<Vec<PuiseuxBranch>> {
    if g.nvars() < 2 {
        return Err(Error::VariableMismatch("hensel_lift_parameter expects variables (x, y, t...)".into()));
    }
    let r = g.nvars() - 2;
    let mut names = vec!["u".to_string()];
    names.extend(g.vars()[2..].iter().cloned());
    let out: Vars = Arc::new(names);
    let ga = embed_alg(g)?;
    let Some(n) = branches.first().map(|b| b.ramification_n) else {
        return Ok(Vec::new());
    };
    let d = ga.degree_in(1).unwrap_or(0);
    // A_j(u^n, t)
    let mut images: Vec<Series<AlgElem>> = vec![Series::var(&out, 0).pow(n), Series::zero(&out)];
    images.extend((0..r).map(|i| Series::var(&out, i + 1)));
    let a: Vec<Series<AlgElem>> = (0..=d)
        .map(|j| {
            let c = ga.coeff_of(1, j);
            let mut im = images.clone();
            im.remove(1);
            c.compose(&out, &im)
        })
        .collect::<Result<_>>()?;
    let a0: Vec<Series<AlgElem>> = a.iter().map(|c| clip(c, u32::MAX, 0)).collect();
    let da0: Vec<Series<AlgElem>> = a0.iter().enumerate().skip(1).map(|(j, c)| c.scale(&AlgElem::from_i64(j as i64))).collect();

    let mut lifted = Vec::with_capacity(branches.len());
    for b in branches {
        let y0 = Series::from_terms(
            &out,
            b.series.terms().map(|(e, c)| {
                let mut v = vec![0; r + 1];
                v[0] = e[0];
                (v, c.clone())
            }),
            b.series.prec(),
        );
        if r == 0 {
            lifted.push(PuiseuxBranch { series: y0, ..b.clone() });
            continue;
        }
        let p0 = y0.prec().unwrap_or(u32::MAX);
        let wide = n_prec.saturating_mul(4).max(64);
        let dy = horner(&da0, &y0, p0.min(wide), 0);
        let k_ord = dy.order_in(0).ok_or(Error::ZeroToPrecision)?;
        let unit = dy.div_var_power(0, k_ord)?;
        if !unit.is_unit() {
            return Err(Error::NotAUnit);
        }
        // corrections lose K degrees to the division by u^K; keep K spare
        let w = (n_prec + 2 * k_ord).min(p0);
        let winv = unit.truncate(w).with_prec(Some(w)).invert_unit(w)?;
        let mut y = y0.truncate(w).with_prec(Some(w));
        for k in 1..w {
            let res = horner(&a, &y, w, k);
            let rk = Series::from_terms(
                &out,
                res.terms().filter(|(e, _)| param_degree(e) == k).map(|(e, c)| (e.clone(), c.clone())),
                Some(w),
            );
            if rk.is_zero() {
                continue;
            }
            let q = rk.div_var_power(0, k_ord).map_err(|_| obstruction(g, k as usize, n_prec))?;
            let delta = clip(&q.mul(&winv), w, k);
            y = y.sub(&delta);
        }
        // a posteriori certificate: g(u^n, y, t) vanishes below degree N + K
        let res = horner(&a, &y, w, u32::MAX);
        let top = res.prec().unwrap_or(w).min(w);
        let low = res.order().unwrap_or(top).min(top);
        let cert = low.saturating_sub(k_ord).min(n_prec);
        if cert == 0 {
            return Err(Error::LiftObstruction { kind: ObstructionKind::PrecisionInsufficient, degree: 0 });
        }
        lifted.push(PuiseuxBranch { series: y.truncate(cert), ..b.clone() });
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::super::{contact_matrix, newton_puiseux, reconstruction_check};
    use super::*;
    use crate::coeffs::{Rational, Tower};
    use crate::parse::parse_rational;
    use crate::series::vars;

    fn lift(s: &str, n: u32) -> Result<Vec<PuiseuxBranch>> {
        let v = vars(&["x", "y", "t"]);
        let g = parse_rational(s, &v).unwrap();
        let g0 = g.eval_var(2, &Rational::from(0)).unwrap();
        let mut t: Tower = None;
        let b = newton_puiseux(&g0, 2 * n, &mut t)?;
        hensel_lift_parameter(&b, &g, n)
    }

    fn q(a: i64, b: i64) -> AlgElem {
        AlgElem::rational(Rational::new(a, b))
    }

    #[test]
    fn node_family() {
        let v = vars(&["x", "y", "t"]);
        let g = parse_rational("y^2 - (1+t)*x^2", &v).unwrap();
        let b = lift("y^2 - (1+t)*x^2", 10).unwrap();
        assert_eq!(b.len(), 2);
        for br in &b {
            let s = br.series.coeff(&[1, 0]);
            assert_eq!(br.series.coeff(&[1, 1]), s.mul(&q(1, 2)));
            assert_eq!(br.series.coeff(&[1, 2]), s.mul(&q(-1, 8)));
        }
        assert!(reconstruction_check(&b, &g).unwrap());
        assert_eq!(contact_matrix(&b).unwrap().k[0][1], 1);
    }

    #[test]
    fn t_free_is_unchanged() {
        let b = lift("y^2 - x^3", 8).unwrap();
        assert!(b.iter().all(|x| x.series.len() == 1));
    }

    #[test]
    fn shifted_branches() {
        // branches t*x, t*x +- x^2: chord Newton from t = 0 would leave poles
        let s = "(y - t*x)*(y - t*x - x^2)*(y - t*x + x^2)";
        let v = vars(&["x", "y", "t"]);
        let g = parse_rational(s, &v).unwrap();
        let b = lift(s, 10).unwrap();
        assert!(reconstruction_check(&b, &g).unwrap());
        let k = contact_matrix(&b).unwrap();
        assert_eq!((k.get(0, 1), k.get(0, 2), k.get(1, 2)), (2, 2, 2));
    }

    #[test]
    fn obstruction() {
        match lift("y^2 - x^2*(x+t)", 10) {
            Err(Error::LiftObstruction { kind, degree }) => {
                assert_eq!(kind, ObstructionKind::NotEquisingular);
                assert_eq!(degree, 2);
            }
            other => panic!("{other:?}"),
        }
    }
}
