use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{contact_matrix, embed_alg, hensel_lift_parameter, newton_puiseux, unit_order, ContactMatrix, PuiseuxBranch};
use crate::coeffs::{AlgElem, Coeff, Field, Tower};
use crate::elim::{resultant, subresultant};
use crate::equising::{reduced_discriminant, reduced_locus};
use crate::error::{Error, Result};
use crate::series::{weierstrass_prepare, z_order, Series, Vars};

/// `contour = {F, F_Z}` and `singular = {F, F_Z, F_Y}` for a shear family
/// `F(X, Y, Z, b, t)`.
#[derive(Debug, Clone)]
pub struct ContourSystem<F: Field> {
    pub contour: Vec<Series<F>>,
    pub singular: Vec<Series<F>>,
}

pub fn contour_and_singular_equations<F: Field>(sheared: &Series<F>) -> ContourSystem<F> {
    let fz = sheared.derivative(2);
    let fy = sheared.derivative(1);
    ContourSystem { contour: vec![sheared.clone(), fz.clone()], singular: vec![sheared.clone(), fz, fy] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WedgeKind {
    Polar,
    Singular,
}

/// One contour component of the shear family over a branch of its
/// discriminant, in the variables `(u, b, t...)`.
#[derive(Debug, Clone)]
pub struct PolarWedge {
    pub kind: WedgeKind,
    pub ramification_n: u32,
    /// `u`-order of `(z(u,b,t) - z(u,0,t)) / b`; none for singular wedges.
    pub m_i: Option<u32>,
    pub big_y: Series<AlgElem>,
    pub big_z: Series<AlgElem>,
    pub y: Series<AlgElem>,
    pub z: Series<AlgElem>,
    pub phi: Series<AlgElem>,
    pub psi: Series<AlgElem>,
}

impl Serialize for PolarWedge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PolarWedge", 10)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("n", &self.ramification_n)?;
        st.serialize_field("m", &self.m_i)?;
        st.serialize_field("Y", &self.big_y.to_string())?;
        st.serialize_field("Z", &self.big_z.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.serialize_field("z", &self.z.to_string())?;
        st.serialize_field("phi", &self.phi.to_string())?;
        st.serialize_field("psi", &self.psi.to_string())?;
        st.serialize_field("tower", &super::tower_names(&self.y))?;
        st.end()
    }
}

/// Part of `s` free of variable `i`, kept in the same ring.
fn at_zero(s: &Series<AlgElem>, i: usize) -> Series<AlgElem> {
    Series::from_terms(s.vars(), s.terms().filter(|(e, _)| e[i] == 0).map(|(e, c)| (e.clone(), c.clone())), s.prec())
}

fn branch_images(wv: &Vars, n: u32, y: &Series<AlgElem>, z: Option<&Series<AlgElem>>, nparams: usize) -> Vec<Series<AlgElem>> {
    let mut im = vec![Series::var(wv, 0).pow(n), y.clone()];
    if let Some(z) = z {
        im.push(z.clone());
    }
    im.extend((0..nparams).map(|i| Series::var(wv, i + 1)));
    im
}

fn classify(
    f: &Series<AlgElem>,
    wv: &Vars,
    n: u32,
    big_y: &Series<AlgElem>,
    big_z: &Series<AlgElem>,
) -> Result<(WedgeKind, bool)> {
    let np = f.nvars() - 3;
    let fy = f.derivative(1).compose(wv, &branch_images(wv, n, big_y, Some(big_z), np))?;
    if !fy.is_zero() {
        return Ok((WedgeKind::Polar, false));
    }
    if f.is_exact() {
        let yp = big_y.clone().with_prec(None);
        let zp = big_z.clone().with_prec(None);
        let im = branch_images(wv, n, &yp, Some(&zp), np);
        let sys = contour_and_singular_equations(f);
        let mut all = true;
        for e in &sys.singular {
            if !e.compose(wv, &im)?.is_zero() {
                all = false;
                break;
            }
        }
        if all {
            return Ok((WedgeKind::Singular, true));
        }
    }
    Err(Error::ClassificationAmbiguous)
}

/// Reduced discriminant locus of `F` in `Z`, in the variables `(X, Y, b, t...)`.
///
/// For polynomial `F` the full resultant `Res_Z(F, F_Z)` is computed exactly
/// and reduced; it differs from the Weierstrass discriminant by the
/// discriminant of the far-root cofactor, which is accepted as a unit when
/// the `Y`-order agrees with a low-precision truncated computation.
fn wedge_locus(f: &Series<AlgElem>, work: u32) -> Result<Series<AlgElem>> {
    if f.is_exact() {
        let d = f.degree_in(2).unwrap_or(0);
        let base = {
            let mut v = f.vars().as_ref().clone();
            v.remove(2);
            std::sync::Arc::new(v)
        };
        let c: Vec<Series<AlgElem>> = (0..=d).map(|j| f.coeff_of(2, j)).collect();
        let dc: Vec<Series<AlgElem>> = c.iter().enumerate().skip(1).map(|(j, a)| a.scale(&AlgElem::from_i64(j as i64))).collect();
        let res = resultant(&c, &dc, &base);
        if !res.is_zero() {
            let exact = reduced_locus(&res, 1, work)?;
            let low = reduced_discriminant(f, 2, 1, work.min(8))?;
            if z_order(&exact, 1) == z_order(&low, 1) {
                return Ok(exact);
            }
        }
    }
    reduced_discriminant(f, 2, 1, work + 8)
}

/// Polar wedges of the shear family `F(X, Y, Z, b, t...)`.
///
/// Branches `Y_i(u, b, t)` of the reduced discriminant are computed by
/// Newton–Puiseux at `b = t = 0` and lifted in `(b, t)`. On each branch the
/// double root of `F` in `Z` is read off the first subresultant
/// `S_1(F, F_Z) = s_1 Z + s_0` as `Z_i = -s_0 / s_1`.
pub fn parameterize_wedges<F: Field>(sheared: &Series<F>, n_prec: u32, tower: &mut Tower) -> Result<Vec<PolarWedge>> {
    if sheared.nvars() < 4 {
        return Err(Error::VariableMismatch("a shear family has variables (x, y, z, b, t...)".into()));
    }
    let f = embed_alg(sheared)?;
    if f.order().ok_or(Error::ZeroToPrecision)? <= 1 {
        return Ok(Vec::new());
    }
    let np = f.nvars() - 3;
    let work = n_prec + 4;
    let dred = wedge_locus(&f, work)?;
    let (_, gp) = weierstrass_prepare(&dred, 1, work)?;
    let g = gp.to_series();
    let mut g0 = g.clone();
    for i in (2..g.nvars()).rev() {
        g0 = g0.eval_var(i, &AlgElem::zero())?;
    }
    let br0 = newton_puiseux(&g0, 2 * work, tower)?;
    let ys: Vec<PuiseuxBranch> = hensel_lift_parameter(&br0, &g, work)?;
    let Some(n) = ys.first().map(|b| b.ramification_n) else {
        return Ok(Vec::new());
    };
    let wv = ys[0].series.vars().clone();

    let (_, pz) = weierstrass_prepare(&f, 2, work)?;
    if pz.degree() < 2 {
        return Ok(Vec::new());
    }
    let base = pz.base_vars();
    let coeffs = pz.all_coeffs();
    let dcoeffs: Vec<Series<AlgElem>> =
        coeffs.iter().enumerate().skip(1).map(|(j, c)| c.scale(&AlgElem::from_i64(j as i64))).collect();
    let s = subresultant(&coeffs, &dcoeffs, 1, &base);

    let mut out = Vec::with_capacity(ys.len());
    for (i, b) in ys.iter().enumerate() {
        let big_y = b.series.clone();
        let im = branch_images(&wv, n, &big_y, None, np);
        let s0 = s[0].compose(&wv, &im)?;
        let s1 = s[1].compose(&wv, &im)?;
        let k = unit_order(&s1).ok_or_else(|| {
            Error::HypothesisViolated(format!(
                "branch {i}: the first subresultant does not separate the double root; further ramification needed"
            ))
        })?;
        let num = s0.div_var_power(0, k)?;
        let den = s1.div_var_power(0, k)?;
        let p = den.prec().unwrap_or(work).min(num.prec().unwrap_or(work));
        let mut big_z = num.mul(&den.truncate(p).with_prec(Some(p)).invert_unit(p)?).neg().truncate(p);
        let (kind, exact) = classify(&f, &wv, n, &big_y, &big_z)?;
        let mut big_y = big_y;
        if exact {
            big_y = big_y.with_prec(None);
            big_z = big_z.with_prec(None);
        }
        let bvar = Series::var(&wv, 1);
        let y = big_y.add(&bvar.mul(&big_z));
        let z = big_z.clone();
        let mut w = PolarWedge {
            kind,
            ramification_n: n,
            m_i: None,
            big_y,
            big_z,
            y,
            z,
            phi: Series::zero(&wv),
            psi: Series::zero(&wv),
        };
        let (m, phi, psi) = wedge_normal_form(&w)?;
        w.m_i = m;
        w.phi = phi;
        w.psi = psi;
        out.push(w);
    }
    Ok(out)
}

/// `y = y(u,0,t) + b^2 u^m phi`, `z = z(u,0,t) + b u^m psi`.
pub fn wedge_normal_form(w: &PolarWedge) -> Result<(Option<u32>, Series<AlgElem>, Series<AlgElem>)> {
    let wv = w.y.vars().clone();
    let dz = w.z.sub(&at_zero(&w.z, 1));
    let dy = w.y.sub(&at_zero(&w.y, 1));
    if w.kind == WedgeKind::Singular {
        if !(dz.is_zero() && dy.is_zero()) {
            return Err(Error::IdentityViolation { identity: "singular wedge independent of b".into(), wedges: vec![] });
        }
        return Ok((None, Series::zero(&wv), Series::zero(&wv)));
    }
    let q = dz.div_var_power(1, 1)?;
    let m = q.order_in(0).ok_or(Error::OrderNotStabilized)?;
    let psi = q.div_var_power(0, m)?;
    if psi.constant_term().is_zero() {
        return Err(Error::OrderNotStabilized);
    }
    let violation = |what: &str| Error::IdentityViolation { identity: what.into(), wedges: vec![] };
    let phi = dy
        .div_var_power(1, 2)
        .map_err(|_| violation("b^2 divides y - y(u,0,t)"))?
        .div_var_power(0, m)
        .map_err(|_| violation("u^m divides y - y(u,0,t)"))?;
    if phi.constant_term().is_zero() {
        return Err(Error::OrderNotStabilized);
    }
    Ok((Some(m), phi, psi))
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub wedges: Vec<usize>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub contacts: ContactMatrix,
    pub ramification_n: u32,
}

fn vanishes(s: &Series<AlgElem>, n: u32) -> bool {
    s.truncate(n).is_zero()
}

/// Check the wedge identities modulo degree `n_prec`.
pub fn verify_wedge_identities(wedges: &[PolarWedge], n_prec: u32) -> Result<IdentityReport> {
    let mut checks = Vec::new();
    let Some(n) = wedges.first().map(|w| w.ramification_n) else {
        return Ok(IdentityReport { checks, contacts: ContactMatrix { k: Vec::new() }, ramification_n: 1 });
    };
    let mut push = |identity: &str, wedges: Vec<usize>, holds: bool| {
        checks.push(IdentityCheck { identity: identity.into(), wedges, holds });
    };
    for (i, w) in wedges.iter().enumerate() {
        let wv = w.y.vars().clone();
        let b = Series::var(&wv, 1);
        push("Z + dY/db = 0", vec![i], vanishes(&w.big_z.add(&w.big_y.derivative(1)), n_prec));
        push("y = Y + bZ", vec![i], vanishes(&w.y.sub(&w.big_y.add(&b.mul(&w.big_z))), n_prec));
        push("dy/db = b dz/db", vec![i], vanishes(&w.y.derivative(1).sub(&b.mul(&w.z.derivative(1))), n_prec));
        push("ord_u y >= n", vec![i], w.y.order_in(0).is_none_or(|o| o >= n));
        push("ord_u z >= n", vec![i], w.z.order_in(0).is_none_or(|o| o >= n));
        match w.kind {
            WedgeKind::Polar => {
                push("m >= n", vec![i], w.m_i.is_some_and(|m| m >= n));
                push(
                    "phi(0) != 0 and psi(0) != 0",
                    vec![i],
                    !w.phi.constant_term().is_zero() && !w.psi.constant_term().is_zero(),
                );
            }
            WedgeKind::Singular => push("phi = psi = 0", vec![i], w.phi.is_zero() && w.psi.is_zero()),
        }
    }
    let branches: Vec<PuiseuxBranch> =
        wedges.iter().map(|w| PuiseuxBranch { ramification_n: n, series: w.y.clone(), multiplicity: 1 }).collect();
    let contacts = match contact_matrix(&branches) {
        Ok(c) => c,
        Err(Error::NonUnitCofactor { i, j }) => {
            return Err(Error::IdentityViolation { identity: "y_i - y_j = u^k unit".into(), wedges: vec![i, j] })
        }
        Err(e) => return Err(e),
    };
    for i in 0..wedges.len() {
        for j in i + 1..wedges.len() {
            let k = contacts.get(i, j);
            push("k >= n", vec![i, j], k >= n);
            let dz = wedges[i].z.sub(&wedges[j].z);
            push("ord_u(z_i - z_j) >= k", vec![i, j], dz.order_in(0).is_none_or(|o| o >= k));
            if let (Some(mi), Some(mj)) = (wedges[i].m_i, wedges[j].m_i) {
                if mi != mj {
                    push("k <= min(m_i, m_j)", vec![i, j], k <= mi.min(mj));
                }
            }
        }
    }
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(Error::IdentityViolation { identity: c.identity.clone(), wedges: c.wedges.clone() });
    }
    Ok(IdentityReport { checks, contacts, ramification_n: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Rational;
    use crate::equising::shear_family;
    use crate::parse::parse_rational;
    use crate::series::vars;

    fn wedges(s: &str, n: u32) -> (Vec<PolarWedge>, Tower) {
        let f = parse_rational(s, &vars(&["x", "y", "z"])).unwrap();
        let sh = shear_family(&f).unwrap();
        let mut t: Tower = None;
        (parameterize_wedges(&sh, n, &mut t).unwrap(), t)
    }

    #[test]
    fn cone_equations() {
        let f = parse_rational("z^2 - x^2 - y^2", &vars(&["x", "y", "z"])).unwrap();
        let sh = shear_family(&f).unwrap();
        let sys = contour_and_singular_equations(&sh);
        let v = sh.vars().clone();
        let want = parse_rational("2*(1-b^2)*z - 2*b*y", &v).unwrap();
        assert_eq!(sys.contour[1], want);
        let _ = Rational::from(0);
    }

    #[test]
    fn cone_wedges() {
        let (w, t) = wedges("z^2 - x^2 - y^2", 8);
        assert_eq!(t.as_ref().unwrap().name(), "i");
        assert_eq!(w.len(), 2);
        for x in &w {
            assert_eq!(x.kind, WedgeKind::Polar);
            assert_eq!((x.ramification_n, x.m_i), (1, Some(1)));
            // phi(0) = psi(0) / 2 = +-i/2
            assert_eq!(x.phi.constant_term().mul(&AlgElem::from_i64(2)), x.psi.constant_term());
            assert_eq!(x.psi.constant_term().pow(2), AlgElem::from_i64(-1));
        }
        let r = verify_wedge_identities(&w, 8).unwrap();
        assert_eq!(r.contacts.get(0, 1), 1);
    }

    #[test]
    fn umbrella_wedges() {
        // z^2 - x y^2 in the frame x -> x + y
        let (w, _) = wedges("z^2 - (x+y)*y^2", 8);
        let kinds: Vec<WedgeKind> = w.iter().map(|x| x.kind).collect();
        assert_eq!(kinds.iter().filter(|k| **k == WedgeKind::Singular).count(), 1, "{kinds:?}");
        assert_eq!(kinds.iter().filter(|k| **k == WedgeKind::Polar).count(), 1);
        let s = w.iter().find(|x| x.kind == WedgeKind::Singular).unwrap();
        assert!(s.y.is_zero() && s.z.is_zero() && s.y.is_exact());
        verify_wedge_identities(&w, 8).unwrap();
    }

    #[test]
    fn smooth_has_no_wedges() {
        assert!(wedges("z - x", 8).0.is_empty());
    }
}
