use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{contact_matrix, embed_alg, ContactMatrix, PolarWedge, PuiseuxBranch};
use crate::coeffs::{AlgElem, Coeff, Field, Rational};
use crate::error::{Error, Result};
use crate::series::{Series, Vars};

#[derive(Debug, Clone)]
pub struct TransportedBranch {
    /// Solution `b_i(u, t)` of the implicit equation.
    pub b: Series<AlgElem>,
    /// `y_i(u, b_i, t)` and `z_i(u, b_i, t)`; `None` when the substitution is
    /// not representable at the working precision.
    pub y: Option<Series<AlgElem>>,
    pub z: Option<Series<AlgElem>>,
}

impl Serialize for TransportedBranch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TransportedBranch", 3)?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("y", &self.y.as_ref().map(|v| v.to_string()))?;
        st.serialize_field("z", &self.z.as_ref().map(|v| v.to_string()))?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportReport {
    pub branches: Vec<TransportedBranch>,
    pub contacts_before: ContactMatrix,
    pub contacts_after: Option<ContactMatrix>,
    /// Contraction steps until the slowest wedge stabilized.
    pub steps: usize,
    /// `psi_1(0) = psi_2(0) = psi_t(0) = 0`.
    pub hypotheses_hold: bool,
    pub diagnostics: Vec<String>,
}

/// Compositional inverse of `phi` (images of all variables of `vars`) by
/// the fixed point `inv = id - (phi - id) o inv`.
fn inverse(phi: &[Series<AlgElem>], vars: &Vars, p: u32) -> Result<Vec<Series<AlgElem>>> {
    let id: Vec<Series<AlgElem>> = (0..vars.len()).map(|i| Series::var(vars, i)).collect();
    let h: Vec<Series<AlgElem>> = phi.iter().zip(&id).map(|(f, x)| f.sub(x)).collect();
    let mut inv = id.clone();
    for _ in 0..p + 4 {
        let next: Vec<Series<AlgElem>> = h
            .iter()
            .zip(&id)
            .map(|(hk, x)| Ok(x.sub(&hk.compose(vars, &inv)?).truncate(p)))
            .collect::<Result<_>>()?;
        if next.iter().zip(&inv).all(|(a, b)| a.truncate(p).sub(&b.truncate(p)).is_zero()) {
            return Ok(next);
        }
        inv = next;
    }
    Err(Error::ContractionStall)
}

/// Solve `b = psi_2 + sum_j (b z_{t_j} - y_{t_j}) psi_{t_j} + (1/n) u^{1-n} (y_u - b z_u) psi_1`
/// on every wedge and compare contact exponents before and after.
///
/// `phi` gives the old coordinates `(x, y, z, t...)` as series in the new
/// ones (same variable list); `psi_k = (d phi_k / dZ) o phi^{-1}`.
pub fn contour_transport<F: Field>(wedges: &[PolarWedge], phi: &[Series<F>], n_prec: u32) -> Result<TransportReport> {
    let Some(w0) = wedges.first() else {
        return Err(Error::HypothesisViolated("no wedges to transport".into()));
    };
    let wv = w0.y.vars().clone();
    let r = wv.len() - 2;
    if phi.len() != r + 3 {
        return Err(Error::VariableMismatch(format!("{} images for {} variables", phi.len(), r + 3)));
    }
    let phi: Vec<Series<AlgElem>> = phi.iter().map(embed_alg).collect::<Result<_>>()?;
    let pv = phi[0].vars().clone();
    let n = w0.ramification_n;
    let p = n_prec;
    let inv = inverse(&phi, &pv, p + 2)?;
    let psi: Vec<Series<AlgElem>> =
        phi.iter().map(|f| f.derivative(2).compose(&pv, &inv)).collect::<Result<_>>()?;
    let mut diagnostics = Vec::new();
    let mut hypotheses_hold = true;
    for (k, s) in psi.iter().enumerate() {
        if k != 2 && !s.constant_term().is_zero() {
            hypotheses_hold = false;
            diagnostics.push(format!("psi_{}(0) = {} != 0", k + 1, s.constant_term()));
        }
    }

    // (u, t...)
    let mut tnames: Vec<String> = wv.as_ref().clone();
    tnames.remove(1);
    let tv: Vars = std::sync::Arc::new(tnames);
    let inv_n = AlgElem::rational(Rational::new(1, n as i64));

    let mut branches = Vec::with_capacity(wedges.len());
    let mut steps = 0;
    for (i, w) in wedges.iter().enumerate() {
        let mut im = vec![Series::var(&wv, 0).pow(n), w.y.clone(), w.z.clone()];
        im.extend((0..r).map(|j| Series::var(&wv, j + 2)));
        let pw: Vec<Series<AlgElem>> = psi
            .iter()
            .map(|s| if s.is_zero() && s.is_exact() { Ok(Series::zero(&wv)) } else { s.compose(&wv, &im) })
            .collect::<Result<_>>()?;
        let b = Series::var(&wv, 1);
        let mut rhs = pw[1].clone();
        for j in 0..r {
            if pw[3 + j].is_zero() && pw[3 + j].is_exact() {
                continue;
            }
            let c = b.mul(&w.z.derivative(j + 2)).sub(&w.y.derivative(j + 2));
            rhs = rhs.add(&c.mul(&pw[3 + j]));
        }
        if !(pw[0].is_zero() && pw[0].is_exact()) {
            let d = w.y.derivative(0).sub(&b.mul(&w.z.derivative(0)));
            let d = d.div_var_power(0, n - 1).map_err(|_| Error::IdentityViolation {
                identity: "u^(n-1) divides dy/du - b dz/du".into(),
                wedges: vec![i],
            })?;
            rhs = rhs.add(&d.mul(&pw[0]).scale(&inv_n));
        }
        let cap = |s: Series<AlgElem>| if s.is_exact() { s } else { s.truncate(p) };
        let rhs = cap(rhs);

        let sub = |s: &Series<AlgElem>, bk: &Series<AlgElem>| -> Result<Series<AlgElem>> {
            let mut im = vec![Series::var(&tv, 0), bk.clone()];
            im.extend((0..r).map(|j| Series::var(&tv, j + 1)));
            s.compose(&tv, &im)
        };
        let mut bk = Series::zero(&tv);
        let mut done = false;
        for step in 1..=(p as usize + 4) {
            let next = cap(sub(&rhs, &bk)?);
            if next.sub(&bk).is_zero() {
                steps = steps.max(step);
                done = true;
                bk = next;
                break;
            }
            bk = next;
        }
        if !done {
            return Err(Error::ContractionStall);
        }
        let y = sub(&w.y, &bk).ok();
        let z = sub(&w.z, &bk).ok();
        if y.is_none() {
            diagnostics.push(format!("wedge {i}: b_i(0) != 0 on truncated wedge data; branch image not representable"));
        }
        branches.push(TransportedBranch { b: bk, y, z });
    }

    let before: Vec<PuiseuxBranch> =
        wedges.iter().map(|w| PuiseuxBranch { ramification_n: n, series: w.y.clone(), multiplicity: 1 }).collect();
    let contacts_before = contact_matrix(&before)?;
    let contacts_after = if branches.iter().all(|b| b.y.is_some()) {
        let after: Vec<PuiseuxBranch> = branches
            .iter()
            .map(|b| PuiseuxBranch { ramification_n: n, series: b.y.clone().unwrap(), multiplicity: 1 })
            .collect();
        let r = wedges.len();
        for i in 0..r {
            for j in i + 1..r {
                let d = after[i].series.sub(&after[j].series);
                let expected = contacts_before.get(i, j);
                match super::unit_order(&d) {
                    Some(k) if k == expected => {}
                    found => {
                        return Err(Error::ContactMismatch { i, j, expected, found: found.or(d.order_in(0)).unwrap_or(0) })
                    }
                }
            }
        }
        Some(contact_matrix(&after)?)
    } else {
        None
    };
    Ok(TransportReport { branches, contacts_before, contacts_after, steps, hypotheses_hold, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::super::parameterize_wedges;
    use super::*;
    use crate::coeffs::Tower;
    use crate::equising::shear_family;
    use crate::parse::parse_rational;
    use crate::series::vars;

    fn cone_wedges(n: u32) -> Vec<PolarWedge> {
        let f = parse_rational("z^2 - x^2 - (1+t)*y^2", &vars(&["x", "y", "z", "t"])).unwrap();
        let sh = shear_family(&f).unwrap();
        let mut t: Tower = None;
        parameterize_wedges(&sh, n, &mut t).unwrap()
    }

    fn phi(s: [&str; 4]) -> Vec<Series<Rational>> {
        let v = vars(&["x", "y", "z", "t"]);
        s.iter().map(|e| parse_rational(e, &v).unwrap()).collect()
    }

    #[test]
    fn identity() {
        let w = cone_wedges(8);
        let r = contour_transport(&w, &phi(["x", "y", "z", "t"]), 8).unwrap();
        assert!(r.hypotheses_hold);
        assert!(r.branches.iter().all(|b| b.b.is_zero()));
        assert_eq!(r.contacts_after.as_ref(), Some(&r.contacts_before));
    }

    #[test]
    fn constant_shear() {
        let w = cone_wedges(8);
        let r = contour_transport(&w, &phi(["x", "y + 3*z", "z", "t"]), 8).unwrap();
        assert!(r.branches.iter().all(|b| b.b == Series::constant(b.b.vars(), AlgElem::from_i64(3))));
    }

    #[test]
    fn nonlinear() {
        let w = cone_wedges(10);
        let r = contour_transport(&w, &phi(["x", "y", "z + x^2", "t"]), 10).unwrap();
        assert!(r.hypotheses_hold);
        assert_eq!(r.contacts_after.as_ref(), Some(&r.contacts_before));
        let r = contour_transport(&w, &phi(["x + y*z", "y + z^2 - x*z", "z + x*y", "t"]), 10).unwrap();
        assert_eq!(r.contacts_after.as_ref(), Some(&r.contacts_before));
        assert!(r.branches.iter().any(|b| !b.b.is_zero()));
    }
}
