//! Parametric Newton–Puiseux factorization, polar wedges of the shear
//! family, and transport of contour branches under coordinate changes.
//!
//! Branch data lives over [`AlgElem`] and is written in the variables
//! `(u, t_1, ..., t_r)` with `x = u^n`.

mod lift;
mod newton;
mod transport;
mod wedge;

use std::any::Any;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::coeffs::{AlgElem, Coeff, Field, Rational, Tower};
use crate::error::{Error, Result};
use crate::series::{Provenance, Series, Vars};

pub use lift::hensel_lift_parameter;
pub use newton::newton_puiseux;
pub use transport::{contour_transport, TransportReport, TransportedBranch};
pub use wedge::{
    contour_and_singular_equations, parameterize_wedges, verify_wedge_identities, wedge_normal_form, ContourSystem,
    IdentityReport, PolarWedge, WedgeKind,
};

/// A root `y = series(u, t)` of `g(u^n, y, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxBranch {
    pub ramification_n: u32,
    pub series: Series<AlgElem>,
    pub multiplicity: u32,
}

impl PuiseuxBranch {
    pub fn provenance(&self) -> Provenance {
        Provenance::of(&self.series)
    }
}

impl Serialize for PuiseuxBranch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PuiseuxBranch", 5)?;
        st.serialize_field("n", &self.ramification_n)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("series", &self.series.to_string())?;
        st.serialize_field("precision", &self.series.prec())?;
        st.serialize_field("tower", &tower_names(&self.series))?;
        st.end()
    }
}

/// Generator names of the largest tower used by the coefficients.
pub fn tower_names(s: &Series<AlgElem>) -> Vec<String> {
    s.terms()
        .filter_map(|(_, c)| c.tower().as_ref().map(|t| t.names()))
        .max_by_key(|v| v.len())
        .unwrap_or_default()
}

/// Pairwise contact exponents `y_i - y_j = u^{k_ij} * unit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContactMatrix {
    /// `k[i][j]`; the diagonal is 0 and meaningless.
    pub k: Vec<Vec<u32>>,
}

impl ContactMatrix {
    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.k[i][j]
    }
}

/// `u`-order of `d` (variable 0) with a unit cofactor.
pub(crate) fn unit_order(d: &Series<AlgElem>) -> Option<u32> {
    let k = d.order_in(0)?;
    d.div_var_power(0, k).ok().filter(|c| c.is_unit()).map(|_| k)
}

/// Contact exponents of branches on a common ramification.
pub fn contact_matrix(branches: &[PuiseuxBranch]) -> Result<ContactMatrix> {
    let r = branches.len();
    if r < 2 {
        return Ok(ContactMatrix { k: Vec::new() });
    }
    let mut k = vec![vec![0; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            if branches[i].ramification_n != branches[j].ramification_n {
                return Err(Error::VariableMismatch("branches on different ramifications".into()));
            }
            let d = branches[i].series.sub(&branches[j].series);
            let e = unit_order(&d).ok_or(Error::NonUnitCofactor { i, j })?;
            k[i][j] = e;
            k[j][i] = e;
        }
    }
    Ok(ContactMatrix { k })
}

/// `prod (y - y_i)` in the variables `(u, y, t...)`.
pub fn branch_product(branches: &[PuiseuxBranch]) -> Result<Series<AlgElem>> {
    let b0 = branches.first().ok_or_else(|| Error::HypothesisViolated("no branches".into()))?;
    let bv = b0.series.vars();
    let mut names: Vec<String> = bv.as_ref().clone();
    names.insert(1, "y".into());
    let full: Vars = std::sync::Arc::new(names);
    let y = Series::var(&full, 1);
    let mut acc = Series::one(&full);
    for b in branches {
        let yi = lift_var(&b.series, &full, 1);
        acc = acc.mul(&y.sub(&yi));
    }
    Ok(acc)
}

/// Insert an absent variable at `pos`.
pub(crate) fn lift_var<C: Coeff>(s: &Series<C>, full: &Vars, pos: usize) -> Series<C> {
    crate::series::lift(s, full, pos)
}

/// Check `prod (y - y_i) == g(u^n, y, t)` on represented terms. `g` has
/// the variables `(x, y, t...)`.
pub fn reconstruction_check<F: Field>(branches: &[PuiseuxBranch], g: &Series<F>) -> Result<bool> {
    let prod = branch_product(branches)?;
    let full = prod.vars().clone();
    let g = embed_alg(g)?;
    let n = branches[0].ramification_n;
    let mut images: Vec<Series<AlgElem>> = (0..g.nvars()).map(|i| Series::var(&full, i)).collect();
    images[0] = Series::var(&full, 0).pow(n);
    let gu = g.compose(&full, &images)?;
    Ok(prod.eq_mod_prec(&gu))
}

/// Coefficients of `s` as algebraic numbers.
pub fn embed_alg<F: Field>(s: &Series<F>) -> Result<Series<AlgElem>> {
    if let Some(a) = (s as &dyn Any).downcast_ref::<Series<AlgElem>>() {
        return Ok(a.clone());
    }
    if let Some(r) = (s as &dyn Any).downcast_ref::<Series<Rational>>() {
        return Ok(r.map_coeffs(|c| AlgElem::rational(c.clone())));
    }
    Err(Error::IncompatibleDomains("branch computations need rational or algebraic coefficients".into()))
}

/// Convenience: the empty tower `Q`.
pub fn rationals() -> Tower {
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational;
    use crate::series::vars;

    fn run(s: &str) -> Vec<PuiseuxBranch> {
        let g = parse_rational(s, &vars(&["x", "y"])).unwrap();
        let mut t = rationals();
        newton_puiseux(&g, 12, &mut t).unwrap()
    }

    #[test]
    fn contacts() {
        assert_eq!(contact_matrix(&run("y^2 - x^3")).unwrap().k, vec![vec![0, 3], vec![3, 0]]);
        assert_eq!(contact_matrix(&run("y^2 - x^2")).unwrap().k, vec![vec![0, 1], vec![1, 0]]);
        assert!(contact_matrix(&run("y - x^2")).unwrap().is_empty());
    }

    #[test]
    fn round_trip() {
        for s in ["y^2 - x^3", "y^3 - x^2", "y^2 - x^2 - x^5", "(y^2 - x^3)*(y - x)", "y^3 - x^7 + x^4*y"] {
            let g = parse_rational(s, &vars(&["x", "y"])).unwrap();
            let b = run(s);
            assert!(reconstruction_check(&b, &g).unwrap(), "{s}");
        }
    }
}
