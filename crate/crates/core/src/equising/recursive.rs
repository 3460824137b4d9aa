use super::is_family_germ;
use crate::coeffs::Field;
use crate::elim::{discriminant, generalized_discriminants, squarefree_part};
use crate::error::{Error, Result};
use crate::series::{weierstrass_prepare, Provenance, Pseudopolynomial, Series};

/// Tower `F_{r+1}, ..., F_k` of pseudopolynomials ending in `F_k = 1`.
#[derive(Debug, Clone)]
pub struct PseudoPolySystem<F: Field> {
    pub levels: Vec<Pseudopolynomial<F>>,
    /// Number of variables eliminated before the tower became trivial.
    pub k: usize,
    /// `certificates[i]` is the quotient `q` with `levels[i + 1] = q * disc((levels[i])_red)`.
    pub divisibility_certificates: Vec<Series<F>>,
    /// Index of the first nonzero generalized discriminant at every level.
    pub gen_disc_indices: Vec<usize>,
    pub provenance: Provenance,
}

/// Build the discriminant tower of `f` eliminating the variables `order`
/// (top first); every other variable is a parameter.
///
/// Each level takes the squarefree part of the current pseudopolynomial,
/// checks it vanishes on the parameter axis, and Weierstrass-prepares its
/// discriminant in the next variable. The prepared discriminant itself is
/// the next level.
pub fn check_recursive_ze<F: Field>(f: &Series<F>, order: &[usize], n: u32) -> Result<PseudoPolySystem<F>> {
    if !is_family_germ(f, order) {
        return Err(Error::NotAFamilyGerm);
    }
    let mut levels = Vec::new();
    let mut certs = Vec::new();
    let mut gen = Vec::new();
    let mut prov = Provenance::of(f);
    // positions of the remaining eliminated variables in the current ring
    let mut rest: Vec<usize> = order.to_vec();
    let mut cur = f.clone();
    let mut level = 0;
    loop {
        let pos = rest[0];
        let (_, p) = weierstrass_prepare(&cur, pos, n).map_err(|e| match e {
            Error::NotRegular { var, .. } => Error::NotRegular { var, level: Some(level) },
            e => e,
        })?;
        prov = prov.join(p.provenance());
        let (_, j) = generalized_discriminants(&p);
        let red = squarefree_part(&p)?;
        if red.degree() + j - 1 != p.degree() {
            return Err(Error::DivisibilityFailure(format!(
                "level {level}: squarefree degree {} disagrees with generalized discriminant index {j}",
                red.degree()
            )));
        }
        gen.push(j);
        levels.push(p);
        let later: Vec<usize> = rest[1..].iter().map(|&i| if i > pos { i - 1 } else { i }).collect();
        // (F_red)(0, t) == 0
        let a0 = red.coeffs().first().cloned().unwrap_or_else(|| Series::zero(&red.base_vars()));
        if !is_family_germ(&a0, &later) {
            return Err(Error::HypothesisViolated(format!(
                "level {level}: reduced pseudopolynomial in {} does not vanish on the parameter axis",
                red.var()
            )));
        }
        let d = discriminant(&red);
        prov = prov.join(Provenance::of(&d));
        if d.is_zero() {
            return Err(if d.is_exact() { Error::NotReduced } else { Error::ZeroToPrecision });
        }
        if d.is_unit() {
            levels.push(Pseudopolynomial::one(red.full_vars(), red.pos()));
            return Ok(PseudoPolySystem {
                k: level + 1,
                levels,
                divisibility_certificates: certs,
                gen_disc_indices: gen,
                provenance: prov,
            });
        }
        if later.is_empty() {
            return Err(Error::HypothesisViolated(format!(
                "level {level}: discriminant {d} depends only on the parameters and vanishes at 0"
            )));
        }
        let next = later[0];
        let (u, fi) = weierstrass_prepare(&d, next, n).map_err(|e| match e {
            Error::NotRegular { var, .. } => Error::NotRegular { var, level: Some(level + 1) },
            e => e,
        })?;
        // F_i = u^{-1} D
        let np = u.prec().unwrap_or(n);
        let q = u.invert_unit(np)?;
        let fs = fi.to_series();
        if !q.mul(&d).eq_mod_prec(&fs) {
            return Err(Error::DivisibilityFailure(format!("level {level}: certificate does not reproduce F_{level}")));
        }
        certs.push(q);
        cur = fs;
        rest = later;
        level += 1;
    }
}
