//! Equisingularity decisions: plane-curve families, discriminant towers,
//! ν-transverse frames and families, shears, coordinate transports,
//! multiplicity and dimensionality type up to two.

mod curve;
mod dimtype;
mod nu;
mod recursive;

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeffs::{Field, Rational};
use crate::elim::{discriminant_locus, mgcd, squarefree_part};
use crate::error::{Error, Result};
use crate::series::{weierstrass_prepare, Series, Vars};

pub use curve::{check_curve_family_ze, CurveFamilyVerdict};
pub use dimtype::{dim_type_le2, DimType, DimTypeReport};
pub use nu::{check_nu_frame, check_nu_ze_family, sample_generic_linear, CondStatus, NuFrameReport, NuZeReport};
pub use recursive::{check_recursive_ze, PseudoPolySystem};

/// Three-valued verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ze {
    Yes,
    No,
    Undecided,
}

/// Integer matrix of a linear coordinate change; row `i` gives the image of
/// variable `i` as a combination of the same variables.
pub type Frame = Vec<Vec<i64>>;

pub fn identity_frame(n: usize) -> Frame {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn det_i64(a: &Frame) -> i128 {
    let n = a.len();
    match n {
        0 => 1,
        1 => a[0][0] as i128,
        _ => (0..n)
            .map(|j| {
                let minor: Frame = a[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a[0][j] as i128 * det_i64(&minor)
            })
            .sum(),
    }
}

/// Random invertible integer matrix with entries in `[-bound, bound]`.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Frame {
    loop {
        let a: Frame = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        if det_i64(&a) != 0 {
            return a;
        }
    }
}

/// Unipotent frames `x_i -> x_i + x_j` (`i != j`), in a fixed order.
pub fn elementary_frames(n: usize) -> Vec<Frame> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut a = identity_frame(n);
                a[i][j] = 1;
                out.push(a);
            }
        }
    }
    out
}

/// Substitute `x_{pos[i]} -> sum_j A[i][j] x_{pos[j]}`; other variables are fixed.
pub fn apply_frame<F: Field>(f: &Series<F>, pos: &[usize], a: &Frame) -> Result<Series<F>> {
    let v = f.vars();
    let mut images: Vec<Series<F>> = (0..f.nvars()).map(|i| Series::var(v, i)).collect();
    for (i, &p) in pos.iter().enumerate() {
        let mut s = Series::zero(v);
        for (j, &q) in pos.iter().enumerate() {
            if a[i][j] != 0 {
                s = s.add(&Series::var(v, q).scale(&F::from_i64(a[i][j])));
            }
        }
        images[p] = s;
    }
    f.compose(v, &images)
}

/// Fresh variable name not already in `v`.
fn fresh(v: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while v.contains(&name) {
        name.push('_');
    }
    name
}

/// `F(X, Y, Z, b, t) = f(X, Y + bZ, Z, t)`; `b` is inserted after the three
/// space variables, in front of the parameters.
pub fn shear_family<F: Field>(f: &Series<F>) -> Result<Series<F>> {
    if f.nvars() < 3 {
        return Err(Error::VariableMismatch("shear needs variables (x, y, z, ...)".into()));
    }
    let mut names: Vec<String> = f.vars().as_ref().clone();
    let b = fresh(&names, "b");
    names.insert(3, b);
    let to: Vars = Arc::new(names);
    let images: Vec<Series<F>> = (0..f.nvars())
        .map(|i| {
            let j = if i < 3 { i } else { i + 1 };
            let v = Series::var(&to, j);
            if i == 1 {
                v.add(&Series::var(&to, 3).mul(&Series::var(&to, 2)))
            } else {
                v
            }
        })
        .collect();
    f.compose(&to, &images)
}

/// Check `f(0, t) == 0`: no represented term is free of the space variables.
pub fn is_family_germ<F: Field>(f: &Series<F>, space: &[usize]) -> bool {
    f.terms().all(|(e, _)| space.iter().any(|&i| e[i] > 0))
}

/// A reduced equation of the germ `{d = 0}`: the multivariate squarefree
/// part for exact data, otherwise the squarefree part of the Weierstrass
/// form in variable `prefer`.
pub fn reduced_locus<F: Field>(d: &Series<F>, prefer: usize, n: u32) -> Result<Series<F>> {
    if d.is_zero() {
        return Err(Error::ZeroToPrecision);
    }
    if d.is_exact() {
        return Ok(mgcd::normalize(&mgcd::reduce(d)));
    }
    let (_, p) = weierstrass_prepare(d, prefer, n)?;
    Ok(squarefree_part(&p)?.to_series())
}

/// Reduced discriminant locus of `f` eliminating `pos`.
pub fn reduced_discriminant<F: Field>(f: &Series<F>, pos: usize, prefer: usize, n: u32) -> Result<Series<F>> {
    let d = discriminant_locus(f, pos, n, false)?;
    if d.value.is_zero() {
        return Err(Error::NotReduced);
    }
    reduced_locus(&d.value, prefer, n)
}

/// Transport `F = f ∘ phi`.
///
/// `phi[i]` is the image of variable `i` of `f`, written in `to`; the first
/// `nspace` variables of both rings are space variables and `tau` lists the
/// positions in `to` of extra parameters. Requires the space images to vanish
/// on the parameter axis and `Dphi(0) = id` at `tau = 0`. Polynomial data
/// stays exact; otherwise the result is truncated at `n`.
pub fn transform_family<F: Field>(
    f: &Series<F>,
    nspace: usize,
    to: &Vars,
    phi: &[Series<F>],
    tau: &[usize],
    n: u32,
) -> Result<Series<F>> {
    if phi.len() != f.nvars() {
        return Err(Error::VariableMismatch(format!("{} images for {} variables", phi.len(), f.nvars())));
    }
    let space: Vec<usize> = (0..nspace).collect();
    for (i, p) in phi.iter().enumerate().take(nspace) {
        if !is_family_germ(p, &space) {
            return Err(Error::HypothesisViolated(format!("phi_{}(0, T) is not identically zero", i + 1)));
        }
    }
    // linear part at tau = 0; parameters of f map to the non-tau variables of `to` in order
    let base: Vec<usize> = (0..to.len()).filter(|j| !tau.contains(j)).collect();
    if base.len() != f.nvars() {
        return Err(Error::VariableMismatch("target ring must have one non-tau variable per source variable".into()));
    }
    for (i, p) in phi.iter().enumerate() {
        for (jj, &j) in base.iter().enumerate() {
            let mut e = vec![0u32; to.len()];
            e[j] = 1;
            let want = if i == jj { F::one() } else { F::zero() };
            if p.coeff(&e) != want {
                return Err(Error::HypothesisViolated(format!("Dphi(0) != id at tau = 0 (entry {}, {})", i + 1, jj + 1)));
            }
        }
        if !p.constant_term().is_zero() && i < nspace {
            return Err(Error::HypothesisViolated(format!("phi_{}(0) != 0", i + 1)));
        }
    }
    let r = f.compose(to, phi)?;
    Ok(if r.is_exact() { r } else { r.truncate(n) })
}

/// Shift to a section: `f(x - s_1(t), ..., x_k - s_k(t), t)`.
pub fn shift_section<F: Field>(f: &Series<F>, sections: &[Series<F>]) -> Result<Series<F>> {
    let v = f.vars();
    let images: Vec<Series<F>> = (0..f.nvars())
        .map(|i| match sections.get(i) {
            Some(s) => Series::var(v, i).sub(s),
            None => Series::var(v, i),
        })
        .collect();
    f.compose(v, &images)
}

/// Order of `f` at the origin.
pub fn multiplicity<F: Field>(f: &Series<F>) -> Result<u32> {
    f.order().ok_or(Error::ZeroToPrecision)
}

/// Multiplicity of `f(., t)` at `t = t_bar` for each sample, against `t = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct EquimultiplicityReport {
    pub base: u32,
    pub samples: Vec<(Vec<String>, u32)>,
    pub constant: bool,
}

pub fn equimultiplicity_check<F: Field>(
    f: &Series<F>,
    params: &[usize],
    samples: &[Vec<Rational>],
) -> Result<EquimultiplicityReport> {
    let at = |tb: &[Rational]| -> Result<u32> {
        let mut g = f.clone();
        let mut ps: Vec<usize> = params.to_vec();
        ps.sort_unstable();
        for (&p, val) in ps.iter().zip(tb).rev() {
            g = g.eval_var(p, &F::from_rational(val))?;
        }
        multiplicity(&g)
    };
    let zero = vec![Rational::from(0); params.len()];
    let base = at(&zero)?;
    let mut out = Vec::new();
    for s in samples {
        out.push((s.iter().map(|r| r.to_string()).collect(), at(s)?));
    }
    let constant = out.iter().all(|(_, m)| *m == base);
    Ok(EquimultiplicityReport { base, samples: out, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational;
    use crate::series::vars;

    #[test]
    fn shear_cone() {
        let v = vars(&["x", "y", "z"]);
        let f = parse_rational("z^2 - x^2 - y^2", &v).unwrap();
        let s = shear_family(&f).unwrap();
        let w = vars(&["x", "y", "z", "b"]);
        assert_eq!(s, parse_rational("(1 - b^2)*z^2 - 2*b*y*z - x^2 - y^2", &w).unwrap());
        assert_eq!(s.eval_var(3, &Rational::from(0)).unwrap(), f);
    }

    #[test]
    fn transform_shear_and_nonlinear() {
        let v = vars(&["x", "y", "z"]);
        let f = parse_rational("z^2 - x^3", &v).unwrap();
        let phi: Vec<_> = ["x", "y", "z + x^2"].iter().map(|s| parse_rational(s, &v).unwrap()).collect();
        let g = transform_family(&f, 3, &v, &phi, &[], 16).unwrap();
        assert_eq!(g, parse_rational("(z + x^2)^2 - x^3", &v).unwrap());
        let bad: Vec<_> = ["2*x", "y", "z"].iter().map(|s| parse_rational(s, &v).unwrap()).collect();
        assert!(matches!(transform_family(&f, 3, &v, &bad, &[], 16), Err(Error::HypothesisViolated(_))));
        // two-parameter shear with tau = (a, b)
        let w = vars(&["x", "y", "z", "a", "b"]);
        let phi: Vec<_> = ["x + a*z", "y + b*z", "z"].iter().map(|s| parse_rational(s, &w).unwrap()).collect();
        let c = parse_rational("z^2 - x^2 - y^2", &v).unwrap();
        let g = transform_family(&c, 3, &w, &phi, &[3, 4], 16).unwrap();
        assert_eq!(g, parse_rational("z^2 - (x + a*z)^2 - (y + b*z)^2", &w).unwrap());
    }

    #[test]
    fn multiplicities() {
        let v = vars(&["x", "y", "z", "t"]);
        let f = parse_rational("z^2 - x^2 - (1+t)*y^2", &v).unwrap();
        let r = equimultiplicity_check(&f, &[3], &[vec![Rational::new(1, 2)], vec![Rational::new(-1, 3)]]).unwrap();
        assert!(r.constant);
        assert_eq!(r.base, 2);
        assert_eq!(multiplicity(&parse_rational("z - x", &v).unwrap()).unwrap(), 1);
        assert_eq!(multiplicity(&parse_rational("z^2 - x^3 - y^3", &v).unwrap()).unwrap(), 2);
    }
}
