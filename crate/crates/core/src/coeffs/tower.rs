use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::factor::factor_over;
use super::{Coeff, Rational, UPoly};
use crate::error::{Error, Result};

/// One level of an algebraic tower `K_k = K_{k-1}[g_k]/(m_k)`.
///
/// Levels are immutable and shared; extending a tower appends a new node
/// whose parent is the previous top.
pub struct TowerNode {
    parent: Tower,
    name: String,
    depth: usize,
    dim: usize,
    /// Non-leading coefficients of the monic minimal polynomial, as parent-level coordinates.
    minpoly: Vec<Vec<Rational>>,
}

/// A tower is a chain of nodes; `None` is the rationals.
pub type Tower = Option<Arc<TowerNode>>;

impl TowerNode {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parent(&self) -> &Tower {
        &self.parent
    }

    /// Monic minimal polynomial of the generator over the parent level.
    pub fn minpoly(&self) -> UPoly<AlgElem> {
        let mut cs: Vec<AlgElem> = self
            .minpoly
            .iter()
            .map(|c| AlgElem::from_parts(self.parent.clone(), c.clone()))
            .collect();
        cs.push(AlgElem::one());
        UPoly::new(cs)
    }

    /// Generator names from the bottom level up.
    pub fn names(&self) -> Vec<String> {
        let mut v = match &self.parent {
            Some(p) => p.names(),
            None => Vec::new(),
        };
        v.push(self.name.clone());
        v
    }
}

impl fmt::Debug for TowerNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        for (lvl, name) in self.names().iter().enumerate() {
            let _ = lvl;
            write!(f, "[{name}]")?;
        }
        Ok(())
    }
}

fn depth(t: &Tower) -> usize {
    t.as_ref().map_or(0, |n| n.depth)
}

fn dim(t: &Tower) -> usize {
    t.as_ref().map_or(1, |n| n.dim)
}

fn same(a: &Tower, b: &Tower) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => Arc::ptr_eq(x, y),
        _ => false,
    }
}

fn ancestor_at(t: &Tower, d: usize) -> Tower {
    let mut cur = t.clone();
    while depth(&cur) > d {
        cur = cur.as_ref().unwrap().parent.clone();
    }
    cur
}

/// The deeper of two towers, provided one extends the other.
fn common(a: &Tower, b: &Tower) -> Tower {
    let (lo, hi) = if depth(a) <= depth(b) { (a, b) } else { (b, a) };
    let anc = ancestor_at(hi, depth(lo));
    if !same(&anc, lo) {
        panic!("{}", Error::IncompatibleDomains("elements from unrelated towers".into()));
    }
    hi.clone()
}

fn embed(coords: &[Rational], from: &Tower, to: &Tower) -> Vec<Rational> {
    if depth(from) == depth(to) {
        return coords.to_vec();
    }
    let node = to.as_ref().unwrap();
    let mut v = embed(coords, from, &node.parent);
    v.resize(node.dim, Rational::zero());
    v
}

fn add_into(acc: &mut [Rational], x: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a = a.add(b);
    }
}

fn sub_into(acc: &mut [Rational], x: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a = a.sub(b);
    }
}

fn is_zero_coords(v: &[Rational]) -> bool {
    v.iter().all(|c| c.is_zero())
}

fn mul_coords(t: &Tower, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let Some(node) = t else {
        return vec![a[0].mul(&b[0])];
    };
    let sub = dim(&node.parent);
    let d = node.minpoly.len();
    let mut prod = vec![Rational::zero(); (2 * d - 1) * sub];
    for i in 0..d {
        let ai = &a[i * sub..(i + 1) * sub];
        if is_zero_coords(ai) {
            continue;
        }
        for j in 0..d {
            let bj = &b[j * sub..(j + 1) * sub];
            if is_zero_coords(bj) {
                continue;
            }
            let p = mul_coords(&node.parent, ai, bj);
            add_into(&mut prod[(i + j) * sub..(i + j + 1) * sub], &p);
        }
    }
    // g^d = -sum m_j g^j
    for i in (d..2 * d - 1).rev() {
        let ci: Vec<Rational> = prod[i * sub..(i + 1) * sub].to_vec();
        if is_zero_coords(&ci) {
            continue;
        }
        for (j, mj) in node.minpoly.iter().enumerate() {
            let p = mul_coords(&node.parent, &ci, mj);
            sub_into(&mut prod[(i - d + j) * sub..(i - d + j + 1) * sub], &p);
        }
    }
    prod.truncate(d * sub);
    prod
}

/// Element of an algebraic tower over the rationals, stored as coordinates
/// in the power basis `prod g_k^{e_k}`, `e_k < deg m_k`.
#[derive(Clone)]
pub struct AlgElem {
    tower: Tower,
    coords: Vec<Rational>,
}

impl AlgElem {
    fn from_parts(tower: Tower, coords: Vec<Rational>) -> Self {
        debug_assert_eq!(coords.len(), dim(&tower));
        AlgElem { tower, coords }
    }

    pub fn rational(r: Rational) -> Self {
        AlgElem { tower: None, coords: vec![r] }
    }

    /// The generator of the top level of `node`.
    pub fn generator(node: &Arc<TowerNode>) -> Self {
        let sub = dim(&node.parent);
        let mut coords = vec![Rational::zero(); node.dim];
        if node.minpoly.len() == 1 {
            // degenerate linear level never happens, guard anyway
            coords[0] = node.minpoly[0][0].neg();
        } else {
            coords[sub] = Rational::one();
        }
        AlgElem { tower: Some(node.clone()), coords }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Coordinates after embedding in `t` (which must extend this element's tower).
    pub fn coords_in(&self, t: &Tower) -> Vec<Rational> {
        let c = common(&self.tower, t);
        embed(&self.coords, &self.tower, &c)
    }

    pub fn embed_in(&self, t: &Tower) -> Self {
        let c = common(&self.tower, t);
        AlgElem { coords: embed(&self.coords, &self.tower, &c), tower: c }
    }

    /// Rational value if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Drop tower levels the value does not use.
    pub fn simplify(&self) -> Self {
        let mut cur = self.clone();
        while let Some(node) = cur.tower.clone() {
            let sub = dim(&node.parent);
            if cur.coords[sub..].iter().all(|c| c.is_zero()) {
                cur = AlgElem { coords: cur.coords[..sub].to_vec(), tower: node.parent.clone() };
            } else {
                break;
            }
        }
        cur
    }

    /// View as a polynomial in the top generator with parent-level coefficients.
    fn as_top_poly(&self) -> UPoly<AlgElem> {
        let node = self.tower.as_ref().unwrap();
        let sub = dim(&node.parent);
        UPoly::new(
            self.coords
                .chunks(sub)
                .map(|c| AlgElem::from_parts(node.parent.clone(), c.to_vec()))
                .collect(),
        )
    }

    fn binop(&self, o: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let t = common(&self.tower, &o.tower);
        let a = embed(&self.coords, &self.tower, &t);
        let b = embed(&o.coords, &o.tower, &t);
        AlgElem { coords: a.iter().zip(&b).map(|(x, y)| f(x, y)).collect(), tower: t }
    }

    fn basis_names(&self) -> Vec<String> {
        // mixed radix over levels, lowest level varies slowest inside each chunk
        fn rec(t: &Tower) -> Vec<String> {
            match t {
                None => vec![String::new()],
                Some(n) => {
                    let lower = rec(&n.parent);
                    let mut out = Vec::new();
                    for e in 0..n.minpoly.len() {
                        for l in &lower {
                            let g = match e {
                                0 => String::new(),
                                1 => n.name.clone(),
                                _ => format!("{}^{e}", n.name),
                            };
                            out.push(match (l.is_empty(), g.is_empty()) {
                                (true, _) => g,
                                (false, true) => l.clone(),
                                (false, false) => format!("{l}*{g}"),
                            });
                        }
                    }
                    out
                }
            }
        }
        rec(&self.tower)
    }
}

impl PartialEq for AlgElem {
    fn eq(&self, o: &Self) -> bool {
        let t = common(&self.tower, &o.tower);
        embed(&self.coords, &self.tower, &t) == embed(&o.coords, &o.tower, &t)
    }
}

impl Coeff for AlgElem {
    fn zero() -> Self {
        AlgElem::rational(Rational::zero())
    }
    fn one() -> Self {
        AlgElem::rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        is_zero_coords(&self.coords)
    }
    fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        if self.tower.is_none() && o.tower.is_none() {
            return AlgElem::rational(self.coords[0].mul(&o.coords[0]));
        }
        let t = common(&self.tower, &o.tower);
        let a = embed(&self.coords, &self.tower, &t);
        let b = embed(&o.coords, &o.tower, &t);
        AlgElem { coords: mul_coords(&t, &a, &b), tower: t }
    }
    fn neg(&self) -> Self {
        AlgElem { tower: self.tower.clone(), coords: self.coords.iter().map(|c| c.neg()).collect() }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let Some(node) = &self.tower else {
            return Some(AlgElem::rational(self.coords[0].try_inv()?));
        };
        let (g, s, _) = self.as_top_poly().xgcd(&node.minpoly());
        // g is monic; any non-constant gcd would mean a reducible minimal polynomial
        assert!(g.is_constant(), "reducible minimal polynomial in tower");
        let sub = dim(&node.parent);
        let mut coords = vec![Rational::zero(); node.dim];
        for (i, c) in s.coeffs().iter().enumerate() {
            coords[i * sub..(i + 1) * sub].clone_from_slice(&c.coords_in(&node.parent));
        }
        Some(AlgElem { tower: self.tower.clone(), coords })
    }
    fn from_rational(r: &Rational) -> Self {
        AlgElem::rational(r.clone())
    }
    fn cmp_canonical(&self, o: &Self) -> Ordering {
        let t = common(&self.tower, &o.tower);
        let a = embed(&self.coords, &self.tower, &t);
        let b = embed(&o.coords, &o.tower, &t);
        a.iter().rev().cmp(b.iter().rev())
    }
    fn nth_root(&self, m: u32) -> Option<Self> {
        let r = self.simplify().as_rational()?.exact_root(m)?;
        Some(AlgElem::rational(r))
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.simplify();
        if let Some(r) = s.as_rational() {
            return write!(f, "{r}");
        }
        let names = s.basis_names();
        let mut out = String::new();
        for (c, b) in s.coords.iter().zip(&names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let a = c.abs();
            let term = if b.is_empty() {
                a.to_string()
            } else if a.is_one() {
                b.clone()
            } else {
                format!("{a}*{b}")
            };
            if out.is_empty() {
                out = if neg { format!("-{term}") } else { term };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for AlgElem {
    fn from(r: Rational) -> Self {
        AlgElem::rational(r)
    }
}

/// Result of [`adjoin`].
#[derive(Debug, Clone)]
pub struct AdjoinOutcome {
    /// The (possibly unchanged) field after adjoining.
    pub tower: Tower,
    /// A root of the requested polynomial in `tower`.
    pub root: AlgElem,
    /// The irreducible factor whose root was adjoined.
    pub factor: UPoly<AlgElem>,
    /// Whether the requested polynomial factored over the base.
    pub reducible: bool,
}

/// Adjoin a root of `minpoly` to `base`.
///
/// If `minpoly` is reducible over `base`, a root of its first irreducible
/// factor (in the deterministic factor order) is adjoined instead; linear
/// factors leave the field unchanged.
pub fn adjoin(base: &Tower, minpoly: &UPoly<AlgElem>, name: &str) -> Result<AdjoinOutcome> {
    if minpoly.degree().unwrap_or(0) == 0 || !minpoly.lc().is_one() {
        return Err(Error::NotMonic);
    }
    let minpoly = minpoly.map(|c| c.embed_in(base));
    let factors = factor_over(base, &minpoly);
    let reducible = factors.len() > 1 || factors[0].1 > 1;
    let factor = factors[0].0.clone();
    if factor.deg() == 1 {
        let root = factor.coeff(0).neg();
        return Ok(AdjoinOutcome { tower: base.clone(), root, factor, reducible });
    }
    let d = factor.deg();
    let node = Arc::new(TowerNode {
        parent: base.clone(),
        name: name.to_string(),
        depth: depth(base) + 1,
        dim: dim(base) * d,
        minpoly: (0..d).map(|i| factor.coeff(i).coords_in(base)).collect(),
    });
    let root = AlgElem::generator(&node);
    Ok(AdjoinOutcome { tower: Some(node), root, factor, reducible })
}

impl AlgElem {
    /// Evaluate a rational-coefficient polynomial, handy in tests.
    pub fn eval_rational_poly(p: &UPoly<Rational>, x: &AlgElem) -> AlgElem {
        p.map(|c| AlgElem::rational(c.clone())).eval(x)
    }
}

#[allow(dead_code)]
fn norm_to_parent(a: &AlgElem) -> AlgElem {
    // N_{K_k/K_{k-1}}(a) = Res(m_k, a(g))
    let node = a.tower.as_ref().unwrap();
    node.minpoly().resultant(&a.as_top_poly())
}

impl AlgElem {
    /// Relative norm down one level (identity on the rationals).
    pub fn norm_down(&self) -> AlgElem {
        match &self.tower {
            None => self.clone(),
            Some(_) => norm_to_parent(self),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> AlgElem {
        AlgElem::rational(Rational::from(n))
    }

    fn gaussian() -> (Tower, AlgElem) {
        let out = adjoin(&None, &UPoly::from_i64(&[1, 0, 1]), "i").unwrap();
        (out.tower, out.root)
    }

    #[test]
    fn i_squared_is_minus_one() {
        let (_, i) = gaussian();
        assert_eq!(i.mul(&i), q(-1));
        assert_eq!(i.to_string(), "i");
    }

    #[test]
    fn cube_root_of_unity() {
        let out = adjoin(&None, &UPoly::from_i64(&[1, 1, 1]), "w").unwrap();
        let w = out.root;
        assert!(!out.reducible);
        assert_eq!(w.mul(&w), w.neg().sub(&q(1)));
        assert_eq!(w.pow(3), q(1));
    }

    #[test]
    fn reducible_over_gaussian_field() {
        let (t, i) = gaussian();
        let out = adjoin(&t, &UPoly::from_i64(&[1, 0, 1]), "j").unwrap();
        assert!(out.reducible);
        assert_eq!(depth(&out.tower), 1);
        assert!(out.root == i || out.root == i.neg());
        assert_eq!(out.factor.deg(), 1);
    }

    #[test]
    fn inverse_in_two_level_tower() {
        let (t, i) = gaussian();
        // sqrt(2) over Q(i)
        let p = UPoly::new(vec![q(-2), q(0), q(1)]);
        let out = adjoin(&t, &p, "s").unwrap();
        let s = out.root;
        assert_eq!(s.mul(&s), q(2));
        let x = s.add(&i).add(&q(3));
        let xi = x.try_inv().unwrap();
        assert_eq!(x.mul(&xi), q(1));
        // soundness: minimal polynomials vanish at their generators
        let node = out.tower.as_ref().unwrap();
        assert!(node.minpoly().eval(&AlgElem::generator(node)).is_zero());
    }

    #[test]
    fn rational_factor_adjoins_nothing() {
        let out = adjoin(&None, &UPoly::from_i64(&[-4, 0, 1]), "r").unwrap();
        assert!(out.tower.is_none());
        assert!(out.reducible);
        assert_eq!(out.root.mul(&out.root), q(4));
    }

    #[test]
    fn not_monic_rejected() {
        assert_eq!(adjoin(&None, &UPoly::from_i64(&[1, 2]), "z").unwrap_err(), Error::NotMonic);
    }
}
