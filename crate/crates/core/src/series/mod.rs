//! Truncated multivariate power series, units and Weierstrass preparation.

mod trunc;
mod weierstrass;

pub use trunc::{vars, Mono, Series, Vars};
pub use weierstrass::{
    lift, monomial_unit_decompose, unit_root, weierstrass_prepare, z_order, MonomialUnit, Provenance,
    Pseudopolynomial,
};
