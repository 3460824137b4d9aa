//! Exact computation of discriminants, Weierstrass preparations, parametric
//! Puiseux factorizations and polar wedges, and the equisingularity
//! decisions built on them.

pub mod coeffs;
pub mod error;
pub mod parse;
pub mod elim;
pub mod equising;
pub mod puiseux;
pub mod series;

pub use coeffs::{AlgElem, Coeff, Field, Rational, UPoly, UniRational};
pub use error::{Error, ObstructionKind, Result};
pub use series::{Provenance, Pseudopolynomial, Series, Vars};
