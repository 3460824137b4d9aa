//! Exact coefficient domains.
//!
//! Three domains are provided: [`Rational`] (the prime field), [`AlgElem`]
//! (elements of a lazily grown tower of simple algebraic extensions of the
//! rationals, used to house Newton–Puiseux coefficients) and [`UniRational`]
//! (coefficients `b/c^k` with polynomial numerators in finitely many
//! indeterminates `tau` and one shared denominator base `c`).

mod factor;
mod rational;
mod tower;
mod unirational;
mod upoly;

use std::cmp::Ordering;
use std::fmt;

pub use factor::{factor_over, factor_over_q};
pub use rational::Rational;
pub use tower::{adjoin, AdjoinOutcome, AlgElem, Tower, TowerNode};
pub use unirational::{specialize_series, TauPoly, UniRational};
pub use upoly::UPoly;

/// A commutative ring with exact arithmetic.
///
/// `zero` and `one` are context free; values from different extension
/// levels embed automatically when combined.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse inside the ring, if it exists.
    fn try_inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;
    /// A total order used only to make outputs deterministic.
    fn cmp_canonical(&self, o: &Self) -> Ordering;

    /// An `m`-th root inside the ring, if one exists without extension.
    fn nth_root(&self, _m: u32) -> Option<Self> {
        None
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Marker for coefficient rings in which every nonzero element is invertible.
pub trait Field: Coeff {
    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }

    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
}

impl Field for Rational {}
impl Field for AlgElem {}
