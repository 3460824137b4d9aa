use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{reduced_discriminant, shear_family};
use crate::coeffs::Field;
use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimType {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimTypeReport {
    pub dim_type: DimType,
    /// `(b, singular)` for every usable sample.
    pub samples: Vec<(i64, bool)>,
    pub discarded: usize,
    pub diagnostics: Vec<String>,
}

/// Dimensionality type (0, 1 or 2) of the surface germ `f(x, y, z)` at 0,
/// from reduced discriminants of seeded linear projections.
pub fn dim_type_le2<F: Field>(f: &Series<F>, k: usize, seed: u64, n: u32) -> Result<DimTypeReport> {
    let d = f.order().ok_or(Error::ZeroToPrecision)?;
    if d == 0 {
        return Err(Error::NotAFamilyGerm);
    }
    if d == 1 {
        return Ok(DimTypeReport { dim_type: DimType::Zero, samples: Vec::new(), discarded: 0, diagnostics: Vec::new() });
    }
    let sheared = shear_family(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // draw a generous pool up front so the parallel evaluation stays deterministic
    let pool: Vec<i64> = (0..4 * k.max(1)).map(|_| rng.gen_range(-10..=10)).collect();
    let one = |b: i64| -> std::result::Result<bool, String> {
        let g = sheared.eval_var(3, &F::from_i64(b)).map_err(|e| e.to_string())?;
        match reduced_discriminant(&g, 2, 1, n) {
            Ok(r) => Ok(r.order().unwrap_or(0) >= 2),
            Err(e @ Error::NotRegular { .. }) => Err(format!("b = {b}: {} ({e})", Error::ProjectionNotFinite)),
            Err(e) => Err(format!("b = {b}: {e}")),
        }
    };
    let results: Vec<(i64, std::result::Result<bool, String>)> = pool.par_iter().map(|&b| (b, one(b))).collect();
    let mut samples = Vec::new();
    let mut diagnostics = Vec::new();
    let mut discarded = 0;
    for (b, r) in results {
        if samples.len() == k {
            break;
        }
        match r {
            Ok(s) => samples.push((b, s)),
            Err(msg) => {
                discarded += 1;
                diagnostics.push(msg);
            }
        }
    }
    let dim_type = if samples.len() < k {
        diagnostics.push(format!("only {} usable samples", samples.len()));
        DimType::Inconclusive
    } else if samples.iter().all(|s| s.1) {
        DimType::Two
    } else if samples.iter().all(|s| !s.1) {
        DimType::One
    } else {
        DimType::Inconclusive
    };
    Ok(DimTypeReport { dim_type, samples, discarded, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_rational;
    use crate::series::vars;

    fn dt(s: &str) -> DimType {
        let f = parse_rational(s, &vars(&["x", "y", "z"])).unwrap();
        dim_type_le2(&f, 10, 11, 16).unwrap().dim_type
    }

    #[test]
    fn examples() {
        assert_eq!(dt("z - x"), DimType::Zero);
        assert_eq!(dt("z^2 - x^3"), DimType::One);
        assert_eq!(dt("z^2 - x^2 - y^2"), DimType::Two);
    }
}
