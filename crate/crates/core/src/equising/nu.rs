use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    apply_frame, check_curve_family_ze, elementary_frames, identity_frame, is_family_germ, random_frame, reduced_discriminant, shear_family,
    CurveFamilyVerdict, Frame, Ze,
};
use crate::coeffs::Field;
use crate::error::{Error, Result};
use crate::series::{z_order, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CondStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl CondStatus {
    fn of(b: bool) -> Self {
        if b {
            CondStatus::Pass
        } else {
            CondStatus::Fail
        }
    }
}

/// The three conditions of a ν-transverse frame for `f0(x, y, z)`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct NuFrameReport<F: Field> {
    /// The tangent cone does not contain the z-axis.
    pub cond1: CondStatus,
    /// The projection `(x, y) -> x` is transverse to the discriminant locus.
    pub cond2: CondStatus,
    /// The b-family of discriminant loci is equisingular.
    pub cond3: Option<CurveFamilyVerdict<F>>,
    pub multiplicity_d: u32,
    pub smooth: bool,
    pub diagnostics: Vec<String>,
}

impl<F: Field> NuFrameReport<F> {
    pub fn is_transverse(&self) -> bool {
        self.smooth
            || (self.cond1 == CondStatus::Pass
                && self.cond2 == CondStatus::Pass
                && self.cond3.as_ref().is_some_and(|v| v.ze == Ze::Yes))
    }
}

/// Test whether the coordinates `(x, y, z)` (variables 0, 1, 2 of `f0`)
/// form a ν-transverse frame.
pub fn check_nu_frame<F: Field>(f0: &Series<F>, n: u32, tries: usize, seed: u64) -> Result<NuFrameReport<F>> {
    if f0.nvars() != 3 {
        return Err(Error::VariableMismatch("a frame needs exactly the variables (x, y, z)".into()));
    }
    let d = f0.order().ok_or(Error::ZeroToPrecision)?;
    if d == 0 {
        return Err(Error::NotAFamilyGerm);
    }
    let mut diagnostics = Vec::new();
    if d == 1 {
        return Ok(NuFrameReport {
            cond1: CondStatus::NotApplicable,
            cond2: CondStatus::NotApplicable,
            cond3: None,
            multiplicity_d: 1,
            smooth: true,
            diagnostics: vec!["smooth at the origin: conditions are vacuous".into()],
        });
    }
    let mut ez = vec![0; 3];
    ez[2] = d;
    let cond1 = CondStatus::of(!f0.initial_form().coeff(&ez).is_zero());

    let cond2 = match reduced_discriminant(f0, 2, 1, n) {
        Ok(dred) => {
            let m = dred.order().unwrap_or(0);
            let ok = z_order(&dred, 1) == Some(m);
            if !ok {
                diagnostics.push(format!("reduced discriminant {dred} is not regular of order {m} in y"));
            }
            CondStatus::of(ok)
        }
        Err(e @ Error::NotRegular { .. }) => {
            diagnostics.push(format!("cond2: {e}"));
            CondStatus::Fail
        }
        Err(e) => return Err(e),
    };

    let sheared = shear_family(f0)?;
    let cond3 = match reduced_discriminant(&sheared, 2, 1, n) {
        Ok(db) => Some(check_curve_family_ze(&db, 0, 1, n, tries, seed)?),
        Err(e @ Error::NotRegular { .. }) => {
            diagnostics.push(format!("cond3: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    Ok(NuFrameReport { cond1, cond2, cond3, multiplicity_d: d, smooth: false, diagnostics })
}

/// ν-transverse Zariski equisingularity of a family `f(x, y, z, t)`.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct NuZeReport<F: Field> {
    pub nu_ze: bool,
    pub frame: NuFrameReport<F>,
    /// Curve-family verdict for the reduced discriminants `Delta_{b,t}`.
    pub family: CurveFamilyVerdict<F>,
}

/// Frame conditions on `f|_{t=0}` plus the curve-family test on the
/// reduced discriminant of the shear family with parameters `(b, t)`.
pub fn check_nu_ze_family<F: Field>(f: &Series<F>, n: u32, tries: usize, seed: u64) -> Result<NuZeReport<F>> {
    if !is_family_germ(f, &[0, 1, 2]) {
        return Err(Error::NotAFamilyGerm);
    }
    let mut f0 = f.clone();
    for i in (3..f.nvars()).rev() {
        f0 = f0.eval_var(i, &F::zero())?;
    }
    let frame = check_nu_frame(&f0, n, tries, seed)?;
    let sheared = shear_family(f)?;
    let db = reduced_discriminant(&sheared, 2, 1, n)?;
    let family = check_curve_family_ze(&db, 0, 1, n, tries, seed)?;
    let nu_ze = frame.is_transverse() && family.ze == Ze::Yes;
    Ok(NuZeReport { nu_ze, frame, family })
}

/// Search integer linear frames for a ν-transverse one: the identity, then
/// the elementary frames `x_i -> x_i + x_j` (small equations), then seeded
/// random ones, `budget` attempts in all.
pub fn sample_generic_linear<F: Field>(
    f: &Series<F>,
    seed: u64,
    budget: usize,
    bound: i64,
    n: u32,
) -> Result<(Frame, NuFrameReport<F>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diagnostics = Vec::new();
    let fixed: Vec<Frame> = std::iter::once(identity_frame(3)).chain(elementary_frames(3)).collect();
    for k in 0..budget.max(1) {
        let a = if k < fixed.len() { fixed[k].clone() } else { random_frame(&mut rng, 3, bound) };
        let g = apply_frame(f, &[0, 1, 2], &a)?;
        match check_nu_frame(&g, n, 0, seed) {
            Ok(r) if r.is_transverse() => return Ok((a, r)),
            Ok(r) => diagnostics.push(format!(
                "frame {a:?}: cond1 {:?}, cond2 {:?}, cond3 {:?}",
                r.cond1,
                r.cond2,
                r.cond3.as_ref().map(|v| v.ze)
            )),
            Err(e) => diagnostics.push(format!("frame {a:?}: {e}")),
        }
    }
    Err(Error::BudgetExhausted { attempts: budget.max(1), diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Rational;
    use crate::parse::parse_rational;
    use crate::series::vars;

    type S = Series<Rational>;

    fn p(s: &str, names: &[&str]) -> S {
        parse_rational(s, &vars(names)).unwrap()
    }

    #[test]
    fn cone_frame() {
        let r = check_nu_frame(&p("z^2 - x^2 - y^2", &["x", "y", "z"]), 16, 0, 1).unwrap();
        assert_eq!((r.cond1, r.cond2), (CondStatus::Pass, CondStatus::Pass));
        let v = r.cond3.as_ref().unwrap();
        assert_eq!((v.ze, v.m), (Ze::Yes, Some(2)));
        assert!(r.is_transverse());
    }

    #[test]
    fn umbrella_frame() {
        let r = check_nu_frame(&p("z^2 - x*y^2", &["x", "y", "z"]), 16, 0, 1).unwrap();
        assert_eq!((r.cond1, r.cond2), (CondStatus::Pass, CondStatus::Fail));
        assert!(!r.is_transverse());
        let (a, rep) = sample_generic_linear(&p("z^2 - x*y^2", &["x", "y", "z"]), 3, 20, 10, 16).unwrap();
        assert_ne!(a, identity_frame(3));
        assert!(rep.is_transverse());
    }

    #[test]
    fn smooth_is_vacuous() {
        let r = check_nu_frame(&p("z", &["x", "y", "z"]), 16, 0, 1).unwrap();
        assert!(r.smooth && r.is_transverse());
        let (a, _) = sample_generic_linear(&p("z", &["x", "y", "z"]), 3, 20, 10, 16).unwrap();
        assert_eq!(a, identity_frame(3));
    }

    #[test]
    fn cone_family() {
        let r = check_nu_ze_family(&p("z^2 - x^2 - (1+t)*y^2", &["x", "y", "z", "t"]), 16, 0, 1).unwrap();
        assert!(r.nu_ze);
        assert_eq!(r.family.m, Some(2));
        assert!(r.family.precision_note.is_exact());
    }

    #[test]
    fn cusp_to_node_family() {
        let r = check_nu_ze_family(&p("z^2 - x^3 - t*x^2", &["x", "y", "z", "t"]), 16, 5, 1).unwrap();
        assert!(!r.nu_ze);
        assert_eq!(r.family.ze, Ze::No);
    }
}
