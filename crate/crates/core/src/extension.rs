//! Von Neumann extension parameters, characteristic functions built from
//! Livšic functions, change of the self-adjoint reference extension, and a
//! sampling falsifier for membership in the class of Livšic functions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{AnalyticFn, FnKind, HalfPlanePoint, ToleranceConfig};
use crate::json::ComplexValue;
use crate::moebius::{make_map, MapKind};

/// Complex parameter `κ`, `|κ| < 1`, describing the domain of a maximal
/// dissipative extension (`g₊ - κ g₋` lies in it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonNeumannParameter {
    kappa: Complex64,
}

impl VonNeumannParameter {
    pub fn new(kappa: Complex64) -> Result<Self> {
        let m = kappa.norm();
        if m.is_finite() && m < 1.0 {
            Ok(Self { kappa })
        } else {
            Err(Error::OutOfRange {
                name: "|kappa|",
                value: m,
                range: "[0, 1)",
            })
        }
    }

    pub fn real(kappa: f64) -> Result<Self> {
        Self::new(Complex64::new(kappa, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.kappa
    }

    /// `κ̂ = |κ|`, independent of the reference extension.
    pub fn modulus(&self) -> f64 {
        self.kappa.norm()
    }
}

/// Angle `α ∈ [0, π)` selecting the reference extension `A_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRotation {
    alpha: f64,
}

impl ReferenceRotation {
    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..PI).contains(&alpha) {
            Ok(Self { alpha })
        } else {
            Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "[0, pi)",
            })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `S = (s - κ)/(κ̄ s - 1)`. Applying it twice with the same `κ` returns `s`.
pub fn characteristic_from_livsic(s: &AnalyticFn, kappa: VonNeumannParameter) -> AnalyticFn {
    let map = make_map(MapKind::DiskAuto(kappa)).expect("|kappa| < 1 gives a nondegenerate map");
    let s = s.clone();
    let label = format!("char[{}; kappa={}]", s.label(), kappa.value());
    AnalyticFn::try_new(FnKind::Characteristic, label, move |z| {
        let w = s.eval(z)?;
        map.apply(w)
            .map_err(|_| Error::PoleEncountered { at: z.to_complex() })
    })
}

/// `κ = S(i)`.
pub fn extract_kappa(s: &AnalyticFn) -> Result<VonNeumannParameter> {
    let v = s.eval(HalfPlanePoint::i())?;
    if v.norm() >= 1.0 {
        return Err(Error::NotContractive { modulus: v.norm() });
    }
    VonNeumannParameter::new(v)
}

/// `e^{-2iα} s`.
pub fn reference_change_livsic(s: &AnalyticFn, rot: ReferenceRotation) -> AnalyticFn {
    let factor = Complex64::from_polar(1.0, -2.0 * rot.alpha());
    s.scaled(factor, s.kind())
        .with_label(format!("rot[{}; alpha={}]", s.label(), rot.alpha()))
}

/// `(cos α · M - sin α)/(cos α + sin α · M)`.
pub fn reference_change_weyl(m: &AnalyticFn, rot: ReferenceRotation) -> AnalyticFn {
    let map = make_map(MapKind::HalfPlaneRotation(rot.alpha())).expect("rotation has det 1");
    let m = m.clone();
    let label = format!("rotM[{}; alpha={}]", m.label(), rot.alpha());
    AnalyticFn::try_new(m.kind(), label, move |z| {
        let w = m.eval(z)?;
        map.apply(w)
            .map_err(|_| Error::PoleEncountered { at: z.to_complex() })
    })
}

/// Rays `r e^{iθ}` probed by [`class_c_check`].
pub const RAY_ANGLES: [f64; 3] = [FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];
pub const RAY_RADII: [f64; 4] = [1e1, 1e2, 1e3, 1e4];
/// Number of unimodular constants `e^{2iα}`, `α = kπ/16`.
pub const ALPHA_SAMPLES: usize = 16;
/// `|z(s(z) - e^{2iα})|` must exceed this at the largest radius.
pub const GROWTH_THRESHOLD: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassVerdict {
    ConsistentWithC,
    FailsAtI,
    FailsGrowth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayDetail {
    pub alpha: f64,
    pub theta: f64,
    pub radii: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassMembershipReport {
    pub value_at_i: ComplexValue,
    pub vanishes_at_i: bool,
    pub ray_growth_passed: bool,
    pub ray_details: Vec<RayDetail>,
    pub verdict: ClassVerdict,
}

/// Heuristic test of the two defining conditions: `s(i) = 0`, and
/// `z(s(z) - e^{2iα}) → ∞` inside sectors, for every unimodular constant.
///
/// The growth condition is sampled on three rays at four radii for sixteen
/// values of `α`; on each ray the magnitudes must increase strictly and end
/// above [`GROWTH_THRESHOLD`]. A rejection is conclusive, acceptance is only
/// evidence.
pub fn class_c_check(s: &AnalyticFn, cfg: &ToleranceConfig) -> Result<ClassMembershipReport> {
    let at_i = s.eval(HalfPlanePoint::i())?;
    let vanishes_at_i = at_i.norm() < cfg.identity_tol;

    let mut details = Vec::with_capacity(ALPHA_SAMPLES * RAY_ANGLES.len());
    for k in 0..ALPHA_SAMPLES {
        let alpha = PI * k as f64 / ALPHA_SAMPLES as f64;
        let unimodular = Complex64::from_polar(1.0, 2.0 * alpha);
        for &theta in &RAY_ANGLES {
            let mut magnitudes = Vec::with_capacity(RAY_RADII.len());
            for &r in &RAY_RADII {
                let z = Complex64::from_polar(r, theta);
                let w = s.eval_at(z)?;
                magnitudes.push((z * (w - unimodular)).norm());
            }
            let increasing = magnitudes.windows(2).all(|p| p[1] > p[0]);
            let large = magnitudes.last().is_some_and(|&m| m > GROWTH_THRESHOLD);
            details.push(RayDetail {
                alpha,
                theta,
                radii: RAY_RADII.to_vec(),
                magnitudes,
                passed: increasing && large,
            });
        }
    }
    let ray_growth_passed = details.iter().all(|d| d.passed);
    let verdict = if !vanishes_at_i {
        ClassVerdict::FailsAtI
    } else if !ray_growth_passed {
        ClassVerdict::FailsGrowth
    } else {
        ClassVerdict::ConsistentWithC
    };
    Ok(ClassMembershipReport {
        value_at_i: at_i.into(),
        vanishes_at_i,
        ray_growth_passed,
        ray_details: details,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{sup_deviation, EvaluationGrid};
    use crate::model::model_closed_forms;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cayley_probe() -> AnalyticFn {
        AnalyticFn::new(FnKind::Livsic, "(z-i)/(z+i)", |z| {
            (z - Complex64::i()) / (z + Complex64::i())
        })
    }

    #[test]
    fn parameter_ranges() {
        assert!(VonNeumannParameter::new(c(0.6, 0.8)).is_err());
        assert!(VonNeumannParameter::new(c(0.6, 0.79)).is_ok());
        assert!(ReferenceRotation::new(PI).is_err());
        assert!(ReferenceRotation::new(-0.1).is_err());
        assert!(ReferenceRotation::new(0.0).is_ok());
    }

    #[test]
    fn kappa_zero_negates() {
        let grid = EvaluationGrid::default_probe();
        let s = cayley_probe();
        let big_s = characteristic_from_livsic(&s, VonNeumannParameter::real(0.0).unwrap());
        let neg = s.scaled(c(-1.0, 0.0), FnKind::Characteristic);
        assert_eq!(sup_deviation(&big_s, &neg, &grid).unwrap(), 0.0);
    }

    #[test]
    fn zero_probe_gives_kappa() {
        let k = VonNeumannParameter::new(c(0.2, -0.3)).unwrap();
        let zero = AnalyticFn::constant(FnKind::Livsic, c(0.0, 0.0));
        let big_s = characteristic_from_livsic(&zero, k);
        let v = big_s.eval(HalfPlanePoint::new(1.0, 2.0).unwrap()).unwrap();
        assert!((v - k.value()).norm() < 1e-16);
    }

    #[test]
    fn model_characteristic_is_exponential() {
        let grid = EvaluationGrid::default_probe();
        let m = model_closed_forms(1.0).unwrap();
        let big_s = characteristic_from_livsic(&m.s, m.kappa);
        let exp = AnalyticFn::new(FnKind::Characteristic, "exp(iz)", |z| {
            (Complex64::i() * z).exp()
        });
        assert!(sup_deviation(&big_s, &exp, &grid).unwrap() < 1e-12);
    }

    #[test]
    fn extract_kappa_examples() {
        let exp = AnalyticFn::new(FnKind::Characteristic, "exp(iz)", |z| {
            (Complex64::i() * z).exp()
        });
        let k = extract_kappa(&exp).unwrap();
        assert!((k.value() - c(0.367_879_441_171_442_3, 0.0)).norm() < 1e-15);

        let m = model_closed_forms(1.0).unwrap();
        let neg = m.s.scaled(c(-1.0, 0.0), FnKind::Characteristic);
        assert!(extract_kappa(&neg).unwrap().modulus() < 1e-15);

        let half = AnalyticFn::constant(FnKind::Characteristic, c(0.5, 0.0));
        assert_eq!(extract_kappa(&half).unwrap().value(), c(0.5, 0.0));

        let one = AnalyticFn::constant(FnKind::Characteristic, c(0.0, 1.0));
        assert!(matches!(
            extract_kappa(&one),
            Err(Error::NotContractive { .. })
        ));
    }

    #[test]
    fn reference_change_livsic_examples() {
        let grid = EvaluationGrid::default_probe();
        let s = cayley_probe();
        let r0 = reference_change_livsic(&s, ReferenceRotation::new(0.0).unwrap());
        assert_eq!(sup_deviation(&r0, &s, &grid).unwrap(), 0.0);
        let r90 = reference_change_livsic(&s, ReferenceRotation::new(FRAC_PI_2).unwrap());
        let neg = s.scaled(c(-1.0, 0.0), FnKind::Livsic);
        assert!(sup_deviation(&r90, &neg, &grid).unwrap() < 1e-15);

        let cst = AnalyticFn::constant(FnKind::Livsic, c(0.3, 0.1));
        let r45 = reference_change_livsic(&cst, ReferenceRotation::new(FRAC_PI_4).unwrap());
        let v = r45.eval(HalfPlanePoint::i()).unwrap();
        assert!((v - c(0.0, -1.0) * c(0.3, 0.1)).norm() < 1e-15);
    }

    #[test]
    fn reference_change_weyl_examples() {
        let grid = EvaluationGrid::default_probe();
        let m = AnalyticFn::new(FnKind::Herglotz, "-1/z", |z| -1.0 / z);
        let r0 = reference_change_weyl(&m, ReferenceRotation::new(0.0).unwrap());
        assert_eq!(sup_deviation(&r0, &m, &grid).unwrap(), 0.0);
        let r90 = reference_change_weyl(&m, ReferenceRotation::new(FRAC_PI_2).unwrap());
        let id = AnalyticFn::new(FnKind::Herglotz, "z", |z| z);
        assert!(sup_deviation(&r90, &id, &grid).unwrap() < 1e-12);

        let two_atoms =
            AnalyticFn::new(FnKind::Herglotz, "2z/(1-z^2)", |z| 2.0 * z / (1.0 - z * z));
        for k in 0..12 {
            let rot = ReferenceRotation::new(PI * k as f64 / 12.0).unwrap();
            let v = reference_change_weyl(&two_atoms, rot)
                .eval(HalfPlanePoint::i())
                .unwrap();
            assert!((v - Complex64::i()).norm() < 1e-12);
        }
    }

    #[test]
    fn class_check_examples() {
        let cfg = ToleranceConfig::default();
        let m = model_closed_forms(1.0).unwrap();
        let rep = class_c_check(&m.s, &cfg).unwrap();
        assert_eq!(rep.verdict, ClassVerdict::ConsistentWithC);
        assert_eq!(rep.value_at_i.re, 0.0);
        assert_eq!(rep.ray_details.len(), 48);

        let half = AnalyticFn::constant(FnKind::Livsic, c(0.5, 0.0));
        assert_eq!(
            class_c_check(&half, &cfg).unwrap().verdict,
            ClassVerdict::FailsAtI
        );

        let rep = class_c_check(&cayley_probe(), &cfg).unwrap();
        assert_eq!(rep.verdict, ClassVerdict::FailsGrowth);
        // for alpha = 0 the product tends to -2i
        let d = &rep.ray_details[0];
        assert!((d.magnitudes[3] - 2.0).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn characteristic_involution(kr in 0.0f64..0.9, kt in 0.0f64..std::f64::consts::TAU, ell in 0.3f64..3.0) {
            let kappa = VonNeumannParameter::new(Complex64::from_polar(kr, kt)).unwrap();
            let s = model_closed_forms(ell).unwrap().s;
            let twice = characteristic_from_livsic(&characteristic_from_livsic(&s, kappa), kappa);
            let grid = EvaluationGrid::default_probe();
            prop_assert!(sup_deviation(&twice, &s, &grid).unwrap() < 1e-12);
        }

        #[test]
        fn kappa_recovered_when_s_vanishes_at_i(kr in 0.0f64..0.95, kt in 0.0f64..std::f64::consts::TAU, ell in 0.3f64..3.0) {
            let kappa = VonNeumannParameter::new(Complex64::from_polar(kr, kt)).unwrap();
            let s = model_closed_forms(ell).unwrap().s;
            let k = extract_kappa(&characteristic_from_livsic(&s, kappa)).unwrap();
            prop_assert!((k.value() - kappa.value()).norm() < 1e-12);
        }

        #[test]
        fn unimodular_closure(theta in 0.0f64..std::f64::consts::TAU, kr in 0.0f64..0.9, ell in 0.3f64..3.0) {
            let kappa = VonNeumannParameter::real(kr).unwrap();
            let big_s = characteristic_from_livsic(&model_closed_forms(ell).unwrap().s, kappa);
            let u = Complex64::from_polar(1.0, theta);
            let rotated = big_s.scaled(u, FnKind::Characteristic);
            let k = extract_kappa(&rotated).unwrap();
            prop_assert!((k.value() - u * kappa.value()).norm() < 1e-12);
            prop_assert!((k.modulus() - kappa.modulus()).abs() < 1e-12);
        }

        #[test]
        fn livsic_rotation_preserves_modulus(alpha in 0.0f64..PI, x in -5.0f64..5.0, y in 0.1f64..5.0) {
            let s = model_closed_forms(1.0).unwrap().s;
            let r = reference_change_livsic(&s, ReferenceRotation::new(alpha).unwrap());
            let z = HalfPlanePoint::new(x, y).unwrap();
            prop_assert!((r.eval(z).unwrap().norm() - s.eval(z).unwrap().norm()).abs() < 1e-12);
        }
    }
}
