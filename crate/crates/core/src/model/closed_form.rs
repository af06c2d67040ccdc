use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extension::VonNeumannParameter;
use crate::function::{AnalyticFn, FnKind};

/// Closed forms for the differentiation model on `[0, ℓ]`.
#[derive(Debug, Clone)]
pub struct ModelFunctions {
    pub length: f64,
    /// `s(z) = (e^{iℓz} - e^{-ℓ})/(e^{-ℓ} e^{iℓz} - 1)`.
    pub s: AnalyticFn,
    /// `S(z) = e^{iℓz}`.
    pub big_s: AnalyticFn,
    /// `κ = e^{-ℓ}`.
    pub kappa: VonNeumannParameter,
}

pub(crate) fn check_length(ell: f64) -> Result<()> {
    if ell.is_finite() && ell > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "length",
            value: ell,
            range: "(0, inf)",
        })
    }
}

pub fn model_closed_forms(ell: f64) -> Result<ModelFunctions> {
    check_length(ell)?;
    let q = (-ell).exp();
    let s = AnalyticFn::new(FnKind::Livsic, format!("model s, length {ell}"), move |z| {
        let e = (Complex64::i() * z * ell).exp();
        (e - q) / (q * e - 1.0)
    });
    let big_s = AnalyticFn::new(
        FnKind::Characteristic,
        format!("exp(i*{ell}*z)"),
        move |z| (Complex64::i() * z * ell).exp(),
    );
    Ok(ModelFunctions {
        length: ell,
        s,
        big_s,
        kappa: VonNeumannParameter::real(q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::characteristic_from_livsic;
    use crate::function::{sup_deviation, EvaluationGrid, HalfPlanePoint};

    #[test]
    fn unit_length_values() {
        let m = model_closed_forms(1.0).unwrap();
        assert_eq!(
            m.s.eval(HalfPlanePoint::i()).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!((m.kappa.value().re - 0.367_879_441_2).abs() < 1e-10);
        let si = m.big_s.eval(HalfPlanePoint::i()).unwrap();
        assert!((si - Complex64::new((-1.0f64).exp(), 0.0)).norm() < 1e-16);
        // (e^-2 - e^-1)/(e^-3 - 1)
        let v = m.s.eval(HalfPlanePoint::new(0.0, 2.0).unwrap()).unwrap();
        let expected = ((-2.0f64).exp() - (-1.0f64).exp()) / ((-3.0f64).exp() - 1.0);
        assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-15);
        assert!((expected - 0.244_728_471_054_797_7).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_related_by_disk_automorphism() {
        let grid = EvaluationGrid::default_probe();
        for ell in [0.5, 1.0, 2.0, 5.0] {
            let m = model_closed_forms(ell).unwrap();
            let derived = characteristic_from_livsic(&m.s, m.kappa);
            assert!(
                sup_deviation(&derived, &m.big_s, &grid).unwrap() < 1e-12,
                "ell {ell}"
            );
        }
    }

    #[test]
    fn rejects_nonpositive_length() {
        assert!(model_closed_forms(0.0).is_err());
        assert!(model_closed_forms(-1.0).is_err());
    }
}
