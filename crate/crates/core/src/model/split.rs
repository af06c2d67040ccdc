use num_complex::Complex64;
use serde::Serialize;

use super::closed_form::{check_length, model_closed_forms};
use crate::coupling::{multiply_characteristic, TaggedCharacteristic};
use crate::error::{Error, Result};
use crate::function::{sup_deviation, EvaluationGrid};

/// Finite interval `[a, b]`, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidParameter(format!(
                "[{a}, {b}] is not a finite nonempty interval"
            )))
        }
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Splits at `a + fraction·(b - a)`.
    pub fn split(&self, fraction: f64) -> Result<(Interval, Interval)> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::OutOfRange {
                name: "gamma_fraction",
                value: fraction,
                range: "(0, 1)",
            });
        }
        let mid = self.a + fraction * self.length();
        Ok((Interval::new(self.a, mid)?, Interval::new(mid, self.b)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitReport {
    pub length: f64,
    pub left_length: f64,
    pub right_length: f64,
    /// `sup |e^{iℓz} - e^{iℓ₁z} e^{iℓ₂z}|` over the grid.
    pub deviation: f64,
    /// `κ` tag of the coupled product, `e^{-ℓ₁} e^{-ℓ₂}`.
    pub kappa_tag: f64,
    /// `|κ_tag - e^{-ℓ}|`.
    pub kappa_defect: f64,
}

/// Splits `[0, ℓ]` at `gamma_fraction·ℓ` and compares the characteristic
/// function of the whole interval with the product of the two pieces.
pub fn split_interval_check(
    ell: f64,
    gamma_fraction: f64,
    grid: &EvaluationGrid,
) -> Result<SplitReport> {
    check_length(ell)?;
    let (left, right) = Interval::new(0.0, ell)?.split(gamma_fraction)?;
    let whole = model_closed_forms(ell)?;
    let tag = |len: f64| -> Result<TaggedCharacteristic> {
        let m = model_closed_forms(len)?;
        TaggedCharacteristic::new(m.big_s, m.kappa, 1e-14)
    };
    let product = multiply_characteristic(&tag(left.length())?, &tag(right.length())?);
    let deviation = sup_deviation(&whole.big_s, product.function(), grid)?;
    let kappa_tag = product.kappa().value();
    Ok(SplitReport {
        length: ell,
        left_length: left.length(),
        right_length: right.length(),
        deviation,
        kappa_tag: kappa_tag.re,
        kappa_defect: (kappa_tag - Complex64::new((-ell).exp(), 0.0)).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves() {
        let grid = EvaluationGrid::default_probe();
        let r = split_interval_check(2.0, 0.5, &grid).unwrap();
        assert!(r.deviation < 1e-15, "{r:?}");
        assert!((r.kappa_tag - (-2.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn uneven_and_degenerate_splits() {
        let grid = EvaluationGrid::default_probe();
        let r = split_interval_check(1.0, 0.25, &grid).unwrap();
        assert!(r.deviation < 1e-14);
        assert!(r.kappa_defect < 1e-15);
        let r = split_interval_check(3.0, 0.999, &grid).unwrap();
        assert!(r.deviation < 1e-14);
    }

    #[test]
    fn fraction_must_be_interior() {
        let grid = EvaluationGrid::default_probe();
        assert!(split_interval_check(1.0, 0.0, &grid).is_err());
        assert!(split_interval_check(1.0, 1.0, &grid).is_err());
    }
}
