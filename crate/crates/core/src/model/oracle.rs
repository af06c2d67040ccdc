use num_complex::Complex64;

use super::closed_form::check_length;
use crate::error::{Error, Result};
use crate::function::HalfPlanePoint;
use crate::quadrature::integrate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeficiencyKind {
    GPlus,
    GMinus,
    /// `x ↦ e^{-izx}`, spanning the kernel of `D* - z`.
    GZ(Complex64),
}

/// A deficiency element of the differentiation model in `L²(0, ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficiencyElement {
    kind: DeficiencyKind,
    length: f64,
}

impl DeficiencyElement {
    pub fn new(kind: DeficiencyKind, length: f64) -> Result<Self> {
        check_length(length)?;
        Ok(Self { kind, length })
    }

    pub fn kind(&self) -> DeficiencyKind {
        self.kind
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let ell = self.length;
        match self.kind {
            DeficiencyKind::GPlus => Complex64::new(
                2f64.sqrt() / ((2.0 * ell).exp() - 1.0).sqrt() * x.exp(),
                0.0,
            ),
            DeficiencyKind::GMinus => Complex64::new(
                2f64.sqrt() / (1.0 - (-2.0 * ell).exp()).sqrt() * (-x).exp(),
                0.0,
            ),
            DeficiencyKind::GZ(z) => (-Complex64::i() * z * x).exp(),
        }
    }

    /// `(self, other) = ∫₀^ℓ self(x) · conj(other(x)) dx`.
    pub fn inner(&self, other: &DeficiencyElement, rel_tol: f64) -> Result<Complex64> {
        if self.length != other.length {
            return Err(Error::InvalidParameter(format!(
                "elements live on different intervals: {} vs {}",
                self.length, other.length
            )));
        }
        Ok(integrate(
            |x| self.eval(x) * other.eval(x).conj(),
            0.0,
            self.length,
            rel_tol,
        )?
        .value)
    }

    pub fn norm(&self, rel_tol: f64) -> Result<f64> {
        Ok(self.inner(self, rel_tol)?.re.sqrt())
    }
}

/// `s(z) = (z - i)/(z + i) · (g_z, g₋)/(g_z, g₊)` with both inner products
/// computed by quadrature. Panel refinement stops once successive estimates
/// agree to `quadrature_tol / 10` relative.
pub fn model_livsic_quadrature(
    ell: f64,
    z: HalfPlanePoint,
    quadrature_tol: f64,
) -> Result<Complex64> {
    let zc = z.to_complex();
    let gz = DeficiencyElement::new(DeficiencyKind::GZ(zc), ell)?;
    let gp = DeficiencyElement::new(DeficiencyKind::GPlus, ell)?;
    let gm = DeficiencyElement::new(DeficiencyKind::GMinus, ell)?;
    let rel_tol = quadrature_tol / 10.0;
    let num = gz.inner(&gm, rel_tol)?;
    let den = gz.inner(&gp, rel_tol)?;
    let i = Complex64::i();
    Ok((zc - i) / (zc + i) * num / den)
}
