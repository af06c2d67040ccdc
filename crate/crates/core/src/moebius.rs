//! Linear-fractional maps `z ↦ (az + b)/(cz + d)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extension::VonNeumannParameter;

/// Smallest admissible `|ad - bc|`.
pub const DET_THRESHOLD: f64 = 1e-14;

const POLE_REL_GUARD: f64 = 1e-14;

/// Named constructors for [`make_map`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    /// `(z - i)/(z + i)`: upper half-plane onto the unit disk.
    Cayley,
    /// `i(1 + w)/(1 - w)`: inverse of [`MapKind::Cayley`].
    InverseCayley,
    /// `(w - κ)/(κ̄ w - 1)`: the disk automorphism exchanging `0` and `κ`.
    DiskAuto(VonNeumannParameter),
    /// `(cos α · z - sin α)/(cos α + sin α · z)`.
    HalfPlaneRotation(f64),
    Raw(Complex64, Complex64, Complex64, Complex64),
}

/// Raw coefficients are stored as given; proportional matrices describe the
/// same map, see [`MoebiusMap::approx_eq`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

pub fn make_map(kind: MapKind) -> Result<MoebiusMap> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    match kind {
        MapKind::Cayley => MoebiusMap::new(one, -i, one, i),
        MapKind::InverseCayley => MoebiusMap::new(i, i, -one, one),
        MapKind::DiskAuto(kappa) => {
            let k = kappa.value();
            MoebiusMap::new(one, -k, k.conj(), -one)
        }
        MapKind::HalfPlaneRotation(alpha) => {
            let (s, c) = alpha.sin_cos();
            MoebiusMap::new(one * c, -one * s, one * s, one * c)
        }
        MapKind::Raw(a, b, c, d) => MoebiusMap::new(a, b, c, d),
    }
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = (a * d - b * c).norm();
        if det.is_nan() || det <= DET_THRESHOLD {
            return Err(Error::DegenerateMap { det });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// `(az + b)/(cz + d)`; fails when `|cz + d| < 1e-14·(|c| + |d|)`.
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() < POLE_REL_GUARD * (self.c.norm() + self.d.norm()) || !den.norm().is_finite()
        {
            return Err(Error::PoleEncountered { at: z });
        }
        Ok((self.a * z + self.b) / den)
    }

    /// `self ∘ other`, i.e. `z ↦ self(other(z))`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// The inverse map, via the adjugate matrix.
    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Coefficients divided by this map's largest-magnitude entry.
    fn normalized_by(&self, idx: usize) -> Option<[Complex64; 4]> {
        let coeffs = self.coefficients();
        let pivot = coeffs[idx];
        if pivot.norm() == 0.0 {
            return None;
        }
        Some(coeffs.map(|x| x / pivot))
    }

    fn pivot_index(&self) -> usize {
        let coeffs = self.coefficients();
        (0..4)
            .max_by(|&i, &j| coeffs[i].norm().total_cmp(&coeffs[j].norm()))
            .unwrap_or(0)
    }

    /// Whether the coefficient matrices are proportional, up to `tol` after
    /// normalizing by the largest-magnitude entry of `self`.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let idx = self.pivot_index();
        match (self.normalized_by(idx), other.normalized_by(idx)) {
            (Some(x), Some(y)) => x.iter().zip(y.iter()).all(|(p, q)| (p - q).norm() <= tol),
            _ => false,
        }
    }
}
