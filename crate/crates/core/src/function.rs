//! Analytic functions on the open upper half-plane, probe grids and
//! pointwise comparison.
//!
//! Every function in this crate is represented lazily as an [`AnalyticFn`]:
//! an immutable, shareable evaluator tagged with the role it plays
//! (Livšic, Herglotz, characteristic or generic). Compositions call the
//! evaluators of their factors, so pole detection propagates through every
//! layer.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude above which an evaluation is reported as a pole.
pub const OVERFLOW_GUARD: f64 = 1e12;

/// A point `re + i·im` with `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfPlanePoint {
    re: f64,
    im: f64,
}

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() && im > 0.0 {
            Ok(Self { re, im })
        } else {
            Err(Error::NotInUpperHalfPlane { re, im })
        }
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// The distinguished point `i`.
    pub fn i() -> Self {
        Self { re: 0.0, im: 1.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl<'de> Deserialize<'de> for HalfPlanePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            re: f64,
            im: f64,
        }
        let raw = Raw::deserialize(d)?;
        HalfPlanePoint::new(raw.re, raw.im).map_err(serde::de::Error::custom)
    }
}

impl From<HalfPlanePoint> for Complex64 {
    fn from(p: HalfPlanePoint) -> Self {
        p.to_complex()
    }
}

/// Role a function plays; decides which sanity bounds apply to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnKind {
    /// Contractive, class of Livšic functions.
    Livsic,
    /// Maps the upper half-plane into its closure.
    Herglotz,
    /// Contractive characteristic function of a dissipative extension.
    Characteristic,
    Generic,
}

type Evaluator = dyn Fn(HalfPlanePoint) -> Result<Complex64> + Send + Sync;

/// An immutable analytic function on the upper half-plane.
#[derive(Clone)]
pub struct AnalyticFn {
    eval: Arc<Evaluator>,
    kind: FnKind,
    label: String,
}

impl fmt::Debug for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFn")
            .field("kind", &self.kind)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl AnalyticFn {
    /// Wraps an infallible closure of the complex variable.
    pub fn new<F>(kind: FnKind, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::try_new(kind, label, move |z| Ok(f(z.to_complex())))
    }

    /// Wraps a fallible evaluator; used by compositions so that poles of the
    /// inner functions propagate.
    pub fn try_new<F>(kind: FnKind, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(HalfPlanePoint) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            kind,
            label: label.into(),
        }
    }

    pub fn constant(kind: FnKind, value: Complex64) -> Self {
        Self::new(kind, format!("constant {value}"), move |_| value)
    }

    pub fn kind(&self) -> FnKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same evaluator under a different role tag.
    pub fn with_kind(&self, kind: FnKind) -> Self {
        Self {
            eval: Arc::clone(&self.eval),
            kind,
            label: self.label.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Evaluates at `z`, rejecting non-finite values and values beyond
    /// [`OVERFLOW_GUARD`].
    pub fn eval(&self, z: HalfPlanePoint) -> Result<Complex64> {
        let w = (self.eval)(z)?;
        if !w.re.is_finite() || !w.im.is_finite() || w.norm() > OVERFLOW_GUARD {
            return Err(Error::PoleEncountered { at: z.to_complex() });
        }
        Ok(w)
    }

    /// Convenience for probes at raw complex numbers.
    pub fn eval_at(&self, z: Complex64) -> Result<Complex64> {
        self.eval(HalfPlanePoint::from_complex(z)?)
    }

    /// Largest violation of the bound implied by [`FnKind`] on `grid`:
    /// `|f| - 1` for contractive kinds, `-Im f` for Herglotz. Zero or
    /// negative means the bound holds; `Generic` always returns `0`.
    pub fn kind_violation(&self, grid: &EvaluationGrid) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for &z in grid.points() {
            let w = self.eval(z)?;
            let v = match self.kind {
                FnKind::Livsic | FnKind::Characteristic => w.norm() - 1.0,
                FnKind::Herglotz => -w.im,
                FnKind::Generic => 0.0,
            };
            worst = worst.max(v);
        }
        Ok(worst)
    }

    /// Pointwise product `self · other`, tagged with `kind`.
    pub fn product(&self, other: &AnalyticFn, kind: FnKind) -> AnalyticFn {
        let (f, g) = (self.clone(), other.clone());
        let label = format!("({}) * ({})", f.label, g.label);
        AnalyticFn::try_new(kind, label, move |z| Ok(f.eval(z)? * g.eval(z)?))
    }

    /// Pointwise `factor · self`.
    pub fn scaled(&self, factor: Complex64, kind: FnKind) -> AnalyticFn {
        let f = self.clone();
        let label = format!("{factor} * ({})", f.label);
        AnalyticFn::try_new(kind, label, move |z| Ok(factor * f.eval(z)?))
    }
}

/// A nonempty ordered list of pairwise distinct points of the upper half-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridFile")]
pub struct EvaluationGrid {
    points: Vec<HalfPlanePoint>,
    description: String,
}

#[derive(Deserialize)]
struct GridFile {
    points: Vec<HalfPlanePoint>,
    #[serde(default)]
    description: String,
}

impl TryFrom<GridFile> for EvaluationGrid {
    type Error = Error;

    fn try_from(raw: GridFile) -> Result<Self> {
        EvaluationGrid::new(raw.points, raw.description)
    }
}

impl EvaluationGrid {
    pub fn new(points: Vec<HalfPlanePoint>, description: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid has no points".into()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            // -0.0 and 0.0 are the same point
            let key = ((p.re + 0.0).to_bits(), p.im.to_bits());
            if !seen.insert(key) {
                return Err(Error::InvalidGrid(format!(
                    "duplicate point {}+{}i",
                    p.re, p.im
                )));
            }
        }
        Ok(Self {
            points,
            description: description.into(),
        })
    }

    /// 21×21 lattice on `[-5, 5] × [0.1, 5]` followed by the point `i`.
    pub fn default_probe() -> Self {
        let n = 21;
        let mut points = Vec::with_capacity(n * n + 1);
        for j in 0..n {
            let im = 0.1 + 4.9 * j as f64 / (n - 1) as f64;
            for k in 0..n {
                let re = -5.0 + 10.0 * k as f64 / (n - 1) as f64;
                points.push(HalfPlanePoint { re, im });
            }
        }
        points.push(HalfPlanePoint::i());
        Self {
            points,
            description: "default probe: 21x21 lattice on [-5,5]x[0.1,5] plus i".into(),
        }
    }

    pub fn points(&self) -> &[HalfPlanePoint] {
        &self.points
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGrid(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidGrid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Tolerances shared by the checks in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub identity_tol: f64,
    pub quadrature_tol: f64,
    pub kappa2_zero_threshold: f64,
    pub inversion_rel_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            identity_tol: 1e-10,
            quadrature_tol: 1e-8,
            kappa2_zero_threshold: 1e-12,
            inversion_rel_tol: 0.02,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("identity_tol", self.identity_tol),
            ("quadrature_tol", self.quadrature_tol),
            ("kappa2_zero_threshold", self.kappa2_zero_threshold),
            ("inversion_rel_tol", self.inversion_rel_tol),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} not in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Evaluates `f` at every grid point, in grid order. A pole at one point
/// does not abort the sweep.
pub fn evaluate_on_grid(f: &AnalyticFn, grid: &EvaluationGrid) -> Vec<Result<Complex64>> {
    grid.points().iter().map(|&z| f.eval(z)).collect()
}

/// `max |f(z) - g(z)|` over the grid.
pub fn sup_deviation(f: &AnalyticFn, g: &AnalyticFn, grid: &EvaluationGrid) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in grid.points() {
        let d = (f.eval(z)? - g.eval(z)?).norm();
        worst = worst.max(d);
    }
    Ok(worst)
}
