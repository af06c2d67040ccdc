//! Coupling of two dissipative extensions at the level of their functions.
//!
//! Given von Neumann parameters `κ₁, κ₂`, [`coupling_angles`] produces the
//! angles `(α, β)` of the one-dimensional neutral subspace used to glue the
//! two symmetric operators together. [`couple_livsic`] then gives the Livšic
//! function of the coupled symmetric operator,
//!
//! ```text
//!        cos α cos β s₁ - s₁ s₂ + sin α sin β s₂
//! s = ---------------------------------------------
//!      1 - (sin α sin β s₁ + cos α cos β s₂)
//! ```
//!
//! and with matched angles the characteristic function of the coupling
//! relative to `κ₁κ₂` factors as `S₁ · S₂` ([`multiply_characteristic`]).

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{extract_kappa, VonNeumannParameter};
use crate::function::{AnalyticFn, EvaluationGrid, FnKind, HalfPlanePoint, ToleranceConfig};

/// Angles of the neutral subspace for a pair of extension parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingAngles {
    alpha: f64,
    beta: f64,
    kappa2_is_zero: bool,
}

impl CouplingAngles {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa2_is_zero(&self) -> bool {
        self.kappa2_is_zero
    }
}

fn check_unit_interval(name: &'static str, v: f64) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: v,
            range: "[0, 1)",
        })
    }
}

/// Angles for `κ₁, κ₂ ∈ [0, 1)` using the default `κ₂ = 0` threshold.
pub fn coupling_angles(kappa1: f64, kappa2: f64) -> Result<CouplingAngles> {
    coupling_angles_with_threshold(
        kappa1,
        kappa2,
        ToleranceConfig::default().kappa2_zero_threshold,
    )
}

/// `tan α = (1/κ₂)·√((1-κ₂²)/(1-κ₁²))`, `tan β = κ₁κ₂ tan α`; for
/// `κ₂ ≤ threshold`, `α = π/2` and `β = arcsin κ₁`.
pub fn coupling_angles_with_threshold(
    kappa1: f64,
    kappa2: f64,
    threshold: f64,
) -> Result<CouplingAngles> {
    check_unit_interval("kappa1", kappa1)?;
    check_unit_interval("kappa2", kappa2)?;
    if kappa2 <= threshold {
        return Ok(CouplingAngles {
            alpha: FRAC_PI_2,
            beta: kappa1.asin(),
            kappa2_is_zero: true,
        });
    }
    let tan_alpha = ((1.0 - kappa2 * kappa2) / (1.0 - kappa1 * kappa1)).sqrt() / kappa2;
    let alpha = tan_alpha.atan();
    let beta = (kappa1 * kappa2 * tan_alpha).atan();
    Ok(CouplingAngles {
        alpha,
        beta,
        kappa2_is_zero: false,
    })
}

#[derive(Debug, Clone, Copy)]
struct AngleProducts {
    cc: f64,
    ss: f64,
}

impl AngleProducts {
    fn new(alpha: f64, beta: f64) -> Self {
        Self {
            cc: alpha.cos() * beta.cos(),
            ss: alpha.sin() * beta.sin(),
        }
    }
}

fn coupled_value(p: AngleProducts, s1: Complex64, s2: Complex64) -> Option<Complex64> {
    let num = p.cc * s1 - s1 * s2 + p.ss * s2;
    let den = 1.0 - (p.ss * s1 + p.cc * s2);
    if den.norm() < 1e-300 {
        None
    } else {
        Some(num / den)
    }
}

/// The coupling formula for arbitrary angles. Used directly for the
/// degenerate collapses `α = β = 0` (gives `s₁`) and `α = β = π/2`
/// (gives `s₂`); [`couple_livsic`] is the matched-angle entry point.
pub fn couple_livsic_raw(s1: &AnalyticFn, s2: &AnalyticFn, alpha: f64, beta: f64) -> AnalyticFn {
    let p = AngleProducts::new(alpha, beta);
    let (f, g) = (s1.clone(), s2.clone());
    let label = format!(
        "couple[{}, {}; alpha={alpha}, beta={beta}]",
        f.label(),
        g.label()
    );
    AnalyticFn::try_new(FnKind::Livsic, label, move |z| {
        coupled_value(p, f.eval(z)?, g.eval(z)?)
            .ok_or(Error::PoleEncountered { at: z.to_complex() })
    })
}

pub fn couple_livsic(s1: &AnalyticFn, s2: &AnalyticFn, angles: &CouplingAngles) -> AnalyticFn {
    couple_livsic_raw(s1, s2, angles.alpha, angles.beta)
}

/// Supremum over `grid` of the defect in
///
/// ```text
///  s - k      a₁s₁ + a₂s₂ - s₁s₂ - k
/// ------- = ---------------------------
/// k s - 1    a₂s₁ + a₁s₂ - k s₁s₂ - 1
/// ```
///
/// with `s` the coupled function, `a₁ = cos α cos β + k sin α sin β` and
/// `a₂ = sin α sin β + k cos α cos β`.
pub fn general_k_identity_defect(
    k: f64,
    s1: &AnalyticFn,
    s2: &AnalyticFn,
    angles: &CouplingAngles,
    grid: &EvaluationGrid,
) -> Result<f64> {
    check_unit_interval("k", k)?;
    let p = AngleProducts::new(angles.alpha, angles.beta);
    let a1 = p.cc + k * p.ss;
    let a2 = p.ss + k * p.cc;
    let coupled = couple_livsic(s1, s2, angles);
    let mut worst = 0.0f64;
    for &z in grid.points() {
        let s = coupled.eval(z)?;
        let (u, v) = (s1.eval(z)?, s2.eval(z)?);
        let lhs_den = k * s - 1.0;
        let rhs_den = a2 * u + a1 * v - k * u * v - 1.0;
        if lhs_den.norm() == 0.0 || rhs_den.norm() == 0.0 {
            return Err(Error::PoleEncountered { at: z.to_complex() });
        }
        let lhs = (s - k) / lhs_den;
        let rhs = (a1 * u + a2 * v - u * v - k) / rhs_den;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `cos²α · M₁ + sin²α · M₂`.
pub fn add_weyl(m1: &AnalyticFn, m2: &AnalyticFn, alpha: f64) -> AnalyticFn {
    let (c2, s2) = (alpha.cos().powi(2), alpha.sin().powi(2));
    let (f, g) = (m1.clone(), m2.clone());
    let label = format!("add[{}, {}; alpha={alpha}]", f.label(), g.label());
    AnalyticFn::try_new(FnKind::Herglotz, label, move |z| {
        Ok(c2 * f.eval(z)? + s2 * g.eval(z)?)
    })
}

/// A characteristic function paired with its von Neumann parameter.
#[derive(Debug, Clone)]
pub struct TaggedCharacteristic {
    function: AnalyticFn,
    kappa: VonNeumannParameter,
}

impl TaggedCharacteristic {
    /// Fails with [`Error::TagMismatch`] unless `|S(i) - κ| < tol`.
    pub fn new(function: AnalyticFn, kappa: VonNeumannParameter, tol: f64) -> Result<Self> {
        let at_i = function.eval(HalfPlanePoint::i())?;
        let deviation = (at_i - kappa.value()).norm();
        if deviation.is_nan() || deviation >= tol {
            return Err(Error::TagMismatch { deviation });
        }
        Ok(Self {
            function: function.with_kind(FnKind::Characteristic),
            kappa,
        })
    }

    /// Tags `S` with `S(i)`.
    pub fn from_function(function: AnalyticFn) -> Result<Self> {
        let kappa = extract_kappa(&function)?;
        Ok(Self {
            function: function.with_kind(FnKind::Characteristic),
            kappa,
        })
    }

    pub fn function(&self) -> &AnalyticFn {
        &self.function
    }

    pub fn kappa(&self) -> VonNeumannParameter {
        self.kappa
    }
}

/// Pointwise product `S₁·S₂` tagged with `κ₁κ₂`.
pub fn multiply_characteristic(
    t1: &TaggedCharacteristic,
    t2: &TaggedCharacteristic,
) -> TaggedCharacteristic {
    let kappa = VonNeumannParameter::new(t1.kappa.value() * t2.kappa.value())
        .expect("product of two parameters in the unit disk stays in the disk");
    TaggedCharacteristic {
        function: t1.function.product(&t2.function, FnKind::Characteristic),
        kappa,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub property: &'static str,
    pub description: &'static str,
    pub pass: bool,
    pub worst_deviation: f64,
    pub pairs_checked: usize,
    pub grid: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassPropertiesReport {
    pub properties: Vec<PropertyResult>,
}

impl ClassPropertiesReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn get(&self, property: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.property == property)
    }
}

const CONVEX_WEIGHTS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

struct Accumulator {
    worst: f64,
    pairs: usize,
    pass: bool,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            worst: 0.0,
            pairs: 0,
            pass: true,
        }
    }

    fn record(&mut self, deviation: f64, ok: bool) {
        self.worst = self.worst.max(deviation);
        self.pass &= ok;
    }

    fn finish(
        self,
        property: &'static str,
        description: &'static str,
        grid: &EvaluationGrid,
    ) -> PropertyResult {
        PropertyResult {
            property,
            description,
            pass: self.pass,
            worst_deviation: self.worst,
            pairs_checked: self.pairs,
            grid: grid.description().to_string(),
        }
    }
}

fn is_normalized(m: &AnalyticFn, tol: f64) -> Result<bool> {
    Ok((m.eval(HalfPlanePoint::i())? - Complex64::i()).norm() < tol)
}

/// Checks the closure properties of the three function classes over every
/// applicable pair (including self-pairs) of `samples`:
///
/// * `i`: convex combinations of Herglotz samples stay Herglotz, and stay
///   normalized (`M(i) = i`) when both inputs are;
/// * `ii`: products of characteristic samples are contractive with value
///   `κ₁κ₂` at `i`;
/// * `iii`: a product with a factor vanishing at `i` vanishes at `i`
///   (Livšic samples count as such factors);
/// * `iv`: products of Livšic samples vanish at `i`.
///
/// A property with no applicable pair passes vacuously with
/// `pairs_checked = 0`.
pub fn verify_class_properties(
    samples: &[AnalyticFn],
    cfg: &ToleranceConfig,
    grid: &EvaluationGrid,
) -> Result<ClassPropertiesReport> {
    let tol = cfg.identity_tol;
    let of_kind = |k: FnKind| {
        samples
            .iter()
            .filter(move |f| f.kind() == k)
            .collect::<Vec<_>>()
    };
    let herglotz = of_kind(FnKind::Herglotz);
    let characteristic = of_kind(FnKind::Characteristic);
    let livsic = of_kind(FnKind::Livsic);

    let mut convex = Accumulator::new();
    for (a, m1) in herglotz.iter().enumerate() {
        for m2 in &herglotz[a..] {
            let normalized = is_normalized(m1, tol)? && is_normalized(m2, tol)?;
            for &p in &CONVEX_WEIGHTS {
                // p = cos²α
                let m = add_weyl(m1, m2, p.sqrt().acos());
                let violation = m.kind_violation(grid)?;
                let mut min_im = f64::INFINITY;
                for &z in grid.points() {
                    min_im = min_im.min(m.eval(z)?.im);
                }
                let mut dev = violation.max(0.0);
                let mut ok = min_im > 0.0;
                if normalized {
                    let d = (m.eval(HalfPlanePoint::i())? - Complex64::i()).norm();
                    dev = dev.max(d);
                    ok &= d < tol;
                }
                convex.record(dev, ok);
            }
            convex.pairs += 1;
        }
    }

    let tagged: Vec<TaggedCharacteristic> = characteristic
        .iter()
        .map(|f| TaggedCharacteristic::from_function((*f).clone()))
        .collect::<Result<_>>()?;
    let mut closed = Accumulator::new();
    for (a, t1) in tagged.iter().enumerate() {
        for t2 in &tagged[a..] {
            let prod = multiply_characteristic(t1, t2);
            let excess = prod.function.kind_violation(grid)?;
            let at_i = (prod.function.eval(HalfPlanePoint::i())? - prod.kappa.value()).norm();
            let dev = excess.max(0.0).max(at_i);
            closed.record(dev, excess <= tol && at_i < tol);
            closed.pairs += 1;
        }
    }

    // class-C factors: characteristic samples with S(i) = 0, and Livšic samples
    let mut vanishing: Vec<TaggedCharacteristic> = tagged
        .iter()
        .filter(|t| t.kappa.modulus() < tol)
        .cloned()
        .collect();
    for s in &livsic {
        if s.eval(HalfPlanePoint::i())?.norm() < tol {
            vanishing.push(TaggedCharacteristic::from_function((*s).clone())?);
        }
    }
    let mut ideal = Accumulator::new();
    for c in &vanishing {
        for other in tagged.iter().chain(vanishing.iter()) {
            for prod in [
                multiply_characteristic(c, other),
                multiply_characteristic(other, c),
            ] {
                let at_i = prod.function.eval(HalfPlanePoint::i())?.norm();
                let excess = prod.function.kind_violation(grid)?;
                ideal.record(at_i.max(excess.max(0.0)), at_i < tol && excess <= tol);
            }
            ideal.pairs += 1;
        }
    }

    let mut mult = Accumulator::new();
    for (a, s1) in livsic.iter().enumerate() {
        for s2 in &livsic[a..] {
            let prod = s1.product(s2, FnKind::Livsic);
            let at_i = prod.eval(HalfPlanePoint::i())?.norm();
            let excess = prod.kind_violation(grid)?;
            mult.record(at_i.max(excess.max(0.0)), at_i < tol && excess <= tol);
            mult.pairs += 1;
        }
    }

    Ok(ClassPropertiesReport {
        properties: vec![
            convex.finish("i", "Herglotz class is convex", grid),
            closed.finish(
                "ii",
                "characteristic class closed under multiplication",
                grid,
            ),
            ideal.finish(
                "iii",
                "Livsic class is a two-sided ideal of the characteristic class",
                grid,
            ),
            mult.finish("iv", "Livsic class closed under multiplication", grid),
        ],
    })
}
