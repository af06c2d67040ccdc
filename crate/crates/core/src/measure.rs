//! Measures on the real line and the Herglotz functions they represent,
//!
//! ```text
//! M(z) = ∫ [1/(λ - z) - λ/(1 + λ²)] dμ(λ),
//! ```
//!
//! together with the normalization `∫ dμ/(1 + λ²) = 1` (equivalently
//! `M(i) = i`), the Cayley bridge `s = (M - i)/(M + i)`, and recovery of the
//! measure from boundary values of `Im M`.
//!
//! Only finite atomic parts plus a density sampled on a bounded window are
//! representable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{AnalyticFn, FnKind, HalfPlanePoint};
use crate::moebius::{make_map, MapKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Nonnegative density sampled at `x_lo + k·h`, `k = 0..values.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledDensity {
    pub x_lo: f64,
    pub x_hi: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl SampledDensity {
    pub fn from_fn(x_lo: f64, x_hi: f64, intervals: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = (x_hi - x_lo) / intervals as f64;
        let values = (0..=intervals).map(|k| f(x_lo + k as f64 * h)).collect();
        Self {
            x_lo,
            x_hi,
            h,
            values,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMeasure(msg));
        if !(self.x_lo.is_finite() && self.x_hi.is_finite() && self.x_lo < self.x_hi) {
            return bad(format!(
                "density window [{}, {}] is empty",
                self.x_lo, self.x_hi
            ));
        }
        if self.h.is_nan() || self.h <= 0.0 || self.values.len() < 2 {
            return bad("density needs a positive spacing and at least two samples".into());
        }
        let span = self.h * (self.values.len() - 1) as f64;
        if (span - (self.x_hi - self.x_lo)).abs() > 1e-9 * (self.x_hi - self.x_lo) {
            return bad(format!(
                "{} samples at spacing {} do not cover [{}, {}]",
                self.values.len(),
                self.h,
                self.x_lo,
                self.x_hi
            ));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return bad(format!(
                "density value {v} is not a finite nonnegative number"
            ));
        }
        Ok(())
    }

    fn node(&self, k: usize) -> f64 {
        self.x_lo + k as f64 * self.h
    }

    /// Composite Simpson on every `stride`-th sample; an odd trailing count
    /// of intervals is closed with the 3/8 rule.
    fn integrate<F: Fn(f64, f64) -> Complex64>(&self, stride: usize, f: &F) -> Complex64 {
        let n = (self.values.len() - 1) / stride;
        let h = self.h * stride as f64;
        let g = |j: usize| {
            let k = j * stride;
            f(self.node(k), self.values[k])
        };
        match n {
            0 => Complex64::new(0.0, 0.0),
            1 => 0.5 * h * (g(0) + g(1)),
            _ => {
                let simpson_end = if n.is_multiple_of(2) { n } else { n - 3 };
                let mut acc = Complex64::new(0.0, 0.0);
                for j in (0..simpson_end).step_by(2) {
                    acc += h / 3.0 * (g(j) + 4.0 * g(j + 1) + g(j + 2));
                }
                if simpson_end < n {
                    let j = simpson_end;
                    acc += 3.0 * h / 8.0 * (g(j) + 3.0 * g(j + 1) + 3.0 * g(j + 2) + g(j + 3));
                }
                acc
            }
        }
    }

    /// Integral over the lattice and its change against the rule on every
    /// second sample.
    fn integrate_with_error<F: Fn(f64, f64) -> Complex64>(&self, f: &F) -> (Complex64, f64) {
        let fine = self.integrate(1, f);
        let err = if self.values.len() > 5 {
            (fine - self.integrate(2, f)).norm()
        } else {
            f64::NAN
        };
        (fine, err)
    }
}

/// Finite atoms plus an optional sampled density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelMeasureModel {
    atoms: Vec<Atom>,
    density: Option<SampledDensity>,
}

fn kernel(lambda: f64, z: Complex64) -> Complex64 {
    1.0 / (lambda - z) - lambda / (1.0 + lambda * lambda)
}

impl BorelMeasureModel {
    pub fn new(atoms: Vec<Atom>, density: Option<SampledDensity>) -> Result<Self> {
        for a in &atoms {
            if !(a.location.is_finite() && a.weight.is_finite() && a.weight > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "atom at {} has weight {}",
                    a.location, a.weight
                )));
            }
        }
        let mut locs: Vec<f64> = atoms.iter().map(|a| a.location).collect();
        locs.sort_by(f64::total_cmp);
        if let Some(w) = locs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidMeasure(format!("two atoms at {}", w[0])));
        }
        if let Some(d) = &density {
            d.validate()?;
        }
        Ok(Self { atoms, density })
    }

    pub fn atoms_only(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms
                .iter()
                .map(|&(location, weight)| Atom { location, weight })
                .collect(),
            None,
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&SampledDensity> {
        self.density.as_ref()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        Self::new(raw.atoms, raw.density)
    }

    fn has_mass(&self) -> bool {
        !self.atoms.is_empty()
            || self
                .density
                .as_ref()
                .is_some_and(|d| d.values.iter().any(|&v| v > 0.0))
    }

    /// `∫ dμ(λ)/(1 + λ²)`.
    pub fn normalization_integral(&self) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.weight / (1.0 + a.location * a.location))
            .sum();
        let dens = self.density.as_ref().map_or(0.0, |d| {
            d.integrate(1, &|x, v| Complex64::new(v / (1.0 + x * x), 0.0))
                .re
        });
        atoms + dens
    }

    /// Kernel integral at `z`, with the quadrature error estimate of the
    /// density part (zero when there is no density).
    pub fn kernel_integral(&self, z: Complex64) -> (Complex64, f64) {
        let mut total: Complex64 = self
            .atoms
            .iter()
            .map(|a| a.weight * kernel(a.location, z))
            .sum();
        let mut err = 0.0;
        if let Some(d) = &self.density {
            let (v, e) = d.integrate_with_error(&|x, rho| rho * kernel(x, z));
            total += v;
            err = e;
        }
        (total, err)
    }
}

pub fn realize_herglotz(mu: &BorelMeasureModel) -> Result<AnalyticFn> {
    if !mu.has_mass() {
        return Err(Error::EmptyMeasure);
    }
    let mu = mu.clone();
    let label = format!(
        "herglotz[{} atoms{}]",
        mu.atoms.len(),
        if mu.density.is_some() {
            " + density"
        } else {
            ""
        }
    );
    Ok(AnalyticFn::new(FnKind::Herglotz, label, move |z| {
        mu.kernel_integral(z).0
    }))
}

/// `|∫ dμ/(1 + λ²) - 1|`.
pub fn normalization_defect(mu: &BorelMeasureModel) -> f64 {
    (mu.normalization_integral() - 1.0).abs()
}

/// `s = (M - i)/(M + i)`.
pub fn livsic_from_weyl(m: &AnalyticFn) -> AnalyticFn {
    let cayley = make_map(MapKind::Cayley).expect("Cayley map is nondegenerate");
    let m = m.clone();
    let label = format!("cayley[{}]", m.label());
    AnalyticFn::try_new(FnKind::Livsic, label, move |z: HalfPlanePoint| {
        cayley
            .apply(m.eval(z)?)
            .map_err(|_| Error::PoleEncountered { at: z.to_complex() })
    })
}

/// Real window `[lo, hi]` scanned by [`stieltjes_invert`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidParameter(format!(
                "window [{lo}, {hi}] is empty"
            )))
        }
    }
}

/// Tuning of [`stieltjes_invert_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    /// Number of equally spaced scan points, endpoints included.
    pub scan_points: usize,
    /// `ε·Im M` must exceed this at the smallest `ε` for an atom.
    pub atom_floor: f64,
    /// Largest relative change of `ε·Im M` between consecutive `ε` for an atom.
    pub atom_stability: f64,
    /// Density estimates within this many multiples of the largest `ε` of a
    /// detected atom are not reported.
    pub atom_exclusion: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            scan_points: 2001,
            atom_floor: 1e-6,
            atom_stability: 0.1,
            atom_exclusion: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatedAtom {
    pub location: f64,
    /// Extrapolation of `ε·Im M(λ + iε)` to `ε = 0`.
    pub weight: f64,
    /// `|weight - ε_min·Im M(λ + iε_min)|`.
    pub residual: f64,
    /// `ε·Im M` at each `ε` of the schedule.
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityPoint {
    pub x: f64,
    pub value: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionEstimate {
    pub window: Window,
    pub scan_spacing: f64,
    pub eps_schedule: Vec<f64>,
    pub atoms: Vec<EstimatedAtom>,
    /// Density on the scan lattice, excluding neighbourhoods of atoms.
    pub density: Vec<DensityPoint>,
}

impl InversionEstimate {
    /// The estimate as a measure model. The density is kept only when some
    /// value exceeds `floor`; excluded points near atoms are set to zero.
    pub fn to_measure(&self, floor: f64) -> Result<BorelMeasureModel> {
        let atoms = self
            .atoms
            .iter()
            .filter(|a| a.weight > 0.0)
            .map(|a| Atom {
                location: a.location,
                weight: a.weight,
            })
            .collect();
        let density = if self.density.iter().any(|p| p.value > floor) {
            let n = ((self.window.hi - self.window.lo) / self.scan_spacing).round() as usize;
            let mut values = vec![0.0; n + 1];
            for p in &self.density {
                let k = ((p.x - self.window.lo) / self.scan_spacing).round() as usize;
                if k <= n {
                    values[k] = p.value.max(0.0);
                }
            }
            Some(SampledDensity {
                x_lo: self.window.lo,
                x_hi: self.window.hi,
                h: self.scan_spacing,
                values,
            })
        } else {
            None
        };
        BorelMeasureModel::new(atoms, density)
    }
}

/// Value at `0` of the polynomial through `(xs[k], ys[k])` (Neville).
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for level in 1..n {
        for k in 0..n - level {
            let (x0, x1) = (xs[k], xs[k + level]);
            p[k] = (x1 * p[k] - x0 * p[k + 1]) / (x1 - x0);
        }
    }
    p[0]
}

fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn stieltjes_invert(
    m: &AnalyticFn,
    window: Window,
    eps_schedule: &[f64],
) -> Result<InversionEstimate> {
    stieltjes_invert_with(m, window, eps_schedule, &InversionOptions::default())
}

/// Recovers the representing measure of `m` on `window` from
/// `Im M(x + iε)` for the decreasing `eps_schedule`.
///
/// Peaks of `Im M` at the largest `ε` are tracked down the schedule by
/// golden-section search. A peak is an atom when `ε·Im M` stays above
/// `atom_floor` and changes by less than `atom_stability` (relative) from one
/// `ε` to the next; its weight is the polynomial extrapolation of `ε·Im M`
/// to `ε = 0`. The density is the same extrapolation of
/// `(1/π)·Im M(x + iε)` with the fitted atoms subtracted.
pub fn stieltjes_invert_with(
    m: &AnalyticFn,
    window: Window,
    eps_schedule: &[f64],
    opts: &InversionOptions,
) -> Result<InversionEstimate> {
    if eps_schedule.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two values of eps".into(),
        ));
    }
    if eps_schedule.iter().any(|&e| !(e > 0.0 && e.is_finite()))
        || eps_schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidParameter(
            "eps schedule must be strictly decreasing positive reals".into(),
        ));
    }
    if opts.scan_points < 3 {
        return Err(Error::InvalidParameter(
            "need at least three scan points".into(),
        ));
    }
    let im_m = |x: f64, eps: f64| -> Result<f64> { Ok(m.eval(HalfPlanePoint::new(x, eps)?)?.im) };

    let n = opts.scan_points - 1;
    let h = (window.hi - window.lo) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|k| window.lo + k as f64 * h).collect();
    let eps0 = eps_schedule[0];
    let coarse: Vec<f64> = xs.iter().map(|&x| im_m(x, eps0)).collect::<Result<_>>()?;

    let med = median(&coarse);
    for (side, v) in [("lower", coarse[0]), ("upper", coarse[n])] {
        if v > 10.0 * med {
            return Err(Error::WindowTooSmall {
                side,
                edge_value: v,
                median: med,
            });
        }
    }

    let mut atoms = Vec::new();
    for k in 1..n {
        if !(coarse[k] > coarse[k - 1] && coarse[k] >= coarse[k + 1]) {
            continue;
        }
        let mut loc = xs[k];
        let mut samples = Vec::with_capacity(eps_schedule.len());
        for &eps in eps_schedule {
            let lo = (loc - h).max(window.lo);
            let hi = (loc + h).min(window.hi);
            loc = golden_max(|x| im_m(x, eps), lo, hi, eps * 1e-3)?;
            samples.push(eps * im_m(loc, eps)?);
        }
        let last = *samples.last().expect("schedule is nonempty");
        let stable = samples
            .windows(2)
            .all(|w| (w[1] - w[0]).abs() < opts.atom_stability * w[0].abs());
        if last > opts.atom_floor && stable {
            let weight = extrapolate_to_zero(eps_schedule, &samples);
            atoms.push(EstimatedAtom {
                location: loc,
                weight,
                residual: (weight - last).abs(),
                samples,
            });
        }
    }

    let exclusion = opts.atom_exclusion * eps0;
    let mut density = Vec::new();
    for &x in &xs {
        if atoms.iter().any(|a| (x - a.location).abs() < exclusion) {
            continue;
        }
        let vals: Vec<f64> = eps_schedule
            .iter()
            .map(|&eps| {
                let fitted: f64 = atoms
                    .iter()
                    .map(|a| a.weight * eps / ((x - a.location).powi(2) + eps * eps))
                    .sum();
                Ok((im_m(x, eps)? - fitted) / std::f64::consts::PI)
            })
            .collect::<Result<_>>()?;
        let value = extrapolate_to_zero(eps_schedule, &vals);
        density.push(DensityPoint {
            x,
            value,
            residual: (value - vals[vals.len() - 1]).abs(),
        });
    }

    Ok(InversionEstimate {
        window,
        scan_spacing: h,
        eps_schedule: eps_schedule.to_vec(),
        atoms,
        density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{sup_deviation, EvaluationGrid};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

    #[test]
    fn single_atom_at_origin() {
        let mu = BorelMeasureModel::atoms_only(&[(0.0, 1.0)]).unwrap();
        let m = realize_herglotz(&mu).unwrap();
        let grid = EvaluationGrid::default_probe();
        let direct = AnalyticFn::new(FnKind::Herglotz, "-1/z", |z| -1.0 / z);
        assert!(sup_deviation(&m, &direct, &grid).unwrap() < 1e-15);
        assert_eq!(m.eval(HalfPlanePoint::i()).unwrap(), c(0.0, 1.0));
        assert_eq!(normalization_defect(&mu), 0.0);
    }

    #[test]
    fn symmetric_atoms() {
        let mu = BorelMeasureModel::atoms_only(&[(1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let m = realize_herglotz(&mu).unwrap();
        let grid = EvaluationGrid::default_probe();
        let direct = AnalyticFn::new(FnKind::Herglotz, "2z/(1-z^2)", |z| 2.0 * z / (1.0 - z * z));
        assert!(sup_deviation(&m, &direct, &grid).unwrap() < 1e-13);
        assert!((m.eval(HalfPlanePoint::i()).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(normalization_defect(&mu), 0.0);
    }

    #[test]
    fn weighted_atom() {
        let mu = BorelMeasureModel::atoms_only(&[(1.0, 2.0)]).unwrap();
        let m = realize_herglotz(&mu).unwrap();
        let z = HalfPlanePoint::new(0.3, 0.7).unwrap();
        let expected = 2.0 / (1.0 - z.to_complex()) - 1.0;
        assert!((m.eval(z).unwrap() - expected).norm() < 1e-15);
        assert!((m.eval(HalfPlanePoint::i()).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        let half = BorelMeasureModel::atoms_only(&[(1.0, 1.0)]).unwrap();
        assert!((normalization_defect(&half) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn invalid_measures() {
        assert!(BorelMeasureModel::atoms_only(&[(0.0, 0.0)]).is_err());
        assert!(BorelMeasureModel::atoms_only(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
        let empty = BorelMeasureModel::new(vec![], None).unwrap();
        assert!(matches!(realize_herglotz(&empty), Err(Error::EmptyMeasure)));
        let bad = SampledDensity {
            x_lo: 0.0,
            x_hi: 1.0,
            h: 0.3,
            values: vec![1.0; 3],
        };
        assert!(BorelMeasureModel::new(vec![], Some(bad)).is_err());
        let neg = SampledDensity::from_fn(0.0, 1.0, 4, |x| x - 0.5);
        assert!(BorelMeasureModel::new(vec![], Some(neg)).is_err());
    }

    #[test]
    fn json_schema() {
        let text = r#"{"atoms":[{"location":0.0,"weight":1.0}],"density":null}"#;
        let mu = BorelMeasureModel::from_json(text).unwrap();
        assert_eq!(mu.atoms().len(), 1);
        let text = r#"{"atoms":[],"density":{"x_lo":-1,"x_hi":1,"h":0.5,"values":[0,1,2,1,0]}}"#;
        let mu = BorelMeasureModel::from_json(text).unwrap();
        assert!(mu.density().is_some());
    }

    #[test]
    fn simpson_handles_odd_interval_counts() {
        // ∫_0^1 x³ dx with 5 intervals: Simpson + 3/8 rule are exact for cubics
        let d = SampledDensity::from_fn(0.0, 1.0, 5, |x| x * x * x);
        let v = d.integrate(1, &|_, rho| Complex64::new(rho, 0.0));
        assert!((v.re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cayley_bridge_examples() {
        let grid = EvaluationGrid::default_probe();
        let m = AnalyticFn::new(FnKind::Herglotz, "-1/z", |z| -1.0 / z);
        let s = livsic_from_weyl(&m);
        let direct = AnalyticFn::new(FnKind::Livsic, "(1+iz)/(1-iz)", |z| {
            (1.0 + Complex64::i() * z) / (1.0 - Complex64::i() * z)
        });
        assert!(sup_deviation(&s, &direct, &grid).unwrap() < 1e-14);
        assert_eq!(s.eval(HalfPlanePoint::i()).unwrap(), c(0.0, 0.0));

        let const_i = AnalyticFn::constant(FnKind::Herglotz, c(0.0, 1.0));
        assert_eq!(
            livsic_from_weyl(&const_i)
                .eval(HalfPlanePoint::new(3.0, 0.2).unwrap())
                .unwrap(),
            c(0.0, 0.0)
        );

        let two =
            realize_herglotz(&BorelMeasureModel::atoms_only(&[(1.0, 1.0), (-1.0, 1.0)]).unwrap())
                .unwrap();
        assert!(
            livsic_from_weyl(&two)
                .eval(HalfPlanePoint::i())
                .unwrap()
                .norm()
                < 1e-15
        );

        let bad = AnalyticFn::constant(FnKind::Herglotz, c(0.0, -1.0));
        assert!(livsic_from_weyl(&bad).eval(HalfPlanePoint::i()).is_err());
    }

    #[test]
    fn invert_single_atom() {
        let m = AnalyticFn::new(FnKind::Herglotz, "-1/z", |z| -1.0 / z);
        let est = stieltjes_invert(&m, Window::new(-2.0, 2.0).unwrap(), &EPS).unwrap();
        assert_eq!(est.atoms.len(), 1);
        let a = &est.atoms[0];
        assert!(a.location.abs() <= est.scan_spacing);
        assert!((a.weight - 1.0).abs() < 0.02);
        assert!(est.density.iter().all(|p| p.value.abs() < 1e-6));
        assert!(est.to_measure(1e-6).unwrap().density().is_none());
    }

    #[test]
    fn invert_two_atoms() {
        let mu = BorelMeasureModel::atoms_only(&[(1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let m = realize_herglotz(&mu).unwrap();
        let est = stieltjes_invert(&m, Window::new(-2.0, 2.0).unwrap(), &EPS).unwrap();
        assert_eq!(est.atoms.len(), 2);
        for (a, want) in est.atoms.iter().zip([-1.0, 1.0]) {
            assert!((a.location - want).abs() <= est.scan_spacing);
            assert!((a.weight - 1.0).abs() < 0.02);
        }
    }

    #[test]
    fn invert_off_lattice_atom() {
        let mu = BorelMeasureModel::atoms_only(&[(0.123_456, 0.7)]).unwrap();
        let m = realize_herglotz(&mu).unwrap();
        let est = stieltjes_invert(&m, Window::new(-1.0, 1.0).unwrap(), &EPS).unwrap();
        assert_eq!(est.atoms.len(), 1);
        assert!((est.atoms[0].location - 0.123_456).abs() < est.scan_spacing);
        assert!((est.atoms[0].weight - 0.7).abs() < 0.02 * 0.7);
    }

    #[test]
    fn invert_density() {
        let rho = |x: f64| 1.0 / (std::f64::consts::PI * (1.0 + x * x));
        let d = SampledDensity::from_fn(-20.0, 20.0, 8000, rho);
        let mu = BorelMeasureModel::new(vec![], Some(d)).unwrap();
        let m = realize_herglotz(&mu).unwrap();
        let opts = InversionOptions {
            scan_points: 201,
            ..Default::default()
        };
        let est =
            stieltjes_invert_with(&m, Window::new(-5.0, 5.0).unwrap(), &[0.4, 0.2, 0.1], &opts)
                .unwrap();
        assert!(est.atoms.is_empty());
        for p in est.density.iter().filter(|p| p.x.abs() <= 3.0) {
            let rel = (p.value - rho(p.x)).abs() / rho(p.x);
            assert!(rel < 0.02, "x = {}: {} vs {}", p.x, p.value, rho(p.x));
        }
    }

    #[test]
    fn leaking_window_rejected() {
        let m = realize_herglotz(&BorelMeasureModel::atoms_only(&[(2.0, 1.0)]).unwrap()).unwrap();
        let r = stieltjes_invert(&m, Window::new(-2.0, 2.0).unwrap(), &EPS);
        assert!(matches!(r, Err(Error::WindowTooSmall { .. })), "{r:?}");
    }

    #[test]
    fn eps_schedule_validation() {
        let m = AnalyticFn::new(FnKind::Herglotz, "-1/z", |z| -1.0 / z);
        let w = Window::new(-1.0, 1.0).unwrap();
        assert!(stieltjes_invert(&m, w, &[1e-3]).is_err());
        assert!(stieltjes_invert(&m, w, &[1e-3, 1e-2]).is_err());
        assert!(stieltjes_invert(&m, w, &[1e-3, 0.0]).is_err());
    }

    #[test]
    fn neville_extrapolation() {
        // exact for quadratics
        let f = |x: f64| 2.0 + 3.0 * x - x * x;
        let xs = [0.4, 0.2, 0.1];
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 2.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn normalization_matches_value_at_i(
            atoms in proptest::collection::btree_map(-50i32..50, 0.01f64..3.0, 1..6)
        ) {
            let atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(l, w)| (l as f64 / 10.0, w)).collect();
            let mu = BorelMeasureModel::atoms_only(&atoms).unwrap();
            let m = realize_herglotz(&mu).unwrap();
            let at_i = m.eval(HalfPlanePoint::i()).unwrap();
            let n = mu.normalization_integral();
            prop_assert!((at_i - Complex64::new(0.0, n)).norm() < 1e-12 * (1.0 + n));
            let tol = 1e-10;
            let defect_small = normalization_defect(&mu) < tol;
            let value_close = (at_i - Complex64::i()).norm() < 10.0 * tol;
            if defect_small { prop_assert!(value_close); }
            if !value_close { prop_assert!(!defect_small); }
        }

        #[test]
        fn herglotz_positive_and_cayley_contractive(
            atoms in proptest::collection::btree_map(-50i32..50, 0.01f64..3.0, 1..6)
        ) {
            let atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(l, w)| (l as f64 / 10.0, w)).collect();
            let m = realize_herglotz(&BorelMeasureModel::atoms_only(&atoms).unwrap()).unwrap();
            let s = livsic_from_weyl(&m);
            let grid = EvaluationGrid::default_probe();
            for &z in grid.points() {
                prop_assert!(m.eval(z).unwrap().im > 0.0);
                prop_assert!(s.eval(z).unwrap().norm() < 1.0);
            }
        }
    }
}
