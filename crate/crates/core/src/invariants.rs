//! Invariant suites for every module, run by `livsic verify-all`.
//!
//! Each check reports the worst deviation it saw and the tolerance it was
//! held to; boolean checks report `0` or `1` against a tolerance of `0`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::coupling::{
    add_weyl, couple_livsic, couple_livsic_raw, coupling_angles, multiply_characteristic,
    verify_class_properties, TaggedCharacteristic,
};
use crate::error::Result;
use crate::extension::{
    characteristic_from_livsic, class_c_check, extract_kappa, reference_change_livsic,
    reference_change_weyl, ClassVerdict, ReferenceRotation, VonNeumannParameter,
};
use crate::function::{
    sup_deviation, AnalyticFn, EvaluationGrid, FnKind, HalfPlanePoint, ToleranceConfig,
};
use crate::measure::{
    livsic_from_weyl, normalization_defect, realize_herglotz, stieltjes_invert, BorelMeasureModel,
    Window,
};
use crate::model::{
    model_closed_forms, model_livsic_quadrature, DeficiencyElement, DeficiencyKind,
};
use crate::moebius::{make_map, MapKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Default)]
struct Suite {
    module: &'static str,
    results: Vec<CheckResult>,
}

impl Suite {
    fn new(module: &'static str) -> Self {
        Self {
            module,
            results: Vec::new(),
        }
    }

    fn within(&mut self, name: impl Into<String>, worst: f64, tolerance: f64) {
        self.results.push(CheckResult {
            module: self.module,
            name: name.into(),
            worst,
            tolerance,
            pass: worst <= tolerance,
        });
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool) {
        self.within(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }
}

/// The normalized measures `δ₀`, `δ₁ + δ₋₁` and `2δ₁`.
pub fn normalized_measures() -> Vec<(&'static str, BorelMeasureModel)> {
    vec![
        (
            "delta_0",
            BorelMeasureModel::atoms_only(&[(0.0, 1.0)]).expect("valid"),
        ),
        (
            "delta_1+delta_-1",
            BorelMeasureModel::atoms_only(&[(1.0, 1.0), (-1.0, 1.0)]).expect("valid"),
        ),
        (
            "2 delta_1",
            BorelMeasureModel::atoms_only(&[(1.0, 2.0)]).expect("valid"),
        ),
    ]
}

/// Sample functions of every kind for the class-property checks: the two
/// normalized Herglotz models, `e^{iz}`, `e^{2iz}`, `-s` for the model of
/// length 1 tagged as characteristic, and the model `s` for lengths 1 and 2.
pub fn bundled_corpus() -> Result<Vec<AnalyticFn>> {
    let mut corpus = Vec::new();
    for (_, mu) in normalized_measures().iter().take(2) {
        corpus.push(realize_herglotz(mu)?);
    }
    corpus.push(model_closed_forms(1.0)?.big_s);
    corpus.push(model_closed_forms(2.0)?.big_s);
    let s1 = model_closed_forms(1.0)?.s;
    corpus.push(
        s1.scaled(Complex64::new(-1.0, 0.0), FnKind::Characteristic)
            .with_label("-s, length 1"),
    );
    corpus.push(s1);
    corpus.push(model_closed_forms(2.0)?.s);
    Ok(corpus)
}

fn max_over_grid(grid: &EvaluationGrid, f: impl Fn(HalfPlanePoint) -> Result<f64>) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for &z in grid.points() {
        worst = worst.max(f(z)?);
    }
    Ok(worst)
}

pub fn function_core(cfg: &ToleranceConfig, grid: &EvaluationGrid) -> Result<Vec<CheckResult>> {
    let mut s = Suite::new("function-core");
    let fs = [
        model_closed_forms(1.0)?.s,
        model_closed_forms(2.0)?.big_s,
        AnalyticFn::new(FnKind::Generic, "z^2", |z| z * z),
    ];
    let mut self_dev = 0.0f64;
    let mut asym = 0.0f64;
    let mut triangle = f64::NEG_INFINITY;
    for f in &fs {
        self_dev = self_dev.max(sup_deviation(f, f, grid)?);
        for g in &fs {
            asym = asym.max((sup_deviation(f, g, grid)? - sup_deviation(g, f, grid)?).abs());
            for h in &fs {
                let excess = sup_deviation(f, h, grid)?
                    - sup_deviation(f, g, grid)?
                    - sup_deviation(g, h, grid)?;
                triangle = triangle.max(excess);
            }
        }
    }
    s.within("sup_deviation(f, f) = 0", self_dev, 0.0);
    s.within("sup_deviation symmetric", asym, 0.0);
    s.within(
        "sup_deviation triangle inequality",
        triangle.max(0.0),
        1e-12,
    );

    let angles = coupling_angles(0.5, 0.25)?;
    let livsic = [
        model_closed_forms(0.5)?.s,
        couple_livsic(
            &model_closed_forms(1.0)?.s,
            &model_closed_forms(2.0)?.s,
            &angles,
        ),
        livsic_from_weyl(&realize_herglotz(&normalized_measures()[1].1)?),
    ];
    let mut worst = f64::NEG_INFINITY;
    for f in &livsic {
        worst = worst.max(f.kind_violation(grid)?);
    }
    s.within(
        "Livsic constructors stay in the closed disk",
        worst.max(0.0),
        cfg.identity_tol,
    );
    Ok(s.results)
}

pub fn moebius(grid: &EvaluationGrid) -> Result<Vec<CheckResult>> {
    let mut s = Suite::new("moebius");
    let k = make_map(MapKind::Cayley)?;
    let kinv = make_map(MapKind::InverseCayley)?;
    let into_disk = max_over_grid(grid, |z| Ok(k.apply(z.to_complex())?.norm()))?;
    s.holds(
        "Cayley maps the upper half-plane into the disk",
        into_disk < 1.0,
    );
    let round = max_over_grid(grid, |z| {
        let z = z.to_complex();
        Ok((kinv.apply(k.apply(z)?)? - z).norm())
    })?;
    s.within("Cayley round trip", round, 1e-12);

    let mut inv = 0.0f64;
    for kr in [0.0, 0.3, 0.7, 0.99] {
        for kt in [0.0, 1.0, 2.5, 4.0] {
            let t = make_map(MapKind::DiskAuto(VonNeumannParameter::new(
                Complex64::from_polar(kr, kt),
            )?))?;
            for wr in [0.0, 0.5, 0.99] {
                for wt in [0.0, 0.7, 3.0, 5.5] {
                    let w = Complex64::from_polar(wr, wt);
                    inv = inv.max((t.apply(t.apply(w)?)? - w).norm());
                }
            }
        }
    }
    s.within("disk automorphism is an involution", inv, 1e-12);

    let mut fix = 0.0f64;
    let mut min_im = f64::INFINITY;
    for j in 0..16 {
        let r = make_map(MapKind::HalfPlaneRotation(PI * j as f64 / 16.0))?;
        fix = fix.max((r.apply(Complex64::i())? - Complex64::i()).norm());
        for &z in grid.points() {
            if let Ok(w) = r.apply(z.to_complex()) {
                min_im = min_im.min(w.im);
            }
        }
    }
    s.within("half-plane rotation fixes i", fix, 1e-15);
    s.holds(
        "half-plane rotation preserves the upper half-plane",
        min_im > 0.0,
    );
    Ok(s.results)
}

pub fn herglotz_measure(cfg: &ToleranceConfig, grid: &EvaluationGrid) -> Result<Vec<CheckResult>> {
    let mut s = Suite::new("herglotz-measure");
    let eps = [1e-2, 1e-3, 1e-4];
    for (name, mu) in normalized_measures() {
        let m = realize_herglotz(&mu)?;
        let (lo, hi) = mu
            .atoms()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
                (lo.min(a.location), hi.max(a.location))
            });
        let est = stieltjes_invert(&m, Window::new(lo - 1.0, hi + 1.0)?, &eps)?;
        let mut worst = if est.atoms.len() == mu.atoms().len() {
            0.0f64
        } else {
            f64::INFINITY
        };
        for a in mu.atoms() {
            let hit = est
                .atoms
                .iter()
                .find(|e| (e.location - a.location).abs() <= est.scan_spacing);
            worst =
                worst.max(hit.map_or(f64::INFINITY, |e| (e.weight - a.weight).abs() / a.weight));
        }
        s.within(
            format!("inversion round trip {name}"),
            worst,
            cfg.inversion_rel_tol,
        );

        let defect = normalization_defect(&mu);
        let at_i = (m.eval(HalfPlanePoint::i())? - Complex64::i()).norm();
        s.holds(
            format!("normalization defect <=> M(i) = i for {name}"),
            (defect < cfg.identity_tol) == (at_i < 10.0 * cfg.identity_tol),
        );
        let min_im = max_over_grid(grid, |z| Ok(-m.eval(z)?.im))?;
        s.holds(format!("Im M > 0 for {name}"), min_im < 0.0);
        let sup = max_over_grid(grid, |z| Ok(livsic_from_weyl(&m).eval(z)?.norm()))?;
        s.holds(format!("|K(M)| < 1 for {name}"), sup < 1.0);
    }
    let unnormalized = BorelMeasureModel::atoms_only(&[(1.0, 1.0)])?;
    let m = realize_herglotz(&unnormalized)?;
    let at_i = (m.eval(HalfPlanePoint::i())? - Complex64::i()).norm();
    s.holds(
        "normalization defect <=> M(i) = i for delta_1",
        (normalization_defect(&unnormalized) < cfg.identity_tol)
            == (at_i < 10.0 * cfg.identity_tol),
    );
    Ok(s.results)
}

pub fn extension_calc(cfg: &ToleranceConfig, grid: &EvaluationGrid) -> Result<Vec<CheckResult>> {
    let mut s = Suite::new("extension-calc");
    let livsic = [
        model_closed_forms(0.5)?.s,
        model_closed_forms(1.0)?.s,
        model_closed_forms(2.0)?.s,
    ];
    let kappas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::from_polar(0.9, 1.0),
        Complex64::from_polar(0.3, -2.0),
    ];
    let (mut inv, mut recovered, mut closure) = (0.0f64, 0.0f64, 0.0f64);
    for f in &livsic {
        for &k in &kappas {
            let kappa = VonNeumannParameter::new(k)?;
            let big_s = characteristic_from_livsic(f, kappa);
            inv = inv.max(sup_deviation(
                &characteristic_from_livsic(&big_s, kappa),
                f,
                grid,
            )?);
            recovered = recovered.max((extract_kappa(&big_s)?.value() - k).norm());
            for theta in [0.5, 2.0, 4.0] {
                let u = Complex64::from_polar(1.0, theta);
                let rotated = extract_kappa(&big_s.scaled(u, FnKind::Characteristic))?;
                closure = closure.max((rotated.value() - u * k).norm());
                closure = closure.max((rotated.modulus() - k.norm()).abs());
            }
        }
    }
    s.within("characteristic map is an involution", inv, 1e-12);
    s.within(
        "extract_kappa recovers kappa when s(i) = 0",
        recovered,
        1e-12,
    );
    s.within(
        "unimodular closure of the characteristic class",
        closure,
        1e-12,
    );

    let (mut modulus, mut weyl) = (0.0f64, 0.0f64);
    let weyl_inputs: Vec<AnalyticFn> = normalized_measures()
        .iter()
        .map(|(_, mu)| realize_herglotz(mu))
        .collect::<Result<_>>()?;
    for j in 0..8 {
        let rot = ReferenceRotation::new(PI * j as f64 / 8.0)?;
        for f in &livsic {
            let r = reference_change_livsic(f, rot);
            modulus = modulus.max(max_over_grid(grid, |z| {
                Ok((r.eval(z)?.norm() - f.eval(z)?.norm()).abs())
            })?);
        }
        for m in &weyl_inputs {
            let v = reference_change_weyl(m, rot).eval(HalfPlanePoint::i())?;
            weyl = weyl.max((v - Complex64::i()).norm());
        }
    }
    s.within("reference change preserves |s|", modulus, 1e-12);
    s.within("reference change preserves M(i) = i", weyl, 1e-12);

    let cayley = AnalyticFn::new(FnKind::Livsic, "(z-i)/(z+i)", |z| {
        (z - Complex64::i()) / (z + Complex64::i())
    });
    s.holds(
        "class check rejects the Cayley probe",
        class_c_check(&cayley, cfg)?.verdict == ClassVerdict::FailsGrowth,
    );
    Ok(s.results)
}

pub fn coupling_engine(cfg: &ToleranceConfig, grid: &EvaluationGrid) -> Result<Vec<CheckResult>> {
    let mut s = Suite::new("coupling-engine");
    let mut angle = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let (k1, k2) = (i as f64 / 10.0, j as f64 / 10.0);
            let a = coupling_angles(k1, k2)?;
            let (sa, ca) = a.alpha().sin_cos();
            let (sb, cb) = a.beta().sin_cos();
            angle = angle.max((sb - if k2 > 0.0 { k1 * sa } else { k1 }).abs());
            if k2 > 0.0 {
                angle = angle.max((cb - ca / k2).abs());
            }
            angle = angle.max((sb * sb + cb * cb - 1.0).abs());
        }
    }
    s.within("coupling angle relations", angle, 1e-14);

    let models = [model_closed_forms(0.5)?, model_closed_forms(1.0)?];
    let sweep = [0.0, 0.25, 0.5, 0.75];
    let (mut chain, mut kappa_mult, mut vanish) = (0.0f64, 0.0f64, 0.0f64);
    for &k1 in &sweep {
        for &k2 in &sweep {
            let angles = coupling_angles(k1, k2)?;
            let (s1, s2) = (&models[0].s, &models[1].s);
            let coupled = couple_livsic(s1, s2, &angles);
            vanish = vanish.max(coupled.eval(HalfPlanePoint::i())?.norm());
            let (q1, q2) = (
                VonNeumannParameter::real(k1)?,
                VonNeumannParameter::real(k2)?,
            );
            let t1 = TaggedCharacteristic::new(
                characteristic_from_livsic(s1, q1),
                q1,
                cfg.identity_tol,
            )?;
            let t2 = TaggedCharacteristic::new(
                characteristic_from_livsic(s2, q2),
                q2,
                cfg.identity_tol,
            )?;
            let prod = multiply_characteristic(&t1, &t2);
            let lhs = characteristic_from_livsic(&coupled, VonNeumannParameter::real(k1 * k2)?);
            chain = chain.max(sup_deviation(&lhs, prod.function(), grid)?);
            kappa_mult =
                kappa_mult.max((extract_kappa(prod.function())?.modulus() - k1 * k2).abs());
        }
    }
    s.within("multiplication chain", chain, 1e-10);
    s.within("kappa modulus is multiplicative", kappa_mult, 1e-12);
    s.within("coupling preserves s(i) = 0", vanish, 1e-14);

    let weyl: Vec<AnalyticFn> = normalized_measures()
        .iter()
        .map(|(_, mu)| realize_herglotz(mu))
        .collect::<Result<_>>()?;
    let mut add = 0.0f64;
    for m1 in &weyl {
        for m2 in &weyl {
            for alpha in [0.0, 0.3, 0.9, 1.4, FRAC_PI_2] {
                add = add.max(
                    (add_weyl(m1, m2, alpha).eval(HalfPlanePoint::i())? - Complex64::i()).norm(),
                );
            }
        }
    }
    s.within("addition preserves M(i) = i", add, 1e-14);

    let (s1, s2) = (&models[0].s, &models[1].s);
    let c0 = sup_deviation(&couple_livsic_raw(s1, s2, 0.0, 0.0), s1, grid)?;
    let c1 = sup_deviation(&couple_livsic_raw(s1, s2, FRAC_PI_2, FRAC_PI_2), s2, grid)?;
    s.within(
        "degenerate angles collapse to the factors",
        c0.max(c1),
        1e-14,
    );

    let report = verify_class_properties(&bundled_corpus()?, cfg, grid)?;
    for p in &report.properties {
        s.holds(
            format!("class property {}: {}", p.property, p.description),
            p.pass && p.pairs_checked > 0,
        );
    }
    Ok(s.results)
}

pub fn model_differentiation(
    cfg: &ToleranceConfig,
    grid: &EvaluationGrid,
) -> Result<Vec<CheckResult>> {
    let mut s = Suite::new("model-differentiation");
    let (mut norms, mut anti, mut diss) = (0.0f64, 0.0f64, 0.0f64);
    for ell in [0.5, 1.0, 2.0, 5.0] {
        let gp = DeficiencyElement::new(DeficiencyKind::GPlus, ell)?;
        let gm = DeficiencyElement::new(DeficiencyKind::GMinus, ell)?;
        norms = norms
            .max((gp.norm(1e-13)? - 1.0).abs())
            .max((gm.norm(1e-13)? - 1.0).abs());
        anti = anti.max(((gp.eval(0.0) - gm.eval(0.0)) + (gp.eval(ell) - gm.eval(ell))).norm());
        diss = diss.max((gp.eval(0.0) - (-ell).exp() * gm.eval(0.0)).norm());
    }
    s.within("deficiency elements have unit norm", norms, 1e-10);
    s.within("g+ - g- satisfies the antiperiodic condition", anti, 1e-12);
    s.within("g+(0) = exp(-l) g-(0)", diss, 1e-12);

    for ell in [0.5, 1.0, 2.0] {
        let closed = model_closed_forms(ell)?;
        let dev = max_over_grid(grid, |z| {
            Ok((model_livsic_quadrature(ell, z, cfg.quadrature_tol)? - closed.s.eval(z)?).norm())
        })?;
        s.within(
            format!("quadrature oracle matches closed form, length {ell}"),
            dev,
            cfg.quadrature_tol,
        );
        s.holds(
            format!("model s is consistent with the Livsic class, length {ell}"),
            class_c_check(&closed.s, cfg)?.verdict == ClassVerdict::ConsistentWithC,
        );
    }
    Ok(s.results)
}

/// Every suite on the given grid.
pub fn run_all(cfg: &ToleranceConfig, grid: &EvaluationGrid) -> Result<Vec<CheckResult>> {
    let mut all = function_core(cfg, grid)?;
    all.extend(moebius(grid)?);
    all.extend(herglotz_measure(cfg, grid)?);
    all.extend(extension_calc(cfg, grid)?);
    all.extend(coupling_engine(cfg, grid)?);
    all.extend(model_differentiation(cfg, grid)?);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        let cfg = ToleranceConfig::default();
        let grid = EvaluationGrid::default_probe();
        let mut results = function_core(&cfg, &grid).unwrap();
        results.extend(moebius(&grid).unwrap());
        results.extend(extension_calc(&cfg, &grid).unwrap());
        results.extend(coupling_engine(&cfg, &grid).unwrap());
        for r in &results {
            assert!(r.pass, "{r:?}");
        }
    }
}
