//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a requested verification exceeded its
//! tolerance (or the computation failed), `2` usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::coupling::{
    add_weyl, couple_livsic, coupling_angles_with_threshold, general_k_identity_defect,
    multiply_characteristic, TaggedCharacteristic,
};
use crate::error::{Error, Result};
use crate::extension::{
    characteristic_from_livsic, class_c_check, ClassVerdict, VonNeumannParameter,
};
use crate::function::{sup_deviation, AnalyticFn, EvaluationGrid, HalfPlanePoint, ToleranceConfig};
use crate::invariants;
use crate::json::{to_fixed_string, ComplexValue};
use crate::measure::{
    livsic_from_weyl, normalization_defect, realize_herglotz, stieltjes_invert, Atom,
    BorelMeasureModel, Window,
};
use crate::model::{model_closed_forms, model_livsic_quadrature};

/// Parses `a+bi` / `a-bi`; the real part is mandatory.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let t = text.trim();
    let body = t
        .strip_suffix('i')
        .ok_or_else(|| format!("`{t}`: expected the form a+bi or a-bi"))?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, ch)| {
            (ch == '+' || ch == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E')
        })
        .map(|(k, _)| k)
        .last()
        .ok_or_else(|| format!("`{t}`: missing real part or sign of the imaginary part"))?;
    let (re, im) = body.split_at(split);
    let re: f64 = re
        .parse()
        .map_err(|_| format!("`{t}`: bad real part `{re}`"))?;
    let im: f64 = match im {
        "+" => 1.0,
        "-" => -1.0,
        _ => im
            .parse()
            .map_err(|_| format!("`{t}`: bad imaginary part `{im}`"))?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_point(text: &str) -> std::result::Result<HalfPlanePoint, String> {
    let z = parse_complex(text)?;
    HalfPlanePoint::from_complex(z).map_err(|e| e.to_string())
}

fn parse_unit(text: &str) -> std::result::Result<f64, String> {
    let v: f64 = text
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    if (0.0..1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1)"))
    }
}

fn parse_length(text: &str) -> std::result::Result<f64, String> {
    let v: f64 = text
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("length must be positive, got {v}"))
    }
}

fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let v: f64 = text
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} is not finite"))
    }
}

/// `loc:weight,loc:weight,...`
pub fn parse_atoms(text: &str) -> std::result::Result<BorelMeasureModel, String> {
    let mut atoms = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (loc, w) = item
            .split_once(':')
            .ok_or_else(|| format!("`{item}`: expected location:weight"))?;
        let location = parse_real(loc.trim())?;
        let weight = parse_real(w.trim())?;
        atoms.push(Atom { location, weight });
    }
    if atoms.is_empty() {
        return Err("no atoms given".into());
    }
    BorelMeasureModel::new(atoms, None).map_err(|e| e.to_string())
}

fn parse_grid(text: &str) -> std::result::Result<EvaluationGrid, String> {
    if text == "default" {
        Ok(EvaluationGrid::default_probe())
    } else if let Some(path) = text.strip_prefix("file:") {
        EvaluationGrid::load(path).map_err(|e| e.to_string())
    } else {
        Err(format!("`{text}`: expected `default` or `file:<path>`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "livsic",
    version,
    about = "Livsic, Weyl-Titchmarsh and characteristic function calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Point of the upper half-plane, `a+bi`
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    eval: Option<HalfPlanePoint>,
    /// `default` or `file:<path>` (JSON grid)
    #[arg(long, value_parser = parse_grid)]
    grid: Option<EvaluationGrid>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelCheck {
    /// quadrature oracle against the closed form
    Oracle,
    /// S(i) = exp(-length)
    Kappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoupleCheck {
    /// characteristic function of the coupling equals the product of the factors
    Nunu,
    /// the general-k identity with k = kappa1*kappa2
    Formula1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MultiplyCheck {
    /// product evaluated at i equals kappa1*kappa2
    Kappa,
    Nunu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AddCheck {
    /// M(i) = i
    Normalization,
    /// Im M > 0 on the grid
    Herglotz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureCheck {
    Normalization,
    /// Stieltjes inversion recovers the atoms
    Inversion,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Differentiation operator on [0, length]
    Model {
        #[arg(long, value_parser = parse_length)]
        length: f64,
        #[arg(long, value_enum)]
        check: Option<ModelCheck>,
        #[command(flatten)]
        common: Common,
    },
    /// Couple two model operators (lengths given once or twice)
    Couple {
        #[arg(long, value_parser = parse_unit)]
        kappa1: f64,
        #[arg(long, value_parser = parse_unit)]
        kappa2: f64,
        #[arg(long, value_parser = parse_length, num_args = 1, action = clap::ArgAction::Append)]
        length: Vec<f64>,
        #[arg(long, value_enum)]
        check: Option<CoupleCheck>,
        #[command(flatten)]
        common: Common,
    },
    /// Multiply two characteristic functions of model operators
    Multiply {
        #[arg(long, value_parser = parse_unit)]
        kappa1: Option<f64>,
        #[arg(long, value_parser = parse_unit)]
        kappa2: Option<f64>,
        #[arg(long, value_parser = parse_length, action = clap::ArgAction::Append)]
        length: Vec<f64>,
        #[arg(long, value_enum)]
        check: Option<MultiplyCheck>,
        #[command(flatten)]
        common: Common,
    },
    /// cos^2(alpha) M1 + sin^2(alpha) M2 for two atomic measures
    Add {
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_parser = parse_atoms, action = clap::ArgAction::Append, allow_hyphen_values = true)]
        atoms: Vec<BorelMeasureModel>,
        #[arg(long, value_enum)]
        check: Option<AddCheck>,
        #[command(flatten)]
        common: Common,
    },
    /// Herglotz function of an atomic measure
    Measure {
        #[arg(long, value_parser = parse_atoms, allow_hyphen_values = true)]
        atoms: BorelMeasureModel,
        #[arg(long, value_enum)]
        check: Option<MeasureCheck>,
        /// Same as `--check normalization`
        #[arg(long, conflicts_with = "check")]
        check_normalization: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Probe membership in the Livsic class
    CheckClass {
        /// Model function of the given length
        #[arg(long, value_parser = parse_length, conflicts_with = "atoms", required_unless_present = "atoms")]
        length: Option<f64>,
        /// Cayley transform of the Herglotz function of these atoms
        #[arg(long, value_parser = parse_atoms, allow_hyphen_values = true)]
        atoms: Option<BorelMeasureModel>,
    },
    /// Run every invariant suite
    VerifyAll {
        #[arg(long, value_parser = parse_grid)]
        grid: Option<EvaluationGrid>,
    },
}

struct Outcome {
    report: Value,
    sweep: Option<(EvaluationGrid, AnalyticFn)>,
    pass: bool,
}

impl Outcome {
    fn new(report: Value) -> Self {
        Self {
            report,
            sweep: None,
            pass: true,
        }
    }

    fn check(&mut self, name: &str, deviation: f64, tolerance: f64) {
        let pass = deviation <= tolerance;
        self.pass &= pass;
        let obj = self.report.as_object_mut().expect("reports are objects");
        obj.insert("check".into(), json!(name));
        obj.insert("max_deviation".into(), json!(deviation));
        obj.insert("tolerance".into(), json!(tolerance));
        obj.insert("pass".into(), json!(pass));
    }

    fn insert(&mut self, key: &str, v: Value) {
        self.report
            .as_object_mut()
            .expect("reports are objects")
            .insert(key.into(), v);
    }
}

fn cx(z: Complex64) -> Value {
    serde_json::to_value(ComplexValue::from(z)).expect("plain struct")
}

fn grid_or_default(g: &Option<EvaluationGrid>) -> EvaluationGrid {
    g.clone().unwrap_or_else(EvaluationGrid::default_probe)
}

fn sweep_json(grid: &EvaluationGrid, f: &AnalyticFn) -> Value {
    let rows: Vec<Value> = grid
        .points()
        .iter()
        .map(|&z| match f.eval(z) {
            Ok(v) => json!({ "z": cx(z.to_complex()), "value": cx(v) }),
            Err(e) => json!({ "z": cx(z.to_complex()), "error": e.to_string() }),
        })
        .collect();
    json!({ "grid": grid.description(), "points": rows })
}

fn lengths(given: &[f64]) -> std::result::Result<(f64, f64), String> {
    match given {
        [] => Ok((1.0, 1.0)),
        [l] => Ok((*l, *l)),
        [l1, l2] => Ok((*l1, *l2)),
        _ => Err("--length may be given at most twice".into()),
    }
}

fn run_model(
    length: f64,
    check: Option<ModelCheck>,
    common: &Common,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let m = model_closed_forms(length)?;
    let mut out = Outcome::new(json!({ "length": length, "kappa": cx(m.kappa.value()) }));
    if let Some(z) = common.eval {
        out.insert("z", cx(z.to_complex()));
        out.insert("s", cx(m.s.eval(z)?));
        out.insert("S", cx(m.big_s.eval(z)?));
    }
    match check {
        Some(ModelCheck::Oracle) => {
            let grid = grid_or_default(&common.grid);
            let mut worst = 0.0f64;
            for &z in grid.points() {
                let d =
                    (model_livsic_quadrature(length, z, cfg.quadrature_tol)? - m.s.eval(z)?).norm();
                worst = worst.max(d);
            }
            out.check("oracle", worst, cfg.quadrature_tol);
        }
        Some(ModelCheck::Kappa) => {
            let at_i = m.big_s.eval(HalfPlanePoint::i())?;
            out.check("kappa", (at_i - m.kappa.value()).norm(), 1e-12);
        }
        None => {}
    }
    if let Some(grid) = &common.grid {
        out.sweep = Some((grid.clone(), m.s));
    }
    Ok(out)
}

fn tagged(s: &AnalyticFn, kappa: f64, tol: f64) -> Result<TaggedCharacteristic> {
    let k = VonNeumannParameter::real(kappa)?;
    TaggedCharacteristic::new(characteristic_from_livsic(s, k), k, tol)
}

fn nunu_deviation(
    s1: &AnalyticFn,
    s2: &AnalyticFn,
    k1: f64,
    k2: f64,
    cfg: &ToleranceConfig,
    grid: &EvaluationGrid,
) -> Result<f64> {
    let angles = coupling_angles_with_threshold(k1, k2, cfg.kappa2_zero_threshold)?;
    let coupled = couple_livsic(s1, s2, &angles);
    let lhs = characteristic_from_livsic(&coupled, VonNeumannParameter::real(k1 * k2)?);
    let prod = multiply_characteristic(
        &tagged(s1, k1, cfg.identity_tol)?,
        &tagged(s2, k2, cfg.identity_tol)?,
    );
    sup_deviation(&lhs, prod.function(), grid)
}

fn run_couple(
    k1: f64,
    k2: f64,
    ls: (f64, f64),
    check: Option<CoupleCheck>,
    common: &Common,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let (s1, s2) = (model_closed_forms(ls.0)?.s, model_closed_forms(ls.1)?.s);
    let angles = coupling_angles_with_threshold(k1, k2, cfg.kappa2_zero_threshold)?;
    let coupled = couple_livsic(&s1, &s2, &angles);
    let big_s = characteristic_from_livsic(&coupled, VonNeumannParameter::real(k1 * k2)?);
    let mut out = Outcome::new(json!({
        "kappa1": k1,
        "kappa2": k2,
        "lengths": [ls.0, ls.1],
        "angles": serde_json::to_value(angles).expect("plain struct"),
        "s_at_i": cx(coupled.eval(HalfPlanePoint::i())?),
    }));
    if let Some(z) = common.eval {
        out.insert("z", cx(z.to_complex()));
        out.insert("s", cx(coupled.eval(z)?));
        out.insert("S", cx(big_s.eval(z)?));
    }
    let grid = grid_or_default(&common.grid);
    match check {
        Some(CoupleCheck::Nunu) => {
            out.check(
                "nunu",
                nunu_deviation(&s1, &s2, k1, k2, cfg, &grid)?,
                cfg.identity_tol,
            );
        }
        Some(CoupleCheck::Formula1) => {
            let d = general_k_identity_defect(k1 * k2, &s1, &s2, &angles, &grid)?;
            out.check("formula1", d, cfg.identity_tol);
        }
        None => {}
    }
    if let Some(grid) = &common.grid {
        out.sweep = Some((grid.clone(), coupled));
    }
    Ok(out)
}

fn run_multiply(
    k1: Option<f64>,
    k2: Option<f64>,
    ls: (f64, f64),
    check: Option<MultiplyCheck>,
    common: &Common,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let (m1, m2) = (model_closed_forms(ls.0)?, model_closed_forms(ls.1)?);
    let k1 = k1.unwrap_or(m1.kappa.value().re);
    let k2 = k2.unwrap_or(m2.kappa.value().re);
    let prod = multiply_characteristic(
        &tagged(&m1.s, k1, cfg.identity_tol)?,
        &tagged(&m2.s, k2, cfg.identity_tol)?,
    );
    let at_i = prod.function().eval(HalfPlanePoint::i())?;
    let mut out = Outcome::new(json!({
        "kappa1": k1,
        "kappa2": k2,
        "lengths": [ls.0, ls.1],
        "kappa": cx(prod.kappa().value()),
        "kappa_modulus": prod.kappa().modulus(),
        "S_at_i": cx(at_i),
    }));
    if let Some(z) = common.eval {
        out.insert("z", cx(z.to_complex()));
        out.insert("S", cx(prod.function().eval(z)?));
    }
    match check {
        Some(MultiplyCheck::Kappa) => {
            out.check("kappa", (at_i - prod.kappa().value()).norm(), 1e-12)
        }
        Some(MultiplyCheck::Nunu) => {
            let grid = grid_or_default(&common.grid);
            out.check(
                "nunu",
                nunu_deviation(&m1.s, &m2.s, k1, k2, cfg, &grid)?,
                cfg.identity_tol,
            );
        }
        None => {}
    }
    if let Some(grid) = &common.grid {
        out.sweep = Some((grid.clone(), prod.function().clone()));
    }
    Ok(out)
}

fn run_add(
    alpha: f64,
    atoms: &[BorelMeasureModel],
    check: Option<AddCheck>,
    common: &Common,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let defaults = invariants::normalized_measures();
    let mu1 = atoms
        .first()
        .cloned()
        .unwrap_or_else(|| defaults[0].1.clone());
    let mu2 = atoms
        .get(1)
        .cloned()
        .unwrap_or_else(|| defaults[1].1.clone());
    let m = add_weyl(&realize_herglotz(&mu1)?, &realize_herglotz(&mu2)?, alpha);
    let mut out = Outcome::new(json!({
        "alpha": alpha,
        "M_at_i": cx(m.eval(HalfPlanePoint::i())?),
    }));
    if let Some(z) = common.eval {
        out.insert("z", cx(z.to_complex()));
        out.insert("M", cx(m.eval(z)?));
    }
    match check {
        Some(AddCheck::Normalization) => {
            let d = (m.eval(HalfPlanePoint::i())? - Complex64::i()).norm();
            out.check("normalization", d, cfg.identity_tol);
        }
        Some(AddCheck::Herglotz) => {
            let grid = grid_or_default(&common.grid);
            let mut min_im = f64::INFINITY;
            for &z in grid.points() {
                min_im = min_im.min(m.eval(z)?.im);
            }
            out.insert("min_im", json!(min_im));
            out.check("herglotz", (-min_im).max(0.0), 0.0);
        }
        None => {}
    }
    if let Some(grid) = &common.grid {
        out.sweep = Some((grid.clone(), m));
    }
    Ok(out)
}

fn run_measure(
    mu: &BorelMeasureModel,
    check: Option<MeasureCheck>,
    common: &Common,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let m = realize_herglotz(mu)?;
    let mut out = Outcome::new(json!({
        "atoms": serde_json::to_value(mu.atoms()).expect("plain struct"),
        "M_at_i": cx(m.eval(HalfPlanePoint::i())?),
    }));
    if let Some(z) = common.eval {
        out.insert("z", cx(z.to_complex()));
        out.insert("M", cx(m.eval(z)?));
        out.insert("s", cx(livsic_from_weyl(&m).eval(z)?));
    }
    match check {
        Some(MeasureCheck::Normalization) => {
            let defect = normalization_defect(mu);
            out.insert("defect", json!(defect));
            out.check("normalization", defect, cfg.identity_tol);
        }
        Some(MeasureCheck::Inversion) => {
            let (lo, hi) = mu
                .atoms()
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
                    (lo.min(a.location), hi.max(a.location))
                });
            let est = stieltjes_invert(&m, Window::new(lo - 1.0, hi + 1.0)?, &[1e-2, 1e-3, 1e-4])?;
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
                worst = worst
                    .max(hit.map_or(f64::INFINITY, |e| (e.weight - a.weight).abs() / a.weight));
            }
            out.insert(
                "estimate",
                serde_json::to_value(&est.atoms).expect("plain struct"),
            );
            out.insert("scan_spacing", json!(est.scan_spacing));
            out.check("inversion", worst, cfg.inversion_rel_tol);
        }
        None => {}
    }
    if let Some(grid) = &common.grid {
        out.sweep = Some((grid.clone(), m));
    }
    Ok(out)
}

fn run_check_class(
    length: Option<f64>,
    atoms: Option<&BorelMeasureModel>,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let s = match (length, atoms) {
        (Some(l), _) => model_closed_forms(l)?.s,
        (None, Some(mu)) => livsic_from_weyl(&realize_herglotz(mu)?),
        (None, None) => return Err(Error::InvalidParameter("need --length or --atoms".into())),
    };
    let report = class_c_check(&s, cfg)?;
    let mut out = Outcome::new(serde_json::to_value(&report).expect("plain struct"));
    out.pass = report.verdict == ClassVerdict::ConsistentWithC;
    Ok(out)
}

fn run_verify_all(grid: &Option<EvaluationGrid>, cfg: &ToleranceConfig) -> Result<Outcome> {
    let grid = grid_or_default(grid);
    let checks = invariants::run_all(cfg, &grid)?;
    let all_pass = checks.iter().all(|c| c.pass);
    let mut out = Outcome::new(json!({
        "grid": grid.description(),
        "checks": serde_json::to_value(&checks).expect("plain struct"),
        "all_pass": all_pass,
    }));
    out.pass = all_pass;
    Ok(out)
}

fn write_csv<W: Write>(out: &mut W, grid: &EvaluationGrid, f: &AnalyticFn) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "f_re", "f_im"])?;
    for &z in grid.points() {
        let v = f.eval(z).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        w.write_record([z.re(), z.im(), v.re, v.im].map(|x| format!("{x:.16e}")))?;
    }
    w.flush()
}

/// Parses `argv` (program name first), runs the command and writes the
/// report. Returns the process exit code.
pub fn run<I, T, W, E>(argv: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let cfg = ToleranceConfig::default();

    let format = match &cli.command {
        Command::Model { common, .. }
        | Command::Couple { common, .. }
        | Command::Multiply { common, .. }
        | Command::Add { common, .. }
        | Command::Measure { common, .. } => {
            if common.format == OutputFormat::Csv && common.grid.is_none() {
                let _ = writeln!(err, "error: --format csv needs a grid sweep (--grid)");
                return 2;
            }
            common.format
        }
        _ => OutputFormat::Json,
    };

    let result = match &cli.command {
        Command::Model {
            length,
            check,
            common,
        } => run_model(*length, *check, common, &cfg),
        Command::Couple {
            kappa1,
            kappa2,
            length,
            check,
            common,
        } => match lengths(length) {
            Ok(ls) => run_couple(*kappa1, *kappa2, ls, *check, common, &cfg),
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                return 2;
            }
        },
        Command::Multiply {
            kappa1,
            kappa2,
            length,
            check,
            common,
        } => match lengths(length) {
            Ok(ls) => run_multiply(*kappa1, *kappa2, ls, *check, common, &cfg),
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                return 2;
            }
        },
        Command::Add {
            alpha,
            atoms,
            check,
            common,
        } => {
            if atoms.len() > 2 {
                let _ = writeln!(err, "error: --atoms may be given at most twice");
                return 2;
            }
            run_add(*alpha, atoms, *check, common, &cfg)
        }
        Command::Measure {
            atoms,
            check,
            check_normalization,
            common,
        } => {
            let check = if *check_normalization {
                Some(MeasureCheck::Normalization)
            } else {
                *check
            };
            run_measure(atoms, check, common, &cfg)
        }
        Command::CheckClass { length, atoms } => run_check_class(*length, atoms.as_ref(), &cfg),
        Command::VerifyAll { grid } => run_verify_all(grid, &cfg),
    };

    let mut outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };

    let written = match (format, outcome.sweep.take()) {
        (OutputFormat::Csv, Some((grid, f))) => write_csv(out, &grid, &f),
        (_, sweep) => {
            if let Some((grid, f)) = sweep {
                outcome.insert("sweep", sweep_json(&grid, &f));
            }
            writeln!(out, "{}", to_fixed_string(&outcome.report))
        }
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    if outcome.pass {
        0
    } else {
        1
    }
}
