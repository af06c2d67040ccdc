//! Composite Gauss–Legendre quadrature for complex-valued integrands on a
//! finite interval, refined by panel halving.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper bound on the number of panels before giving up.
pub const MAX_PANELS: usize = 1 << 16;

const ORDER: usize = 8;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre polynomial.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Change between the last two refinements.
    pub error_estimate: f64,
    pub panels: usize,
}

fn composite<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &[(f64, f64)],
) -> Complex64 {
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut panel = Complex64::new(0.0, 0.0);
        for &(x, w) in rule {
            panel += w * f(mid + 0.5 * h * x);
        }
        total += panel * (0.5 * h);
    }
    total
}

/// Integrates `f` over `[a, b]`, doubling the panel count until two
/// successive estimates differ by less than `rel_tol · |estimate|`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    let rule = gauss_legendre(ORDER);
    let mut panels = 1;
    let mut prev = composite(&f, a, b, panels, &rule);
    let mut change = f64::INFINITY;
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite(&f, a, b, panels, &rule);
        change = (next - prev).norm();
        if !change.is_finite() {
            break;
        }
        if change <= rel_tol * next.norm().max(f64::MIN_POSITIVE) {
            return Ok(QuadratureResult {
                value: next,
                error_estimate: change,
                panels,
            });
        }
        prev = next;
    }
    Err(Error::QuadratureFailed {
        tol: rel_tol,
        panels,
        last_change: change,
    })
}
