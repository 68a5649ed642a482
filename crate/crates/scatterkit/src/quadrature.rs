//! Quadrature primitives: Gauss-Legendre nodes, composite Simpson, and an
//! oscillation-aware adaptive Simpson for complex integrands.

use num_complex::Complex64;

use crate::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to machine
/// precision for n up to a few thousand.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pd(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Legendre P_n(x) and its derivative.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes/weights mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let d = 0.5 * (b + a);
    (x.iter().map(|&t| c * t + d).collect(), w.iter().map(|&t| c * t).collect())
}

/// Composite Simpson on a uniform grid with n panels (n rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Composite Simpson over precomputed uniform samples (len must be odd).
pub fn simpson_samples(values: &[f64], h: f64) -> f64 {
    assert!(values.len() >= 3 && values.len() % 2 == 1);
    let mut acc = values[0] + values[values.len() - 1];
    for (i, v) in values.iter().enumerate().take(values.len() - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Adaptive Simpson for complex integrands.
///
/// `max_freq` bounds the oscillation rate of the integrand; initial panels
/// are capped at a quarter period so the refinement never aliases.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64, max_freq: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if tol < 1e-15 {
        return Err(Error::QuadratureFailure(format!("tolerance {tol} below 1e-15")));
    }
    let quarter_period = if max_freq > 0.0 {
        0.5 * std::f64::consts::PI / max_freq
    } else {
        b - a
    };
    let n_init = (((b - a) / quarter_period).ceil() as usize).max(1);
    let mut total = Complex64::new(0.0, 0.0);
    let budget = &mut 200_000usize;
    let panel_tol = tol / n_init as f64;
    for i in 0..n_init {
        let x0 = a + (b - a) * i as f64 / n_init as f64;
        let x1 = a + (b - a) * (i + 1) as f64 / n_init as f64;
        let fm = f(0.5 * (x0 + x1));
        let whole = simpson_panel(f(x0), fm, f(x1), x1 - x0);
        total += adapt(f, x0, x1, f(x0), fm, f(x1), whole, panel_tol, 40, budget)?;
    }
    Ok(total)
}

fn simpson_panel(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + 4.0 * fm + fb) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: usize,
    budget: &mut usize,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if *budget == 0 {
        return Err(Error::QuadratureFailure("panel budget exhausted".into()));
    }
    *budget -= 1;
    let m = 0.5 * (a + b);
    let fl = f(0.5 * (a + m));
    let fr = f(0.5 * (m + b));
    let left = simpson_panel(fa, fl, fm, m - a);
    let right = simpson_panel(fm, fr, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 {
        return Err(Error::QuadratureFailure("max refinement depth reached".into()));
    }
    if delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    let lv = adapt(f, a, m, fa, fl, fm, left, tol / 2.0, depth - 1, budget)?;
    let rv = adapt(f, m, b, fm, fr, fb, right, tol / 2.0, depth - 1, budget)?;
    Ok(lv + rv)
}
