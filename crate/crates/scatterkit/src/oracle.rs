//! Independent brute-force backends: adaptive quadrature of the states,
//! windowed-overlap demodulation for the finite remainder, an ODE-integrated
//! sech^2 state, and a radial ODE solver with asymptotic matching.

use num_complex::Complex64;

use crate::linalg;
use crate::overlap::{overlap_window, WindowSpec};
use crate::potentials::Potential;
use crate::quadrature::adaptive_simpson;
use crate::scattering::{
    delta_coefficients_with_strength, eval_wavefunction, square_well_coefficients,
    ScatteringCoefficients,
};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Adaptive quadrature of phi_{k1}^* phi_{k2} over the window.
///
/// Initial panels are capped at a quarter period of the fastest oscillation
/// (k1 + k2, or the interior wavenumbers if larger).
pub fn quad_overlap(p: &Potential, k1: f64, k2: f64, w: &WindowSpec, tol: f64) -> Result<Complex64> {
    if tol < 1e-13 {
        return Err(Error::QuadratureFailure(format!("tolerance {tol} below 1e-13")));
    }
    match *p {
        Potential::Free | Potential::Delta { .. } | Potential::SquareWell { .. } => {
            w.brackets(p)?;
            let c1 = coefficients_for(p, k1)?;
            let c2 = coefficients_for(p, k2)?;
            let max_freq = (k1 + k2).max(c1.k_in.norm() + c2.k_in.norm());
            let f = |x: f64| {
                let f1 = eval_wavefunction(p, &c1, x).expect("family supported");
                let f2 = eval_wavefunction(p, &c2, x).expect("family supported");
                f1.conj() * f2
            };
            adaptive_simpson(&f, w.x1, w.x2, tol, max_freq)
        }
        Potential::Sech2 { .. } => {
            let s1 = Sech2State::solve(p, k1)?;
            let s2 = Sech2State::solve(p, k2)?;
            let max_freq = k1 + k2;
            let f = |x: f64| s1.eval(x).conj() * s2.eval(x);
            adaptive_simpson(&f, w.x1, w.x2, tol, max_freq)
        }
        Potential::Linear { .. } => {
            Err(Error::UnsupportedFamily { op: "quad_overlap", family: "linear" })
        }
    }
}

fn coefficients_for(p: &Potential, k: f64) -> Result<ScatteringCoefficients> {
    match *p {
        Potential::Free => Ok(ScatteringCoefficients {
            k,
            k_in: Complex64::new(k, 0.0),
            r: Complex64::new(0.0, 0.0),
            t: Complex64::new(1.0, 0.0),
            a_plus: None,
            a_minus: None,
            denominator: None,
        }),
        Potential::Delta { strength } => delta_coefficients_with_strength(k, strength),
        Potential::SquareWell { .. } => square_well_coefficients(k, p),
        _ => Err(Error::UnsupportedFamily { op: "oracle coefficients", family: p.family_name() }),
    }
}

/// Result of the windowed-overlap demodulation.
#[derive(Debug, Clone)]
pub struct CesaroExtraction {
    pub lambda_grid: Vec<f64>,
    pub raw_overlaps: Vec<Complex64>,
    /// the extracted finite remainder, oriented to match `delta_term_1d`
    pub averaged: Complex64,
    /// |value from [lambda0, 2 lambda0] - value from [2 lambda0, 4 lambda0]|
    pub convergence_estimate: f64,
    /// residual non-oscillatory part (vanishes for exact eigenstates)
    pub constant_part: Complex64,
}

/// Demodulate a sampled overlap o(L) = C + sum_j c_j e^{i w_j L} by running
/// averages with Gauss-Seidel refinement. Returns (C, sum_j c_j).
fn demodulate(
    lambdas: &[f64],
    values: &[Complex64],
    freqs: &[f64],
    sweeps: usize,
) -> (Complex64, Complex64) {
    let n = lambdas.len() as f64;
    let zero = Complex64::new(0.0, 0.0);
    let phases: Vec<Vec<Complex64>> = freqs
        .iter()
        .map(|&w| lambdas.iter().map(|&lam| (I * w * lam).exp()).collect())
        .collect();
    let mut residual = values.to_vec();
    let mut coef = vec![zero; freqs.len()];
    for _ in 0..=sweeps {
        for j in 0..freqs.len() {
            // fold this channel's current estimate back into the residual,
            // then re-average it out
            let mut acc = zero;
            for idx in 0..residual.len() {
                acc += (residual[idx] + coef[j] * phases[j][idx]) * phases[j][idx].conj();
            }
            let new_c = acc / n;
            let delta = new_c - coef[j];
            for (idx, r) in residual.iter_mut().enumerate() {
                *r -= delta * phases[j][idx];
            }
            coef[j] = new_c;
        }
    }
    let constant = coef[0];
    let osc_sum = coef.iter().skip(1).fold(zero, |a, &c| a + c);
    (constant, osc_sum)
}

fn lambda_samples(lambda0: f64, n: usize, max_freq: f64) -> Vec<f64> {
    // respect Nyquist for the fastest demodulation frequency difference
    let needed = (lambda0 * 2.2 * max_freq / std::f64::consts::PI).ceil() as usize;
    let n = n.max(needed).max(256);
    (0..n).map(|i| lambda0 * (1.0 + i as f64 / (n - 1) as f64)).collect()
}

/// Extract the finite remainder of the windowed overlap by annihilating the
/// four boundary oscillators e^{+-i(k1-k2)L}, e^{+-i(k1+k2)L} with running
/// averages over L in [lambda0, 2 lambda0].
///
/// Orientation: the overlap is sampled with the k2 state conjugated and the
/// remainder reported as (constant - oscillator sum), which reproduces
/// `delta_term_1d` for asymptotically plane-wave states.
pub fn cesaro_delta_extract(
    p: &Potential,
    k1: f64,
    k2: f64,
    lambda0: f64,
    n_lambda: usize,
) -> Result<CesaroExtraction> {
    let overlap = |lam: f64| -> Result<Complex64> {
        overlap_window(p, k2, k1, &WindowSpec::symmetric(lam)?)
    };
    cesaro_from_overlap(&overlap, p, k1, k2, lambda0, n_lambda, Orientation::OneDim)
}

pub(crate) enum Orientation {
    /// 1D: remainder = constant - oscillator sum
    OneDim,
    /// radial: remainder = constant + oscillator sum
    Radial,
}

pub(crate) fn cesaro_from_overlap(
    overlap: &dyn Fn(f64) -> Result<Complex64>,
    p: &Potential,
    k1: f64,
    k2: f64,
    lambda0: f64,
    n_lambda: usize,
    orientation: Orientation,
) -> Result<CesaroExtraction> {
    if (k1 - k2).abs() < 1e-9 || (k1 + k2).abs() < 1e-9 {
        return Err(Error::DegenerateMomenta(k1, k2));
    }
    let support = p.support_half_width().unwrap_or(20.0);
    let min_lambda =
        (4.0 * support).max(4.0 * std::f64::consts::TAU / (k1 - k2).abs()).max(10.0);
    if lambda0 < min_lambda {
        return Err(Error::InvalidArgument(format!(
            "lambda0 = {lambda0} too small: need >= {min_lambda:.1} for this momentum pair"
        )));
    }
    let freqs = [0.0, k1 - k2, k2 - k1, k1 + k2, -(k1 + k2)];
    let max_gap = 2.0 * (k1 + k2);
    let extraction_at = |l0: f64| -> Result<(Vec<f64>, Vec<Complex64>, Complex64, Complex64)> {
        let lams = lambda_samples(l0, n_lambda, max_gap);
        let mut vals = Vec::with_capacity(lams.len());
        for &lam in &lams {
            vals.push(overlap(lam)?);
        }
        let (c, s) = demodulate(&lams, &vals, &freqs, 3);
        Ok((lams, vals, c, s))
    };
    let (lams, vals, c_lo, s_lo) = extraction_at(lambda0)?;
    let (_, _, c_hi, s_hi) = extraction_at(2.0 * lambda0)?;
    let assemble = |c: Complex64, s: Complex64| -> Complex64 {
        match orientation {
            Orientation::OneDim => c - s,
            Orientation::Radial => c + s,
        }
    };
    let lo = assemble(c_lo, s_lo);
    let hi = assemble(c_hi, s_hi);
    Ok(CesaroExtraction {
        lambda_grid: lams,
        raw_overlaps: vals,
        averaged: lo,
        convergence_estimate: (lo - hi).norm(),
        constant_part: c_lo,
    })
}

// ---------------------------------------------------------------------------
// sech^2 states by ODE integration
// ---------------------------------------------------------------------------

/// Scattering state of V0/cosh^2(mu x) on a stored grid, normalized to unit
/// incoming amplitude. Integrated inward from the transmitted side; the
/// asymptotic forms take over beyond `x_max` (seeding error O(e^{-2 mu X})).
pub struct Sech2State {
    pub k: f64,
    pub r: Complex64,
    pub t: Complex64,
    x_max: f64,
    step: f64,
    /// phi and phi' from -x_max to +x_max
    values: Vec<(Complex64, Complex64)>,
}

impl Sech2State {
    pub fn solve(p: &Potential, k: f64) -> Result<Self> {
        let (v0, mu) = match *p {
            Potential::Sech2 { depth, inverse_range } => (depth, inverse_range),
            _ => return Err(Error::UnsupportedFamily { op: "Sech2State", family: p.family_name() }),
        };
        if !(k > 0.0) {
            return Err(Error::NonPositiveWavenumber(k));
        }
        let x_max = 18.0 / mu;
        let step = (5e-4f64).min(0.02 / k);
        let n = (((2.0 * x_max / step).ceil() as usize) + 1) & !1; // even step count
        let step = 2.0 * x_max / n as f64;
        // phi'' = (2 V - k^2) phi, integrate from +x_max down to -x_max
        let rhs = |x: f64, phi: Complex64| -> Complex64 {
            let sech = 1.0 / (mu * x).cosh();
            (2.0 * v0 * sech * sech - k * k) * phi
        };
        let mut phi = (I * k * x_max).exp();
        let mut dphi = I * k * phi;
        let h = -step;
        let mut values = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); n + 1];
        values[n] = (phi, dphi);
        let mut x = x_max;
        for i in (0..n).rev() {
            // RK4 on (phi, phi')
            let k1v = (dphi, rhs(x, phi));
            let k2v = (dphi + 0.5 * h * k1v.1, rhs(x + 0.5 * h, phi + 0.5 * h * k1v.0));
            let k3v = (dphi + 0.5 * h * k2v.1, rhs(x + 0.5 * h, phi + 0.5 * h * k2v.0));
            let k4v = (dphi + h * k3v.1, rhs(x + h, phi + h * k3v.0));
            phi += h / 6.0 * (k1v.0 + 2.0 * k2v.0 + 2.0 * k3v.0 + k4v.0);
            dphi += h / 6.0 * (k1v.1 + 2.0 * k2v.1 + 2.0 * k3v.1 + k4v.1);
            x += h;
            values[i] = (phi, dphi);
        }
        // decompose at -x_max into incoming + reflected
        let xm = -x_max;
        let (f, df) = values[0];
        let alpha = (I * k * f + df) / (2.0 * I * k) * (-I * k * xm).exp();
        let beta = (I * k * f - df) / (2.0 * I * k) * (I * k * xm).exp();
        if alpha.norm() < 1e-12 {
            return Err(Error::QuadratureFailure("vanishing incoming amplitude".into()));
        }
        for v in &mut values {
            v.0 /= alpha;
            v.1 /= alpha;
        }
        Ok(Sech2State { k, r: beta / alpha, t: 1.0 / alpha, x_max, step, values })
    }

    /// phi(x): cubic Hermite interpolation on the stored grid inside
    /// [-x_max, x_max], asymptotic plane-wave forms outside.
    pub fn eval(&self, x: f64) -> Complex64 {
        if x > self.x_max {
            return self.t * (I * self.k * x).exp();
        }
        if x < -self.x_max {
            return (I * self.k * x).exp() + self.r * (-I * self.k * x).exp();
        }
        let pos = (x + self.x_max) / self.step;
        let idx = (pos.floor() as usize).min(self.values.len() - 2);
        let s = pos - idx as f64;
        let (f0, d0) = self.values[idx];
        let (f1, d1) = self.values[idx + 1];
        let h = self.step;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        f0 * h00 + d0 * (h * h10) + f1 * h01 + d1 * (h * h11)
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Overlap of the stored core region [-x_max, x_max] with another state
    /// on the same grid, by Simpson on the stored samples.
    fn core_overlap(&self, other: &Sech2State) -> Complex64 {
        assert_eq!(self.values.len(), other.values.len());
        let n = self.values.len();
        let mut acc = self.values[0].0.conj() * other.values[0].0
            + self.values[n - 1].0.conj() * other.values[n - 1].0;
        for i in 1..n - 1 {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.values[i].0.conj() * other.values[i].0;
        }
        acc * self.step / 3.0
    }
}

/// Windowed overlap of two sech^2 states: stored-core Simpson plus exact
/// antiderivatives of the asymptotic tails.
pub fn sech2_overlap_window(p: &Potential, k1: f64, k2: f64, w: &WindowSpec) -> Result<Complex64> {
    let s1 = Sech2State::solve(p, k1)?;
    let s2 = Sech2State::solve(p, k2)?;
    sech2_overlap_window_with(&s1, &s2, w)
}

pub fn sech2_overlap_window_with(
    s1: &Sech2State,
    s2: &Sech2State,
    w: &WindowSpec,
) -> Result<Complex64> {
    let xm = s1.x_max();
    if w.x1 > -xm || w.x2 < xm {
        // window inside the stored core: plain quadrature on the product
        let f = |x: f64| s1.eval(x).conj() * s2.eval(x);
        return adaptive_simpson(&f, w.x1, w.x2, 1e-11, s1.k + s2.k);
    }
    let mut total = s1.core_overlap(s2);
    total += tail_overlap_left(s1, s2, w.x1, -xm);
    total += tail_overlap_right(s1, s2, xm, w.x2);
    Ok(total)
}

fn seg_c(q: f64, x1: f64, x2: f64) -> Complex64 {
    if q.abs() < 1e-14 {
        return Complex64::new(x2 - x1, 0.0);
    }
    ((I * q * x2).exp() - (I * q * x1).exp()) / (I * q)
}

fn tail_overlap_left(s1: &Sech2State, s2: &Sech2State, x1: f64, x2: f64) -> Complex64 {
    let (k1, k2) = (s1.k, s2.k);
    seg_c(k2 - k1, x1, x2)
        + s2.r * seg_c(-k1 - k2, x1, x2)
        + s1.r.conj() * seg_c(k1 + k2, x1, x2)
        + s1.r.conj() * s2.r * seg_c(k1 - k2, x1, x2)
}

fn tail_overlap_right(s1: &Sech2State, s2: &Sech2State, x1: f64, x2: f64) -> Complex64 {
    s1.t.conj() * s2.t * seg_c(s2.k - s1.k, x1, x2)
}

/// Windowed-remainder extraction for sech^2: the two states are integrated
/// once; only the closed-form tails vary with the window size.
pub fn sech2_cesaro_delta_extract(
    p: &Potential,
    k1: f64,
    k2: f64,
    lambda0: f64,
    n_lambda: usize,
) -> Result<CesaroExtraction> {
    // conjugated slot is k2, matching delta_term_1d
    let s1 = Sech2State::solve(p, k1)?;
    let s2 = Sech2State::solve(p, k2)?;
    let overlap = |lam: f64| -> Result<Complex64> {
        sech2_overlap_window_with(&s2, &s1, &WindowSpec::symmetric(lam)?)
    };
    cesaro_from_overlap(&overlap, p, k1, k2, lambda0, n_lambda, Orientation::OneDim)
}

// ---------------------------------------------------------------------------
// radial states
// ---------------------------------------------------------------------------

/// Radial potentials for the s-wave reduction (hbar = 1, m = 1/2, E = k^2):
/// -u'' + V(r) u = k^2 u with u(0) = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialPotential {
    Free,
    /// V = depth for r < radius, 0 beyond
    Well { depth: f64, radius: f64 },
}

impl RadialPotential {
    fn eval(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Free => 0.0,
            RadialPotential::Well { depth, radius } => {
                if r < radius {
                    depth
                } else {
                    0.0
                }
            }
        }
    }

    pub fn range(&self) -> f64 {
        match *self {
            RadialPotential::Free => 0.0,
            RadialPotential::Well { radius, .. } => radius,
        }
    }
}

/// Numerically integrated radial state with fitted asymptotics
/// u(r) = T e^{ikr} + R e^{-ikr} beyond the potential range.
pub struct RadialState {
    pub k: f64,
    pub t: Complex64,
    pub r_coeff: Complex64,
    pub phi0: Complex64,
    pub dphi0: Complex64,
    pub fit_residual: f64,
    /// stored (u, u') on [0, r_core], step `step`
    values: Vec<(f64, f64)>,
    step: f64,
    r_core: f64,
}

/// Integrate outward from u(0) = 0, u'(0) = 1 and fit (T, R) on a tail
/// window of the last quarter of [0, r_max].
pub fn radial_ode_solve(v: &RadialPotential, k: f64, r_max: f64) -> Result<RadialState> {
    if !(k > 0.0) {
        return Err(Error::NonPositiveWavenumber(k));
    }
    let range = v.range();
    if r_max < range * 2.0 + 4.0 {
        return Err(Error::InvalidArgument(format!(
            "r_max = {r_max} too small for potential range {range}"
        )));
    }
    let step = (5e-4f64).min(0.02 / k);
    let n = (r_max / step).ceil() as usize;
    let step = r_max / n as f64;
    let rhs = |r: f64, u: f64| (v.eval(r) - k * k) * u;
    let mut u = 0.0f64;
    let mut du = 1.0f64;
    let mut values = Vec::with_capacity(n + 1);
    values.push((u, du));
    let mut r = 0.0f64;
    for _ in 0..n {
        let k1v = (du, rhs(r, u));
        let k2v = (du + 0.5 * step * k1v.1, rhs(r + 0.5 * step, u + 0.5 * step * k1v.0));
        let k3v = (du + 0.5 * step * k2v.1, rhs(r + 0.5 * step, u + 0.5 * step * k2v.0));
        let k4v = (du + step * k3v.1, rhs(r + step, u + step * k3v.0));
        u += step / 6.0 * (k1v.0 + 2.0 * k2v.0 + 2.0 * k3v.0 + k4v.0);
        du += step / 6.0 * (k1v.1 + 2.0 * k2v.1 + 2.0 * k3v.1 + k4v.1);
        r += step;
        values.push((u, du));
    }
    // least-squares fit of u = T e^{ikr} + R e^{-ikr} over the tail window
    let fit_lo = 0.75 * r_max;
    let stride = ((0.1 / (k * step)).round() as usize).max(1);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    let mut idx = (fit_lo / step).ceil() as usize;
    while idx < values.len() {
        let rr = idx as f64 * step;
        rows.push(vec![(I * k * rr).exp(), (-I * k * rr).exp()]);
        y.push(Complex64::new(values[idx].0, 0.0));
        idx += stride;
    }
    if rows.len() < 8 {
        return Err(Error::InvalidArgument("tail window too short for the fit".into()));
    }
    let sol = linalg::least_squares(&rows, &y)
        .ok_or(Error::SingularSystem(f64::INFINITY))?;
    let (t, rc) = (sol[0], sol[1]);
    let mut resid = 0.0f64;
    for (row, yv) in rows.iter().zip(&y) {
        resid = resid.max((row[0] * t + row[1] * rc - yv).norm());
    }
    let scale = y.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1e-30);
    if resid / scale > 1e-6 {
        return Err(Error::FitResidual { residual: resid / scale, threshold: 1e-6 });
    }
    // truncate the stored core where the tail fit takes over; Simpson needs
    // an odd sample count
    let mut m = (fit_lo / step).floor() as usize;
    if m % 2 == 1 {
        m -= 1;
    }
    let r_core = m as f64 * step;
    values.truncate(m + 1);
    Ok(RadialState {
        k,
        t,
        r_coeff: rc,
        phi0: Complex64::new(0.0, 0.0),
        dphi0: Complex64::new(1.0, 0.0),
        fit_residual: resid / scale,
        values,
        step,
        r_core,
    })
}

impl RadialState {
    /// |T|^2 - |R|^2; zero for a real potential by Wronskian conservation.
    pub fn flux_defect(&self) -> f64 {
        self.t.norm_sqr() - self.r_coeff.norm_sqr()
    }

    pub fn r_core(&self) -> f64 {
        self.r_core
    }

    /// Windowed overlap Int_0^{rw} u_self^*(r) u_other(r) dr; the core is a
    /// stored-sample Simpson sum, the tail uses the fitted asymptotics.
    pub fn overlap_to(&self, other: &RadialState, rw: f64) -> Result<Complex64> {
        if rw < self.r_core {
            return Err(Error::InvalidArgument(format!(
                "window {rw} must reach past the stored core {}",
                self.r_core
            )));
        }
        assert_eq!(self.values.len(), other.values.len());
        let n = self.values.len();
        let mut acc = self.values[0].0 * other.values[0].0
            + self.values[n - 1].0 * other.values[n - 1].0;
        for i in 1..n - 1 {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.values[i].0 * other.values[i].0;
        }
        let mut total = Complex64::new(acc * self.step / 3.0, 0.0);
        // tail: (T1 e^{ik1 r} + R1 e^{-ik1 r})^* (T2 e^{ik2 r} + R2 e^{-ik2 r})
        let (k1, k2) = (self.k, other.k);
        total += self.t.conj() * other.t * seg_c(k2 - k1, self.r_core, rw)
            + self.t.conj() * other.r_coeff * seg_c(-k1 - k2, self.r_core, rw)
            + self.r_coeff.conj() * other.t * seg_c(k1 + k2, self.r_core, rw)
            + self.r_coeff.conj() * other.r_coeff * seg_c(k1 - k2, self.r_core, rw);
        Ok(total)
    }
}

/// Closed-form s-wave amplitudes of the radial square well for the state
/// normalized to u'(0) = 1 (interior u = sin(k_in r)/k_in).
pub fn radial_well_exact(k: f64, depth: f64, radius: f64) -> (Complex64, Complex64) {
    let kin2 = k * k - depth;
    let kin = Complex64::new(kin2, 0.0).sqrt();
    let (ub, upb) = if kin.norm() < 1e-14 {
        (Complex64::new(radius, 0.0), Complex64::new(1.0, 0.0))
    } else {
        ((kin * radius).sin() / kin, (kin * radius).cos())
    };
    let t = (ub + upb / (I * k)) / 2.0 * (-I * k * radius).exp();
    let r = (ub - upb / (I * k)) / 2.0 * (I * k * radius).exp();
    (t, r)
}

/// Radial windowed-remainder extraction (orientation: constant + oscillator
/// sum, matching `delta_term_radial` for regular solutions).
pub fn radial_cesaro_delta_extract(
    s1: &RadialState,
    s2: &RadialState,
    lambda0: f64,
    n_lambda: usize,
) -> Result<CesaroExtraction> {
    let (k1, k2) = (s1.k, s2.k);
    if lambda0 <= s1.r_core() {
        return Err(Error::InvalidArgument(format!(
            "lambda0 = {lambda0} must exceed the stored radial core {}",
            s1.r_core()
        )));
    }
    let overlap = |rw: f64| -> Result<Complex64> { s2.overlap_to(s1, rw) };
    // the support checks of the generic machinery are driven by a free
    // placeholder; the radial core bound is enforced above
    let p = Potential::Free;
    cesaro_from_overlap(&overlap, &p, k1, k2, lambda0, n_lambda, Orientation::Radial)
}
