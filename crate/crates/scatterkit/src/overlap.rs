//! Scalar products of two stationary states, three ways: exact finite-window
//! integration, boundary-current reduction, and damped-integral (Sokhotski-
//! Plemelj) decomposition into delta channels plus a finite remainder.
//!
//! Convention: overlap(k1, k2) = Int phi_{k1}(x)^* phi_{k2}(x) dx (first slot
//! conjugated).

use num_complex::Complex64;
use serde::Serialize;

use crate::potentials::Potential;
use crate::scattering::{
    delta_coefficients_with_strength, eval_wavefunction_with_deriv, square_well_coefficients,
    ScatteringCoefficients,
};
use crate::{oracle, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Finite integration window [x1, x2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    pub x1: f64,
    pub x2: f64,
}

impl WindowSpec {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if !(x1 < x2) || !x1.is_finite() || !x2.is_finite() {
            return Err(Error::InvalidWindow(x1, x2));
        }
        Ok(WindowSpec { x1, x2 })
    }

    /// Symmetric window [-lambda, lambda].
    pub fn symmetric(lambda: f64) -> Result<Self> {
        WindowSpec::new(-lambda, lambda)
    }

    /// Window of length L with lower edge x0 (the (x0, L) form).
    pub fn from_origin(x0: f64, length: f64) -> Result<Self> {
        WindowSpec::new(x0, x0 + length)
    }

    pub fn length(&self) -> f64 {
        self.x2 - self.x1
    }

    /// The window must strictly contain the support for segmentized
    /// integration and boundary reduction to be valid.
    pub fn brackets(&self, p: &Potential) -> Result<()> {
        match p.support_half_width() {
            Some(h) => {
                if self.x1 < -h && self.x2 > h {
                    Ok(())
                } else {
                    Err(Error::WindowDoesNotBracket { x1: self.x1, x2: self.x2, lo: -h, hi: h })
                }
            }
            None => Ok(()),
        }
    }
}

/// How an overlap value or decomposition was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapMethod {
    ClosedForm,
    BoundaryReduced,
    Regularized,
    Oracle,
}

/// Delta-channel coefficients and finite remainder of a scalar product.
///
/// The delta part reads: delta_km_coeff * 2 pi delta(k1-k2)
///                     + delta_kp_coeff *   pi delta(k1+k2).
/// For k1 != +-k2 the physical content is `finite_remainder` alone.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OverlapDecomposition {
    pub delta_km_coeff: Complex64,
    pub delta_kp_coeff: Complex64,
    pub finite_remainder: Complex64,
    pub method: OverlapMethod,
}

/// Exact integral of e^{i q x} over [x1, x2]; continuous at q = 0.
pub(crate) fn seg(q: Complex64, x1: f64, x2: f64) -> Complex64 {
    if q.norm() < 1e-14 {
        return Complex64::new(x2 - x1, 0.0);
    }
    ((I * q * x2).exp() - (I * q * x1).exp()) / (I * q)
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
        _ => Err(Error::UnsupportedFamily { op: "overlap coefficients", family: p.family_name() }),
    }
}

/// Exact finite-window overlap from per-segment antiderivatives
/// (piecewise-exponential states); adaptive quadrature of the integrated
/// state for sech2.
pub fn overlap_window(p: &Potential, k1: f64, k2: f64, w: &WindowSpec) -> Result<Complex64> {
    if !(k1 > 0.0) {
        return Err(Error::NonPositiveWavenumber(k1));
    }
    if !(k2 > 0.0) {
        return Err(Error::NonPositiveWavenumber(k2));
    }
    match *p {
        Potential::Free => Ok(seg(Complex64::new(k2 - k1, 0.0), w.x1, w.x2)),
        Potential::Delta { .. } | Potential::SquareWell { .. } => {
            w.brackets(p)?;
            let c1 = coefficients_for(p, k1)?;
            let c2 = coefficients_for(p, k2)?;
            Ok(segmented_overlap(p, &c1, &c2, w))
        }
        Potential::Sech2 { .. } => oracle::sech2_overlap_window(p, k1, k2, w),
        Potential::Linear { .. } => {
            Err(Error::UnsupportedFamily { op: "overlap_window", family: "linear" })
        }
    }
}

/// Segment-wise exact overlap of two piecewise-exponential states.
fn segmented_overlap(
    p: &Potential,
    c1: &ScatteringCoefficients,
    c2: &ScatteringCoefficients,
    w: &WindowSpec,
) -> Complex64 {
    let h = p.support_half_width().unwrap_or(0.0);
    let (k1, k2) = (Complex64::new(c1.k, 0.0), Complex64::new(c2.k, 0.0));
    let dk = k2 - k1;
    let sk = k1 + k2;
    // left region [x1, -h]: (e^{-ik1 x} + R1* e^{ik1 x})(e^{ik2 x} + R2 e^{-ik2 x})
    let mut total = seg(dk, w.x1, -h)
        + c2.r * seg(-sk, w.x1, -h)
        + c1.r.conj() * seg(sk, w.x1, -h)
        + c1.r.conj() * c2.r * seg(-dk, w.x1, -h);
    // right region [h, x2]
    total += c1.t.conj() * c2.t * seg(dk, h, w.x2);
    // interior (square well only)
    if let (Some(a1p), Some(a1m), Some(a2p), Some(a2m)) =
        (c1.a_plus, c1.a_minus, c2.a_plus, c2.a_minus)
    {
        let q1 = c1.k_in.conj();
        let q2 = c2.k_in;
        total += a1p.conj() * a2p * seg(q2 - q1, -h, h)
            + a1p.conj() * a2m * seg(-q2 - q1, -h, h)
            + a1m.conj() * a2p * seg(q2 + q1, -h, h)
            + a1m.conj() * a2m * seg(q1 - q2, -h, h);
    }
    total
}

/// Boundary current J = [(phi_{k1}')^* phi_{k2} - phi_{k1}^* phi_{k2}']
/// evaluated at the window edges (value at x2 minus value at x1).
pub fn boundary_current_j(p: &Potential, k1: f64, k2: f64, w: &WindowSpec) -> Result<Complex64> {
    let c1 = coefficients_for(p, k1)?;
    let c2 = coefficients_for(p, k2)?;
    let wr = |x: f64| -> Result<Complex64> {
        let (f1, d1) = eval_wavefunction_with_deriv(p, &c1, x)?;
        let (f2, d2) = eval_wavefunction_with_deriv(p, &c2, x)?;
        Ok(d1.conj() * f2 - f1.conj() * d2)
    };
    Ok(wr(w.x2)? - wr(w.x1)?)
}

/// Overlap recovered from the boundary current:
/// Int phi_{k1}^* phi_{k2} = -J / (2m (E(k1) - E(k2))), m = 1.
pub fn overlap_from_boundary(p: &Potential, k1: f64, k2: f64, w: &WindowSpec) -> Result<Complex64> {
    if (k1 - k2).abs() < 1e-12 || (k1 + k2).abs() < 1e-12 {
        return Err(Error::DegenerateMomenta(k1, k2));
    }
    w.brackets(p)?;
    let j = boundary_current_j(p, k1, k2, w)?;
    Ok(-j / (k1 * k1 - k2 * k2))
}

/// Damped-integral decomposition of the scalar product.
///
/// Each half-line tail integral is split by the Sokhotski-Plemlej limit of
/// its closed form at damping eps -> 0+: a pi delta part plus a principal-
/// value part evaluated at the given distinct momenta. The interior segment
/// is a finite exact integral. `eps` enters the companion finite-damping
/// diagnostic [`regularized_overlap_damped`]; the decomposition itself is the
/// exact limit and is bit-reproducible.
pub fn regularized_overlap(
    p: &Potential,
    k1: f64,
    k2: f64,
    eps: f64,
) -> Result<OverlapDecomposition> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    if !(k1 > 0.0) {
        return Err(Error::NonPositiveWavenumber(k1));
    }
    if !(k2 > 0.0) {
        return Err(Error::NonPositiveWavenumber(k2));
    }
    let c1 = coefficients_for(p, k1)?;
    let c2 = coefficients_for(p, k2)?;
    let delta_km = (1.0 + c1.t.conj() * c2.t + c1.r.conj() * c2.r) / 2.0;
    let delta_kp = c2.r + c1.r.conj();
    let finite = if (k1 - k2).abs() < 1e-12 {
        // degenerate direction: only the delta channels carry content
        Complex64::new(0.0, 0.0)
    } else {
        finite_remainder(p, &c1, &c2)
    };
    Ok(OverlapDecomposition {
        delta_km_coeff: delta_km,
        delta_kp_coeff: delta_kp,
        finite_remainder: finite,
        method: OverlapMethod::Regularized,
    })
}

/// The principal-value assembly of the damped overlap at distinct momenta.
pub(crate) fn finite_remainder(
    p: &Potential,
    c1: &ScatteringCoefficients,
    c2: &ScatteringCoefficients,
) -> Complex64 {
    let h = p.support_half_width().unwrap_or(0.0);
    let (k1, k2) = (c1.k, c2.k);
    let dk = k1 - k2;
    let sk = k1 + k2;
    // Left tail (-inf, -h]: finite part of each e^{ipx} term is the value of
    // the antiderivative at the inner endpoint: e^{-iph}/(ip).
    let lower = |pfreq: f64| -> Complex64 {
        (I * pfreq * (-h)).exp() / (I * pfreq)
    };
    // Right tail [h, inf): finite part is minus the antiderivative at h.
    let upper = |pfreq: f64| -> Complex64 { -(I * pfreq * h).exp() / (I * pfreq) };
    let mut total = lower(k2 - k1)
        + c2.r * lower(-sk)
        + c1.r.conj() * lower(sk)
        + c1.r.conj() * c2.r * lower(dk)
        + c1.t.conj() * c2.t * upper(k2 - k1);
    if let (Some(a1p), Some(a1m), Some(a2p), Some(a2m)) =
        (c1.a_plus, c1.a_minus, c2.a_plus, c2.a_minus)
    {
        let q1 = c1.k_in.conj();
        let q2 = c2.k_in;
        total += a1p.conj() * a2p * seg(q2 - q1, -h, h)
            + a1p.conj() * a2m * seg(-q2 - q1, -h, h)
            + a1m.conj() * a2p * seg(q2 + q1, -h, h)
            + a1m.conj() * a2m * seg(q1 - q2, -h, h);
    }
    total
}

/// The overlap with the explicit damping e^{-eps |x|} applied to each state
/// (e^{-2 eps |x|} on the product), in closed form. Used by the eps -> 0
/// extrapolation diagnostic.
pub fn regularized_overlap_damped(
    p: &Potential,
    k1: f64,
    k2: f64,
    eps: f64,
) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(Error::NonPositiveEps(eps));
    }
    let c1 = coefficients_for(p, k1)?;
    let c2 = coefficients_for(p, k2)?;
    let h = p.support_half_width().unwrap_or(0.0);
    let e2 = 2.0 * eps;
    // Int_{-inf}^{-h} e^{(ip + e2) x} dx
    let lower = |pf: f64| -> Complex64 {
        let s = Complex64::new(e2, pf);
        ((Complex64::new(0.0, pf) + e2) * (-h)).exp() / s
    };
    // Int_{h}^{inf} e^{(ip - e2) x} dx
    let upper = |pf: f64| -> Complex64 {
        let s = Complex64::new(-e2, pf);
        -((Complex64::new(0.0, pf) - e2) * h).exp() / s
    };
    let dk = k1 - k2;
    let sk = k1 + k2;
    let mut total = lower(k2 - k1)
        + c2.r * lower(-sk)
        + c1.r.conj() * lower(sk)
        + c1.r.conj() * c2.r * lower(dk)
        + c1.t.conj() * c2.t * upper(k2 - k1);
    if let (Some(a1p), Some(a1m), Some(a2p), Some(a2m)) =
        (c1.a_plus, c1.a_minus, c2.a_plus, c2.a_minus)
    {
        // interior damped on [-h, 0] and [0, h]
        let q1 = c1.k_in.conj();
        let q2 = c2.k_in;
        let damped_seg = |q: Complex64| -> Complex64 {
            let sl = I * q + e2; // on [-h, 0]
            let sr = I * q - e2; // on [0, h]
            let left = if sl.norm() < 1e-14 {
                Complex64::new(h, 0.0)
            } else {
                (Complex64::new(1.0, 0.0) - (sl * (-h)).exp()) / sl
            };
            let right = if sr.norm() < 1e-14 {
                Complex64::new(h, 0.0)
            } else {
                ((sr * h).exp() - 1.0) / sr
            };
            left + right
        };
        total += a1p.conj() * a2p * damped_seg(q2 - q1)
            + a1p.conj() * a2m * damped_seg(-q2 - q1)
            + a1m.conj() * a2p * damped_seg(q2 + q1)
            + a1m.conj() * a2m * damped_seg(q1 - q2);
    }
    Ok(total)
}

/// Quadratic Richardson extrapolation of the damped overlap over
/// eps in {1e-2, 1e-3, 1e-4}.
pub fn regularized_overlap_extrapolated(p: &Potential, k1: f64, k2: f64) -> Result<Complex64> {
    let eps = [1e-2, 1e-3, 1e-4];
    let mut vals = [Complex64::new(0.0, 0.0); 3];
    for (v, &e) in vals.iter_mut().zip(&eps) {
        *v = regularized_overlap_damped(p, k1, k2, e)?;
    }
    // Lagrange extrapolation to eps = 0
    let mut out = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        let mut li = 1.0;
        for j in 0..3 {
            if i != j {
                li *= (0.0 - eps[j]) / (eps[i] - eps[j]);
            }
        }
        out += vals[i] * li;
    }
    Ok(out)
}

/// Window kernel (e^{i dk (L + x0)} - e^{i dk x0}) / (i dk), the finite-L
/// realization of the delta sequence; L at dk = 0.
pub fn window_kernel(dk: f64, x0: f64, length: f64) -> Complex64 {
    seg(Complex64::new(dk, 0.0), x0, x0 + length)
}
