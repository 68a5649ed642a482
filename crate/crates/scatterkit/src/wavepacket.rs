//! Superpositions of stationary states and their norm over time.
//!
//! The norm model keeps the continuum normalization on the diagonal channel
//! (weight 2 pi per node) and the finite remainder on the off-diagonal
//! pairs; a position-space quadrature of |psi(t,x)|^2 over a window covering
//! the packet serves as the independent oracle.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::nonorth::{coefficients_for_delta, delta_term_1d};
use crate::potentials::Potential;
use crate::quadrature::gauss_legendre_on;
use crate::scattering::{eval_wavefunction, ScatteringCoefficients};
use crate::{Error, Result};

/// Sampled momentum amplitude a(k) with quadrature weights;
/// sum w |a|^2 = 1.
#[derive(Debug, Clone)]
pub struct SpectralProfile {
    pub k: Vec<f64>,
    pub weight: Vec<f64>,
    pub amplitude: Vec<Complex64>,
}

impl SpectralProfile {
    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.k
            .iter()
            .enumerate()
            .map(|(i, _)| self.weight[i] * self.amplitude[i].norm_sqr())
            .sum()
    }

    pub fn mean_momentum(&self) -> f64 {
        self.k
            .iter()
            .enumerate()
            .map(|(i, &k)| self.weight[i] * self.amplitude[i].norm_sqr() * k)
            .sum()
    }
}

/// Normalized Gaussian profile exp(-(k-k0)^2/(4 sigma^2)) on a
/// Gauss-Legendre grid over [k0 - span sigma, k0 + span sigma].
pub fn gaussian_profile(k0: f64, sigma: f64, n: usize, span: f64) -> Result<SpectralProfile> {
    if n < 16 {
        return Err(Error::InvalidProfile(format!("need n >= 16 samples, got {n}")));
    }
    if !(sigma > 0.0) || !(span > 0.0) {
        return Err(Error::InvalidProfile("sigma and span must be positive".into()));
    }
    let lo = k0 - span * sigma;
    let hi = k0 + span * sigma;
    if lo <= 0.0 {
        return Err(Error::InvalidProfile(format!(
            "grid crosses k = 0: k0 - span*sigma = {lo}"
        )));
    }
    let (k, weight) = gauss_legendre_on(n, lo, hi);
    let mut amplitude: Vec<Complex64> = k
        .iter()
        .map(|&ki| Complex64::new((-(ki - k0) * (ki - k0) / (4.0 * sigma * sigma)).exp(), 0.0))
        .collect();
    let norm: f64 = k
        .iter()
        .enumerate()
        .map(|(i, _)| weight[i] * amplitude[i].norm_sqr())
        .sum();
    let scale = 1.0 / norm.sqrt();
    for a in &mut amplitude {
        *a *= scale;
    }
    Ok(SpectralProfile { k, weight, amplitude })
}

/// One evaluated norm sample; `imag_residual` is the magnitude of the
/// imaginary part that the hermitian double sum should cancel.
#[derive(Debug, Clone, Copy)]
pub struct NormSample {
    pub value: f64,
    pub imag_residual: f64,
}

/// Precomputed norm evolution of a packet over one potential family.
pub struct NormEvolution {
    energies: Vec<f64>,
    coeffs: Vec<Complex64>, // w_i a_i
    diagonal: f64,
    /// finite remainder of <phi_i | phi_j>, the (i,j) off-diagonal kernel
    delta: Vec<Complex64>,
    n: usize,
}

impl NormEvolution {
    pub fn new(p: &Potential, prof: &SpectralProfile) -> Result<Self> {
        match *p {
            Potential::Linear { .. } => {
                return Err(Error::UnsupportedFamily { op: "norm evolution", family: "linear" })
            }
            _ => {}
        }
        let n = prof.len();
        let coeffs_k: Result<Vec<ScatteringCoefficients>> =
            prof.k.iter().map(|&k| coefficients_for_delta(p, k)).collect();
        let coeffs_k = coeffs_k?;
        let mut delta = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                // finite content of <phi_i | phi_j>: conjugation on slot i
                let ci = &coeffs_k[i];
                let cj = &coeffs_k[j];
                delta[i * n + j] =
                    delta_term_1d(cj.r, cj.t, ci.r, ci.t, cj.k, ci.k).unwrap_or_default();
            }
        }
        // diagonal channel: 2 pi w_i |a_i|^2 (1 + |R|^2 + |T|^2)/2
        let mut diagonal = 0.0;
        for i in 0..n {
            let dm = (1.0 + coeffs_k[i].flux()) / 2.0;
            diagonal += 2.0 * std::f64::consts::PI
                * prof.weight[i]
                * prof.amplitude[i].norm_sqr()
                * dm;
        }
        let coeffs = (0..n).map(|i| prof.weight[i] * prof.amplitude[i]).collect();
        Ok(NormEvolution { energies: prof.k.iter().map(|&k| k * k / 2.0).collect(), coeffs, diagonal, delta, n })
    }

    /// N(t) = diagonal + sum_{i != j} (w a e^{-iEt})_i^* (w a e^{-iEt})_j Delta_ij
    pub fn norm_at(&self, t: f64) -> NormSample {
        let n = self.n;
        let phases: Vec<Complex64> = self
            .energies
            .iter()
            .enumerate()
            .map(|(i, &e)| self.coeffs[i] * Complex64::new(0.0, -e * t).exp())
            .collect();
        let total: Complex64 = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                let ci = phases[i].conj();
                for j in 0..n {
                    if i != j {
                        acc += ci * phases[j] * self.delta[i * n + j];
                    }
                }
                acc
            })
            .reduce(|| Complex64::new(0.0, 0.0), |a, b| a + b);
        NormSample { value: self.diagonal + total.re, imag_residual: total.im.abs() }
    }

    /// 2 sum_{i != j} w_i w_j |a_i| |a_j| |Delta_ij|, an a-priori bound on
    /// |N(t) - N(0)|.
    pub fn drift_bound(&self) -> f64 {
        let n = self.n;
        let mags: Vec<f64> = self.coeffs.iter().map(|c| c.norm()).collect();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += mags[i] * mags[j] * self.delta[i * n + j].norm();
                }
            }
        }
        2.0 * acc
    }
}

/// Convenience wrapper: N(t) for one (potential, profile, t).
pub fn norm_at_time(p: &Potential, prof: &SpectralProfile, t: f64) -> Result<NormSample> {
    Ok(NormEvolution::new(p, prof)?.norm_at(t))
}

/// Norm-drift bound with a caller-supplied remainder evaluator.
pub fn norm_drift_bound<F>(prof: &SpectralProfile, delta_fn: F) -> f64
where
    F: Fn(f64, f64) -> Complex64,
{
    let n = prof.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let wi = prof.weight[i] * prof.amplitude[i].norm();
                let wj = prof.weight[j] * prof.amplitude[j].norm();
                acc += wi * wj * delta_fn(prof.k[i], prof.k[j]).norm();
            }
        }
    }
    2.0 * acc
}

/// Position-space oracle: psi(t, x) = sum_i w_i a_i e^{-i E_i t} phi_{k_i}(x)
/// integrated as Int |psi|^2 dx over [x1, x2] by composite Simpson.
pub fn position_space_norm(
    p: &Potential,
    prof: &SpectralProfile,
    t: f64,
    x1: f64,
    x2: f64,
    dx: f64,
) -> Result<f64> {
    if !(x1 < x2) || !(dx > 0.0) {
        return Err(Error::InvalidArgument("need x1 < x2 and dx > 0".into()));
    }
    let n_pts = (((x2 - x1) / dx).ceil() as usize + 1) | 1;
    let h = (x2 - x1) / (n_pts - 1) as f64;
    let coeffs_k: Result<Vec<ScatteringCoefficients>> =
        prof.k.iter().map(|&k| coefficients_for_delta(p, k)).collect();
    let coeffs_k = coeffs_k?;
    let weights: Vec<Complex64> = (0..prof.len())
        .map(|i| {
            prof.weight[i]
                * prof.amplitude[i]
                * Complex64::new(0.0, -prof.k[i] * prof.k[i] / 2.0 * t).exp()
        })
        .collect();
    let dens: Vec<f64> = (0..n_pts)
        .into_par_iter()
        .map(|ix| {
            let x = x1 + ix as f64 * h;
            let mut psi = Complex64::new(0.0, 0.0);
            for (i, cw) in weights.iter().enumerate() {
                let phi = eval_wavefunction(p, &coeffs_k[i], x).expect("supported family");
                psi += cw * phi;
            }
            psi.norm_sqr()
        })
        .collect();
    Ok(crate::quadrature::simpson_samples(&dens, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_profile_normalization_and_mean() {
        let prof = gaussian_profile(5.0, 0.5, 64, 5.0).unwrap();
        assert!((prof.spectral_norm() - 1.0).abs() < 1e-12);
        assert!((prof.mean_momentum() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_profile_rejects_bad_grids() {
        assert!(gaussian_profile(1.0, 0.5, 64, 5.0).is_err()); // crosses k = 0
        assert!(gaussian_profile(5.0, 0.5, 8, 5.0).is_err()); // too few nodes
    }

    #[test]
    fn narrow_profile_is_single_peaked() {
        let prof = gaussian_profile(5.0, 1e-3, 32, 5.0).unwrap();
        let mx = prof
            .amplitude
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap()
            .0;
        let peak = prof.amplitude[mx].norm_sqr() * prof.weight[mx];
        assert!(peak > 0.2 * prof.spectral_norm());
    }

    #[test]
    fn free_and_delta_norms_constant() {
        let prof = gaussian_profile(5.0, 0.5, 48, 5.0).unwrap();
        for p in [Potential::Free, Potential::delta_canonical()] {
            let evo = NormEvolution::new(&p, &prof).unwrap();
            let n0 = evo.norm_at(0.0);
            for &t in &[7.0, 31.0, 100.0] {
                let nt = evo.norm_at(t);
                assert!(
                    (nt.value - n0.value).abs() / n0.value < 1e-9,
                    "{p} drifted at t={t}"
                );
                assert!(nt.imag_residual < 1e-9 * n0.value);
            }
        }
    }

    #[test]
    fn square_well_norm_drifts_within_bound() {
        let p = Potential::square_well(0.002, 2.0).unwrap();
        let k0 = (3.0 * std::f64::consts::PI / 2.0).hypot((2.0 * 0.002f64).sqrt());
        let prof = gaussian_profile(k0, 0.3, 96, 5.0).unwrap();
        let evo = NormEvolution::new(&p, &prof).unwrap();
        let n0 = evo.norm_at(0.0).value;
        let bound = evo.drift_bound();
        let mut max_drift = 0.0f64;
        for i in 0..=10 {
            let t = 5.0 * i as f64;
            let nt = evo.norm_at(t).value;
            let drift = (nt - n0).abs();
            assert!(drift <= bound * (1.0 + 1e-12), "drift {drift} above bound {bound}");
            max_drift = max_drift.max(drift);
        }
        assert!(max_drift / n0 > 1e-6, "drift should be visible: {}", max_drift / n0);
    }

    #[test]
    fn drift_bound_zero_for_free() {
        let prof = gaussian_profile(5.0, 0.5, 32, 5.0).unwrap();
        let b = norm_drift_bound(&prof, |_, _| Complex64::new(0.0, 0.0));
        assert_eq!(b, 0.0);
    }

    #[test]
    fn grid_refinement_stability() {
        let p = Potential::square_well(0.002, 2.0).unwrap();
        let k0 = (3.0 * std::f64::consts::PI / 2.0).hypot((2.0 * 0.002f64).sqrt());
        let coarse = gaussian_profile(k0, 0.3, 128, 5.0).unwrap();
        let fine = gaussian_profile(k0, 0.3, 256, 5.0).unwrap();
        let ec = NormEvolution::new(&p, &coarse).unwrap();
        let ef = NormEvolution::new(&p, &fine).unwrap();
        for &t in &[0.0, 20.0, 50.0] {
            let a = ec.norm_at(t).value;
            let b = ef.norm_at(t).value;
            assert!((a - b).abs() / b < 1e-6, "refinement at t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn position_norm_matches_continuum_normalization() {
        // a free packet's windowed position norm equals 2 pi sum w |a|^2
        let prof = gaussian_profile(5.0, 0.5, 128, 5.0).unwrap();
        let q = position_space_norm(&Potential::Free, &prof, 0.0, -60.0, 60.0, 0.02).unwrap();
        let want = 2.0 * std::f64::consts::PI;
        assert!((q - want).abs() / want < 1e-6, "position norm {q} vs {want}");
    }
}
