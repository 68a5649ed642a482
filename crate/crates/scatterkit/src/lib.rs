//! Stationary scattering states for exactly solvable 1D potentials.
//!
//! The crate computes reflection/transmission coefficients and piecewise
//! wavefunctions for the square well, the contact (delta) potential, the
//! sech^2 (Poeschl-Teller) well and the linear potential, and decomposes
//! scalar products of two scattering states into delta-distribution
//! channels plus a finite remainder. Every closed form is backed by an
//! independent oracle: a 4x4 matching-system solve, adaptive quadrature,
//! windowed-overlap demodulation, or a radial ODE integration.

pub mod golden;
pub(crate) mod linalg;
pub mod nonorth;
pub mod oracle;
pub mod overlap;
pub mod potentials;
pub mod quadrature;
pub mod regcompare;
pub mod scattering;
pub mod special;
pub mod wavepacket;

pub use num_complex::Complex64;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid potential parameter: {0}")]
    InvalidPotential(String),
    #[error("unknown potential family `{0}`")]
    UnknownFamily(String),
    #[error("operation `{op}` is not supported for the {family} potential")]
    UnsupportedFamily { op: &'static str, family: &'static str },
    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),
    #[error("degenerate momenta: k1 = {0}, k2 = {1}")]
    DegenerateMomenta(f64, f64),
    #[error("gamma function pole at z = {0}")]
    GammaPole(Complex64),
    #[error("window [{x1}, {x2}] does not bracket the potential support [{lo}, {hi}]")]
    WindowDoesNotBracket { x1: f64, x2: f64, lo: f64, hi: f64 },
    #[error("invalid window: x1 = {0} must be < x2 = {1}")]
    InvalidWindow(f64, f64),
    #[error("regularization strength must be positive, got {0}")]
    NonPositiveEps(f64),
    #[error("momenta ({0}, {1}) are not at a transparency point: {2}")]
    NotAtTransparency(f64, f64, String),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("singular linear system (condition estimate {0:.3e})")]
    SingularSystem(f64),
    #[error("asymptotic fit residual {residual:.3e} above threshold {threshold:.3e}")]
    FitResidual { residual: f64, threshold: f64 },
    #[error("spectral grid invalid: {0}")]
    InvalidProfile(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("golden record error: {0}")]
    Golden(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
