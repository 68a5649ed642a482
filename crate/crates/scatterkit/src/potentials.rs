//! Catalog of the supported potential families.
//!
//! Units are hbar = 1, m = 1 throughout the 1D modules. The radial module
//! uses m = 1/2 (see `oracle::radial`).

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A validated 1D potential.
///
/// The delta potential is distributional: it has no pointwise value and is
/// represented only through the jump condition its strength imposes on the
/// derivative of a wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Free,
    Delta { strength: f64 },
    SquareWell { depth: f64, width: f64 },
    Sech2 { depth: f64, inverse_range: f64 },
    Linear { slope: f64 },
}

/// Canonical contact-potential strength: g = -1 gives R = i/(k-i), T = k/(k-i).
pub const CANONICAL_DELTA_STRENGTH: f64 = -1.0;

impl Potential {
    pub fn free() -> Self {
        Potential::Free
    }

    /// Contact potential with the canonical unit strength g = -1.
    pub fn delta_canonical() -> Self {
        Potential::Delta { strength: CANONICAL_DELTA_STRENGTH }
    }

    pub fn delta(strength: f64) -> Result<Self> {
        if !strength.is_finite() || strength == 0.0 {
            return Err(Error::InvalidPotential(format!(
                "delta strength must be finite and nonzero, got {strength}"
            )));
        }
        Ok(Potential::Delta { strength })
    }

    pub fn square_well(depth: f64, width: f64) -> Result<Self> {
        if !depth.is_finite() {
            return Err(Error::InvalidPotential(format!("V0 must be finite, got {depth}")));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidPotential(format!("width a must be > 0, got {width}")));
        }
        Ok(Potential::SquareWell { depth, width })
    }

    pub fn sech2(depth: f64, inverse_range: f64) -> Result<Self> {
        if !depth.is_finite() {
            return Err(Error::InvalidPotential(format!("V0 must be finite, got {depth}")));
        }
        if !(inverse_range > 0.0) || !inverse_range.is_finite() {
            return Err(Error::InvalidPotential(format!(
                "inverse range mu must be > 0, got {inverse_range}"
            )));
        }
        Ok(Potential::Sech2 { depth, inverse_range })
    }

    pub fn linear(slope: f64) -> Result<Self> {
        if !slope.is_finite() || slope == 0.0 {
            return Err(Error::InvalidPotential(format!(
                "linear slope m*g must be finite and nonzero, got {slope}"
            )));
        }
        Ok(Potential::Linear { slope })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Potential::Free => "free",
            Potential::Delta { .. } => "delta",
            Potential::SquareWell { .. } => "squarewell",
            Potential::Sech2 { .. } => "sech2",
            Potential::Linear { .. } => "linear",
        }
    }

    /// Pointwise value V(x).
    ///
    /// The square well takes the value V0/2 exactly at x = +-a/2; the choice
    /// is measure-zero for every integral but fixed for determinism. The
    /// delta family is rejected (no pointwise value exists).
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("x must be finite, got {x}")));
        }
        match *self {
            Potential::Free => Ok(0.0),
            Potential::Delta { .. } => {
                Err(Error::UnsupportedFamily { op: "evaluate", family: "delta" })
            }
            Potential::SquareWell { depth, width } => {
                let half = width / 2.0;
                Ok(if x.abs() < half {
                    depth
                } else if x.abs() == half {
                    depth / 2.0
                } else {
                    0.0
                })
            }
            Potential::Sech2 { depth, inverse_range } => {
                let c = (inverse_range * x).cosh();
                Ok(depth / (c * c))
            }
            Potential::Linear { slope } => Ok(slope * x),
        }
    }

    /// Half-width of the support for potentials that vanish identically
    /// outside a finite interval (0 for point support, None for unbounded).
    pub fn support_half_width(&self) -> Option<f64> {
        match *self {
            Potential::Free => Some(0.0),
            Potential::Delta { .. } => Some(0.0),
            Potential::SquareWell { width, .. } => Some(width / 2.0),
            Potential::Sech2 { .. } | Potential::Linear { .. } => None,
        }
    }
}

fn fmt_param(v: f64) -> String {
    // Shortest round-trip formatting keeps the spec strings readable
    // ("V0=0.5" rather than "V0=5.0000000000000000e-1").
    format!("{v}")
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Potential::Free => write!(f, "free"),
            Potential::Delta { strength } => write!(f, "delta:g={}", fmt_param(strength)),
            Potential::SquareWell { depth, width } => {
                write!(f, "squarewell:V0={},a={}", fmt_param(depth), fmt_param(width))
            }
            Potential::Sech2 { depth, inverse_range } => {
                write!(f, "sech2:V0={},mu={}", fmt_param(depth), fmt_param(inverse_range))
            }
            Potential::Linear { slope } => write!(f, "linear:mg={}", fmt_param(slope)),
        }
    }
}

/// Grammar: `family` or `family:key=value{,key=value}`.
/// Families and keys: free | delta[:g=..] | squarewell:V0=..,a=.. |
/// sech2:V0=..,mu=.. | linear:mg=..
impl FromStr for Potential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim(), Some(r)),
            None => (s.trim(), None),
        };
        let mut params: Vec<(String, f64)> = Vec::new();
        if let Some(rest) = rest {
            for item in rest.split(',') {
                let (key, value) = item.split_once('=').ok_or_else(|| {
                    Error::InvalidPotential(format!("expected key=value, got `{item}`"))
                })?;
                let v: f64 = value.trim().parse().map_err(|_| {
                    Error::InvalidPotential(format!("non-numeric value `{value}` for `{key}`"))
                })?;
                let key = key.trim().to_string();
                if params.iter().any(|(k, _)| *k == key) {
                    return Err(Error::InvalidPotential(format!("duplicate key `{key}`")));
                }
                params.push((key, v));
            }
        }
        let take = |params: &mut Vec<(String, f64)>, key: &str| -> Option<f64> {
            let pos = params.iter().position(|(k, _)| k == key)?;
            Some(params.remove(pos).1)
        };
        let require = |params: &mut Vec<(String, f64)>, key: &str| -> Result<f64> {
            take(params, key)
                .ok_or_else(|| Error::InvalidPotential(format!("missing parameter `{key}`")))
        };

        let mut params = params;
        let pot = match family {
            "free" => Potential::Free,
            "delta" => {
                let g = take(&mut params, "g").unwrap_or(CANONICAL_DELTA_STRENGTH);
                Potential::delta(g)?
            }
            "squarewell" => {
                let v0 = require(&mut params, "V0")?;
                let a = require(&mut params, "a")?;
                Potential::square_well(v0, a)?
            }
            "sech2" => {
                let v0 = require(&mut params, "V0")?;
                let mu = require(&mut params, "mu")?;
                Potential::sech2(v0, mu)?
            }
            "linear" => {
                let mg = require(&mut params, "mg")?;
                Potential::linear(mg)?
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        if let Some((key, _)) = params.first() {
            return Err(Error::InvalidPotential(format!(
                "unknown parameter `{key}` for family `{family}`"
            )));
        }
        Ok(pot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_well_construction() {
        assert!(Potential::square_well(1.0, 1.0).is_ok());
        assert!(Potential::square_well(1.0, 0.0).is_err());
        assert!(Potential::square_well(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn sech2_construction() {
        // attractive well with unit range is the canonical solvable case
        assert!(Potential::sech2(-1.0, 1.0).is_ok());
        assert!(Potential::sech2(-1.0, 0.0).is_err());
    }

    #[test]
    fn evaluate_square_well() {
        let p = Potential::square_well(3.0, 2.0).unwrap();
        assert_eq!(p.evaluate(0.0).unwrap(), 3.0);
        assert_eq!(p.evaluate(5.0).unwrap(), 0.0);
        assert_eq!(p.evaluate(1.0).unwrap(), 1.5); // boundary convention V0/2
        assert_eq!(p.evaluate(-1.0).unwrap(), 1.5);
    }

    #[test]
    fn evaluate_sech2_and_linear() {
        let p = Potential::sech2(2.0, 1.0).unwrap();
        assert!((p.evaluate(0.0).unwrap() - 2.0).abs() < 1e-15);
        let l = Potential::linear(2.5).unwrap();
        assert_eq!(l.evaluate(2.0).unwrap(), 5.0);
    }

    #[test]
    fn delta_has_no_pointwise_value() {
        let p = Potential::delta_canonical();
        assert!(matches!(p.evaluate(0.0), Err(Error::UnsupportedFamily { .. })));
    }

    #[test]
    fn parity_on_random_grid() {
        let sw = Potential::square_well(1.7, 2.3).unwrap();
        let s2 = Potential::sech2(-0.8, 1.4).unwrap();
        let mut x = 0.1_f64;
        for _ in 0..200 {
            x = (x * 1103.515245 + 1.2345).rem_euclid(7.0) - 3.5;
            for p in [&sw, &s2] {
                let v = p.evaluate(x).unwrap();
                let w = p.evaluate(-x).unwrap();
                assert_eq!(v, w, "V(x) != V(-x) at x={x}");
            }
        }
    }

    #[test]
    fn sech2_decay_bound() {
        let v0 = 2.0;
        let mu = 1.3;
        let p = Potential::sech2(v0, mu).unwrap();
        let mut x = 1.0 / mu + 0.05;
        while x < 20.0 {
            let v = p.evaluate(x).unwrap().abs();
            let bound = v0.abs() * (-2.0 * mu * (x - 1.0 / mu)).exp();
            assert!(v <= bound * (1.0 + 1e-12), "decay bound violated at x={x}");
            x += 0.37;
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in ["free", "delta:g=-1", "squarewell:V0=0.5,a=2", "sech2:V0=-1,mu=1", "linear:mg=2"]
        {
            let p: Potential = s.parse().unwrap();
            let q: Potential = p.to_string().parse().unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn parse_errors() {
        assert!("squarewell:V0=0.5".parse::<Potential>().is_err()); // missing a
        assert!("squarewell:V0=1,a=0".parse::<Potential>().is_err());
        assert!("box:V0=1".parse::<Potential>().is_err());
        assert!("squarewell:V0=x,a=1".parse::<Potential>().is_err());
        assert!("squarewell:V0=1,a=1,b=2".parse::<Potential>().is_err());
        assert!("delta:g=0".parse::<Potential>().is_err());
    }

    #[test]
    fn delta_defaults_to_canonical() {
        let p: Potential = "delta".parse().unwrap();
        assert_eq!(p, Potential::delta_canonical());
    }
}
