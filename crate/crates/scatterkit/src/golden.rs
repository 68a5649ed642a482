//! Golden reference records: frozen oracle values committed as JSON and
//! re-verified against the current implementation.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::nonorth::{
    delta_general, delta_term_radial, delta_term_square_well, delta_term_square_well_strict,
};
use crate::oracle::{
    cesaro_delta_extract, quad_overlap, radial_ode_solve, sech2_cesaro_delta_extract,
    RadialPotential,
};
use crate::overlap::WindowSpec;
use crate::potentials::Potential;
use crate::{Error, Result};

/// One frozen reference value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub potential: String,
    pub k1: f64,
    pub k2: f64,
    pub method: String,
    pub value_re: f64,
    pub value_im: f64,
    pub tolerance: f64,
}

/// Outcome of re-deriving one record.
#[derive(Debug, Clone)]
pub struct GoldenCheck {
    pub record: GoldenRecord,
    pub recomputed: Complex64,
    pub distance: f64,
    pub pass: bool,
}

/// Parse a radial potential string "radialwell:V0=..,b=..".
fn parse_radial(s: &str) -> Result<RadialPotential> {
    let rest = s
        .strip_prefix("radialwell:")
        .ok_or_else(|| Error::Golden(format!("unknown radial potential `{s}`")))?;
    let mut v0 = None;
    let mut b = None;
    for item in rest.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Golden(format!("bad radial parameter `{item}`")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Golden(format!("non-numeric `{value}`")))?;
        match key {
            "V0" => v0 = Some(v),
            "b" => b = Some(v),
            _ => return Err(Error::Golden(format!("unknown radial key `{key}`"))),
        }
    }
    match (v0, b) {
        (Some(depth), Some(radius)) => Ok(RadialPotential::Well { depth, radius }),
        _ => Err(Error::Golden("radial potential needs V0 and b".into())),
    }
}

/// Recompute the value a record describes.
pub fn recompute(rec: &GoldenRecord) -> Result<Complex64> {
    let mut parts = rec.method.split('/');
    let head = parts.next().unwrap_or("");
    match head {
        "delta-1d" => {
            let p: Potential = rec.potential.parse()?;
            delta_general(&p, rec.k1, rec.k2)
        }
        "delta-sw-closed" => {
            let p: Potential = rec.potential.parse()?;
            delta_term_square_well(rec.k1, rec.k2, &p)
        }
        "delta-sw-strict" => {
            let p: Potential = rec.potential.parse()?;
            delta_term_square_well_strict(rec.k1, rec.k2, &p)
        }
        "delta-cesaro" => {
            let lambda0: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Golden(format!("method `{}` needs lambda0", rec.method)))?;
            let n: usize = parts.next().and_then(|s| s.parse().ok()).unwrap_or(2048);
            let p: Potential = rec.potential.parse()?;
            let ext = match p {
                Potential::Sech2 { .. } => {
                    sech2_cesaro_delta_extract(&p, rec.k1, rec.k2, lambda0, n)?
                }
                _ => cesaro_delta_extract(&p, rec.k1, rec.k2, lambda0, n)?,
            };
            Ok(ext.averaged)
        }
        "quad-overlap" => {
            let x1: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Golden(format!("method `{}` needs x1/x2", rec.method)))?;
            let x2: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Golden(format!("method `{}` needs x1/x2", rec.method)))?;
            let p: Potential = rec.potential.parse()?;
            quad_overlap(&p, rec.k1, rec.k2, &WindowSpec::new(x1, x2)?, 1e-11)
        }
        "radial-delta" => {
            let rmax: f64 = parts.next().and_then(|s| s.parse().ok()).unwrap_or(40.0);
            let v = parse_radial(&rec.potential)?;
            let s1 = radial_ode_solve(&v, rec.k1, rmax)?;
            let s2 = radial_ode_solve(&v, rec.k2, rmax)?;
            delta_term_radial(
                s1.t, s1.r_coeff, s2.t, s2.r_coeff, s1.phi0, s1.dphi0, s2.phi0, s2.dphi0,
                rec.k1, rec.k2,
            )
        }
        other => Err(Error::Golden(format!("unknown golden method `{other}`"))),
    }
}

/// Verify one record.
pub fn check(rec: &GoldenRecord) -> GoldenCheck {
    match recompute(rec) {
        Ok(value) => {
            let want = Complex64::new(rec.value_re, rec.value_im);
            let distance = (value - want).norm();
            GoldenCheck {
                record: rec.clone(),
                recomputed: value,
                distance,
                pass: distance <= rec.tolerance,
            }
        }
        Err(_) => GoldenCheck {
            record: rec.clone(),
            recomputed: Complex64::new(f64::NAN, f64::NAN),
            distance: f64::INFINITY,
            pass: false,
        },
    }
}

/// Load every record from `*.json` files in a directory (each file holds an
/// array of records).
pub fn load_dir(dir: &Path) -> Result<Vec<GoldenRecord>> {
    let mut records = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|e| e == "json").unwrap_or(false))
        .collect();
    entries.sort();
    for path in entries {
        let text = std::fs::read_to_string(&path)?;
        let mut batch: Vec<GoldenRecord> = serde_json::from_str(&text)?;
        records.append(&mut batch);
    }
    if records.is_empty() {
        return Err(Error::Golden(format!("no golden records found under {}", dir.display())));
    }
    Ok(records)
}

/// Verify a whole directory; returns the per-record outcomes.
pub fn verify_dir(dir: &Path) -> Result<Vec<GoldenCheck>> {
    Ok(load_dir(dir)?.iter().map(check).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_roundtrip_and_check() {
        let p = Potential::square_well(0.5, 2.0).unwrap();
        let value = delta_general(&p, 1.1, 1.7).unwrap();
        let rec = GoldenRecord {
            potential: p.to_string(),
            k1: 1.1,
            k2: 1.7,
            method: "delta-1d".into(),
            value_re: value.re,
            value_im: value.im,
            tolerance: 1e-12,
        };
        let text = serde_json::to_string(&vec![rec.clone()]).unwrap();
        let back: Vec<GoldenRecord> = serde_json::from_str(&text).unwrap();
        let chk = check(&back[0]);
        assert!(chk.pass, "distance {}", chk.distance);
    }

    #[test]
    fn bad_method_fails_closed() {
        let rec = GoldenRecord {
            potential: "free".into(),
            k1: 1.0,
            k2: 2.0,
            method: "no-such-method".into(),
            value_re: 0.0,
            value_im: 0.0,
            tolerance: 1.0,
        };
        assert!(!check(&rec).pass);
    }
}
