use serde::Serialize;

use super::signature::CkSignature;
use crate::error::{Error, Result};
use crate::kappa_math::{ck_arcsin, ck_cos, ck_sin};
use std::f64::consts::{FRAC_PI_2, PI};

/// Linear ambient coordinates satisfying `x₀² + κ₁(x₁² + κ₂x₂²) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmbientPoint {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl AmbientPoint {
    /// `x₀² + κ₁(x₁² + κ₂x₂²)`, which should be 1.
    pub fn constraint(&self, sig: &CkSignature) -> f64 {
        self.x0 * self.x0 + sig.kappa1 * (self.x1 * self.x1 + sig.kappa2 * self.x2 * self.x2)
    }
}

/// Ambient point with its parallel coordinates and oscillator-center distances.
///
/// `x` is the distance to the axis `l₂` and `y` the distance to `l₁`.
/// `r1` (distance to the point `O₁` at `π/2` along `l₁`) exists only for
/// `κ₁ > 0`, `r2` only for `κ₁κ₂ > 0`. On the other spaces those centers lie
/// outside the space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Embedding {
    pub point: AmbientPoint,
    pub x: f64,
    pub y: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
}

pub fn ambient_embed(sig: &CkSignature, r: f64, theta: f64) -> Result<Embedding> {
    let (k1, k2) = (sig.kappa1, sig.kappa2);
    if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
        return Err(Error::ChartDomain(format!("({r}, {theta}) is not a polar point")));
    }
    if k1 > 0.0 && k1.sqrt() * r >= PI {
        return Err(Error::ChartDomain(format!("r = {r} beyond the antipode at curvature {k1}")));
    }
    let s = ck_sin(r, k1);
    let point = AmbientPoint { x0: ck_cos(r, k1), x1: s * ck_cos(theta, k2), x2: s * ck_sin(theta, k2) };
    let chart_err = |e: Error| Error::ChartDomain(format!("parallel coordinates undefined at ({r}, {theta}): {e}"));
    let x = ck_arcsin(point.x1, k1).map_err(chart_err)?;
    let y = ck_arcsin(point.x2, k1 * k2).map_err(chart_err)?;
    let r1 = (k1 > 0.0).then(|| FRAC_PI_2 / k1.sqrt() - x);
    let r2 = (k1 * k2 > 0.0).then(|| FRAC_PI_2 / (k1 * k2).sqrt() - y);
    Ok(Embedding { point, x, y, r1, r2 })
}
