use serde::Serialize;

use super::signature::{ChartKind, CkSignature};
use crate::error::{Error, Result};
use crate::kappa_math::{ck_cos, ck_sin, ck_tan};
use std::f64::consts::{FRAC_PI_2, PI};

/// Metric, connection and curvature of a polar chart at one point.
///
/// Indices are `(r, θ)` where `r` stands for `ρ` in the `RhoChart`.
/// Only the nonzero Christoffel symbols are stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricChart {
    pub chart: ChartKind,
    pub g_rr: f64,
    pub g_thth: f64,
    /// `Γ^r_rr`
    pub gamma_r_rr: f64,
    /// `Γ^θ_θr = Γ^θ_rθ`
    pub gamma_th_thr: f64,
    /// `Γ^r_θθ`
    pub gamma_r_thth: f64,
    /// `R^r_θrθ`, equal to `R_θθ` in two dimensions
    pub riemann_r_thrth: f64,
    /// `R^θ_rθr`, equal to `R_rr`
    pub riemann_th_rthr: f64,
    pub ricci_rr: f64,
    pub ricci_thth: f64,
    pub sectional: f64,
}

impl MetricChart {
    /// Squared length of a chart velocity.
    pub fn norm2(&self, v_r: f64, v_th: f64) -> f64 {
        self.g_rr * v_r * v_r + self.g_thth * v_th * v_th
    }
}

pub(crate) fn check_radial(sig: &CkSignature, chart: ChartKind, radial: f64) -> Result<()> {
    let z = sig.kappa1;
    if !(radial > 0.0) || !radial.is_finite() {
        return Err(Error::ChartDomain(format!("radial coordinate must be positive, got {radial}")));
    }
    let (limit, sign) = match chart {
        ChartKind::RhoChart => (FRAC_PI_2, -1.0),
        ChartKind::RChart => (PI, 1.0),
    };
    if sign * z > 0.0 && (sign * z).sqrt() * radial >= limit {
        return Err(Error::ChartDomain(format!("{chart:?} at z = {z} does not reach radial = {radial}")));
    }
    Ok(())
}

/// Tensors of the `RhoChart` metric `(1/C)(dρ² + κ₂S²dθ²)` or of the `RChart`
/// metric `dr² + κ₂ S² dθ²`.
pub fn polar_chart(sig: &CkSignature, chart: ChartKind, radial: f64, theta: f64) -> Result<MetricChart> {
    check_radial(sig, chart, radial)?;
    if !theta.is_finite() {
        return Err(Error::ChartDomain(format!("angle {theta} is not finite")));
    }
    let (z, k) = (sig.kappa1, sig.kappa2);
    let out = match chart {
        ChartKind::RhoChart => {
            let (c, s, t) = (ck_cos(radial, -z), ck_sin(radial, -z), ck_tan(radial, -z));
            let (g_rr, g_thth) = (1.0 / c, k * s * s / c);
            let sectional = -0.5 * z * z * s * s / c;
            MetricChart {
                chart,
                g_rr,
                g_thth,
                gamma_r_rr: -0.5 * z * t,
                gamma_th_thr: (1.0 + c * c) / (2.0 * s * c),
                gamma_r_thth: -0.5 * k * t * (1.0 + c * c),
                riemann_r_thrth: sectional * g_thth,
                riemann_th_rthr: sectional * g_rr,
                ricci_rr: -0.5 * z * z * t * t,
                ricci_thth: -0.5 * k * z * z * s * s * t * t,
                sectional,
            }
        }
        ChartKind::RChart => {
            let (c, s) = (ck_cos(radial, z), ck_sin(radial, z));
            MetricChart {
                chart,
                g_rr: 1.0,
                g_thth: k * s * s,
                gamma_r_rr: 0.0,
                gamma_th_thr: c / s,
                gamma_r_thth: -k * s * c,
                riemann_r_thrth: k * z * s * s,
                riemann_th_rthr: z,
                ricci_rr: z,
                ricci_thth: k * z * s * s,
                sectional: z,
            }
        }
    };
    Ok(out)
}
