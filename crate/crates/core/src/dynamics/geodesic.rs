//! Closed-form geodesic curves and per-sample checks of integrated geodesics.
//!
//! In the `RChart` (and the flat `RhoChart`) geodesics are
//! `α / T(r) = sin_κ₂(θ + θ₀)` with `T = tan_κ₁`. Writing `u = 1/T(r)` the
//! geodesic equation becomes `u'' + κ₂u = 0` in `θ`, so `α` and `θ₀` follow from
//! `u` and `du/dθ` at any one point. On the deformed spaces the curve has no
//! elementary closed form and is checked through
//! `(dρ/dθ)² = (S²/α²)(S²/C − κ₂α²)`.

use serde::{Deserialize, Serialize};

use super::flows::first_integral;
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::geometry::{ChartKind, CkSignature};
use crate::kappa_math::{ck_cos, ck_sin, ck_tan};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicClosedForm {
    pub alpha: f64,
    pub theta0: f64,
}

/// Whether the curve is checked against `α/T(r) = sin_κ₂(θ+θ₀)` rather than
/// the differential form.
pub fn has_closed_form(sig: &CkSignature, chart: ChartKind) -> bool {
    chart == ChartKind::RChart || sig.kappa1 == 0.0
}

/// Fits `α, θ₀` from one point `[radial, θ, radial', θ']` of a unit-speed geodesic.
///
/// Without a closed form, `α` is the first integral `−S²θ'/C` and `θ₀ = −θ`.
pub fn fit_closed_form(sig: &CkSignature, chart: ChartKind, state: &[f64; 4]) -> Result<GeodesicClosedForm> {
    let [r, theta, vr, vt] = *state;
    if vt == 0.0 {
        return Ok(GeodesicClosedForm { alpha: 0.0, theta0: -theta });
    }
    if !has_closed_form(sig, chart) {
        return Ok(GeodesicClosedForm { alpha: first_integral(sig, chart, r, vt), theta0: -theta });
    }
    let (z, k) = (sig.kappa1, sig.kappa2);
    let s = ck_sin(r, z);
    let u = 1.0 / ck_tan(r, z);
    let du = -vr / (s * s * vt);
    let m2 = du * du + k * u * u;
    if !(m2 > 0.0) {
        return Err(Error::VariantUnavailable(format!("curve is not of the form α/T(r) = sin(θ+θ₀): m² = {m2}")));
    }
    let m = m2.sqrt();
    let (alpha, phase) = if k > 0.0 {
        (1.0 / m, u.atan2(du))
    } else {
        (du.signum() / m, (u / du).atanh())
    };
    Ok(GeodesicClosedForm { alpha, theta0: phase - theta })
}

/// Largest violation of the curve equation over the samples of a geodesic trajectory.
///
/// With a closed form: `max |α/T(r) − sin_κ₂(θ+θ₀)|`, otherwise the
/// differential form. Both are taken relative to `max(1, |rhs|)` since the
/// terms diverge at the chart edges. Radial geodesics (`α = 0`) report
/// `max |θ + θ₀|`.
pub fn closed_form_residual(sig: &CkSignature, chart: ChartKind, traj: &Trajectory, cf: &GeodesicClosedForm) -> f64 {
    let (z, k) = (sig.kappa1, sig.kappa2);
    let per_sample = |st: &[f64; 4]| {
        let [r, theta, vr, vt] = *st;
        if cf.alpha == 0.0 {
            return (theta + cf.theta0).abs();
        }
        if has_closed_form(sig, chart) {
            let rhs = ck_sin(theta + cf.theta0, k);
            (cf.alpha / ck_tan(r, z) - rhs).abs() / rhs.abs().max(1.0)
        } else {
            let (c, s) = (ck_cos(r, -z), ck_sin(r, -z));
            let lhs = (vr / vt).powi(2);
            let rhs = s * s / (cf.alpha * cf.alpha) * (s * s / c - k * cf.alpha * cf.alpha);
            (lhs - rhs).abs() / rhs.abs().max(1.0)
        }
    };
    traj.samples.iter().map(|s| per_sample(&s.state)).fold(0.0, f64::max)
}

/// `max |ρ'² − (C − κ₂α²/T²)| / max(1, C)` along a `RhoChart` geodesic, with
/// `α` taken at the start. The scale matters near the outer edge of the
/// deformed hyperbolic charts, where `ρ'² ≈ C` grows without bound.
pub fn velocity_identity_residual(sig: &CkSignature, traj: &Trajectory) -> Result<f64> {
    let first = traj.samples.first().ok_or_else(|| Error::Domain("empty trajectory".into()))?;
    let z = sig.kappa1;
    let alpha = first_integral(sig, ChartKind::RhoChart, first.state[0], first.state[3]);
    Ok(traj
        .samples
        .iter()
        .map(|s| {
            let rho = s.state[0];
            let (c, t) = (ck_cos(rho, -z), ck_tan(rho, -z));
            (s.state[2].powi(2) - (c - sig.kappa2 * alpha * alpha / (t * t))).abs() / c.max(1.0)
        })
        .fold(0.0, f64::max))
}

/// `max |ρ² − (s + s₀)² − κ₂α²|` for a flat (`z = 0`) geodesic, with
/// `s₀ = ρρ'` at the start.
pub fn flat_residual(sig: &CkSignature, traj: &Trajectory) -> Result<f64> {
    if sig.kappa1 != 0.0 {
        return Err(Error::VariantUnavailable(format!("flat relation needs z = 0, got {}", sig.kappa1)));
    }
    let first = traj.samples.first().ok_or_else(|| Error::Domain("empty trajectory".into()))?;
    let alpha = first_integral(sig, ChartKind::RhoChart, first.state[0], first.state[3]);
    let s0 = first.state[0] * first.state[2];
    Ok(traj
        .samples
        .iter()
        .map(|s| (s.state[0].powi(2) - (s.t + s0).powi(2) - sig.kappa2 * alpha * alpha).abs())
        .fold(0.0, f64::max))
}
