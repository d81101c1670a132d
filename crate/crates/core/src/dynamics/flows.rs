use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use super::ode::{integrate, Control, FlowOptions, State};
use super::trajectory::{FlowStatus, Sample, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::{polar_chart, ChartKind, CkSignature};
use crate::hamiltonians::{HamiltonianKind, IntegralSet};
use crate::kappa_math::{ck_cos, ck_sin};
use crate::phase_space::CartesianState;

/// Distance from a singular line at which flows stop.
pub const STANDOFF: f64 = 1e-6;

/// Reason the state is inside the standoff region of `set`, if it is.
pub fn standoff(set: &IntegralSet, y: &State) -> Option<String> {
    let m = &set.model;
    if m.b1 != 0.0 && y[0].abs() < STANDOFF {
        return Some(format!("|q1| = {:e} with b1 = {}", y[0].abs(), m.b1));
    }
    if m.b2 != 0.0 && y[1].abs() < STANDOFF {
        return Some(format!("|q2| = {:e} with b2 = {}", y[1].abs(), m.b2));
    }
    if set.kind == HamiltonianKind::Ikc {
        let j = m.signature * y[0] * y[0] + y[1] * y[1];
        if j.abs() < STANDOFF * STANDOFF {
            return Some(format!("J- = {j:e} at the Kepler center"));
        }
    }
    None
}

fn invariants(set: &IntegralSet, x: &CartesianState) -> Result<Vec<f64>> {
    set.named().iter().map(|(_, o)| o.eval(x)).collect()
}

/// Hamilton's equations `q̇ = ∂h/∂p`, `ṗ = −∂h/∂q` for `set.h`, with the
/// integrals of `set` evaluated at every recorded sample.
///
/// Reaching the standoff region ends the run with
/// [`FlowStatus::SingularityApproach`] instead of an error.
pub fn hamilton_flow(set: &IntegralSet, x0: &CartesianState, t_end: f64, opts: &FlowOptions) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
    }
    crate::phase_space::ensure_finite(x0)?;
    if let Some(reason) = standoff(set, &x0.to_array()) {
        return Err(Error::SingularPoint(format!("initial state {x0:?}: {reason}")));
    }
    let names = set.named().iter().map(|(n, _)| n.to_string()).collect();
    let mut traj = Trajectory::new(&CartesianState::FIELDS, names, opts);
    traj.samples.push(Sample { t: 0.0, state: x0.to_array(), invariants: invariants(set, x0)? });

    let blocked = RefCell::new(None::<String>);
    let rhs = |_: f64, y: &State| {
        if let Some(reason) = standoff(set, y) {
            *blocked.borrow_mut() = Some(reason.clone());
            return Err(Error::SingularPoint(reason));
        }
        let g = set.h.grad(&CartesianState::from_array(*y))?;
        Ok([g[2], g[3], -g[0], -g[1]])
    };
    let mut status = FlowStatus::Completed;
    let q_size = |y: &State| y[0].abs().max(y[1].abs());
    let mut q_max = q_size(&x0.to_array());
    let observe = |t: f64, y: &State, recorded: bool| {
        q_max = q_max.max(q_size(y));
        if t == 0.0 {
            return Ok(Control::Continue);
        }
        let near = standoff(set, y);
        if recorded || near.is_some() {
            match invariants(set, &CartesianState::from_array(*y)) {
                Ok(inv) => traj.samples.push(Sample { t, state: *y, invariants: inv }),
                Err(Error::SingularPoint(reason)) => {
                    status = FlowStatus::SingularityApproach { t, reason };
                    return Ok(Control::Stop);
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(reason) = near {
            status = FlowStatus::SingularityApproach { t, reason };
            return Ok(Control::Stop);
        }
        Ok(Control::Continue)
    };
    match integrate(rhs, 0.0, x0.to_array(), t_end, opts, observe) {
        Ok(stats) => traj.stats = stats,
        Err(Error::StepFailure { t, reason }) => match blocked.into_inner() {
            Some(why) => status = FlowStatus::SingularityApproach { t, reason: format!("{reason}; {why}") },
            // free and Kepler-type motion can leave every bounded set in finite time
            None if q_max > 4.0 * q_size(&x0.to_array()).max(1.0) => {
                return Err(Error::StepFailure { t, reason: format!("{reason}; |q| grew to {q_max:.3e}, finite-time escape") })
            }
            None => return Err(Error::StepFailure { t, reason }),
        },
        Err(e) => return Err(e),
    }
    traj.status = status;
    Ok(traj)
}

/// Initial point and velocity of a geodesic in a polar chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicStart {
    pub radial: f64,
    pub theta: f64,
    pub v_radial: f64,
    pub v_theta: f64,
}

impl GeodesicStart {
    pub fn new(radial: f64, theta: f64, v_radial: f64, v_theta: f64) -> Self {
        Self { radial, theta, v_radial, v_theta }
    }
}

pub const GEODESIC_FIELDS: [&str; 4] = ["radial", "theta", "v_radial", "v_theta"];

/// Conserved angular quantity of the chart.
///
/// `RhoChart`: `α = −S²θ'/C` (sign kept as written in the first-integral
/// relation, so `α` flips with the orientation of the curve).
/// `RChart`: `S²θ'`.
pub fn first_integral(sig: &CkSignature, chart: ChartKind, radial: f64, v_theta: f64) -> f64 {
    let z = sig.kappa1;
    match chart {
        ChartKind::RhoChart => {
            let s = ck_sin(radial, -z);
            -s * s * v_theta / ck_cos(radial, -z)
        }
        ChartKind::RChart => {
            let s = ck_sin(radial, z);
            s * s * v_theta
        }
    }
}

/// Geodesics reach the edges of the charts in finite arclength: the origin
/// and light cone (`radial → 0`), the antipode of the sphere, and in the
/// `RhoChart` the places where the conformal factor `1/C` goes to infinity
/// (`z < 0`) or to zero (`z > 0`). Runs stop once an accepted step is within
/// `margin` of them; the right-hand side refuses a tenth of that, so that the
/// solver cannot stall against the wall before the stop triggers.
fn chart_standoff(sig: &CkSignature, chart: ChartKind, radial: f64, margin: f64) -> Option<String> {
    let z = sig.kappa1;
    let edge = match chart {
        ChartKind::RhoChart if z < 0.0 => ck_cos(radial, -z),
        ChartKind::RhoChart if z > 0.0 => 1.0 / ck_cos(radial, -z),
        ChartKind::RChart if z > 0.0 => ck_sin(radial, z),
        _ => f64::INFINITY,
    };
    (radial < margin || edge < margin).then(|| format!("radial = {radial} at the edge of the {chart:?}"))
}

fn geodesic_rhs(sig: &CkSignature, chart: ChartKind, y: &State) -> Result<State> {
    if let Some(reason) = chart_standoff(sig, chart, y[0], 0.1 * STANDOFF) {
        return Err(Error::ChartDomain(reason));
    }
    let m = polar_chart(sig, chart, y[0], y[1])?;
    let (vr, vt) = (y[2], y[3]);
    Ok([vr, vt, -m.gamma_r_rr * vr * vr - m.gamma_r_thth * vt * vt, -2.0 * m.gamma_th_thr * vr * vt])
}

/// Integrates the geodesic equations of the chart metric by arclength.
///
/// The start velocity is rescaled to unit length; it must have positive
/// squared norm. Invariants are the first integral and the squared speed.
/// Leaving the chart ends the run with [`FlowStatus::ChartExit`].
pub fn geodesic_flow(
    sig: &CkSignature,
    chart: ChartKind,
    start: &GeodesicStart,
    s_end: f64,
    opts: &FlowOptions,
) -> Result<Trajectory> {
    if !(s_end > 0.0) {
        return Err(Error::Config(format!("s_end must be positive, got {s_end}")));
    }
    let m = polar_chart(sig, chart, start.radial, start.theta)?;
    if let Some(reason) = chart_standoff(sig, chart, start.radial, STANDOFF) {
        return Err(Error::ChartDomain(reason));
    }
    let n2 = m.norm2(start.v_radial, start.v_theta);
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::ChartDomain(format!("start velocity has squared norm {n2}; need a positive one")));
    }
    let n = n2.sqrt();
    let y0 = [start.radial, start.theta, start.v_radial / n, start.v_theta / n];
    let inv = |y: &State| -> Result<Vec<f64>> {
        let m = polar_chart(sig, chart, y[0], y[1])?;
        Ok(vec![first_integral(sig, chart, y[0], y[3]), m.norm2(y[2], y[3])])
    };
    let mut traj = Trajectory::new(&GEODESIC_FIELDS, vec!["first_integral".into(), "speed2".into()], opts);
    traj.samples.push(Sample { t: 0.0, state: y0, invariants: inv(&y0)? });

    let exited = RefCell::new(None::<String>);
    let rhs = |_: f64, y: &State| {
        geodesic_rhs(sig, chart, y).inspect_err(|e| {
            if let Error::ChartDomain(reason) = e {
                *exited.borrow_mut() = Some(reason.clone());
            }
        })
    };
    let mut status = FlowStatus::Completed;
    let observe = |t: f64, y: &State, recorded: bool| {
        let edge = chart_standoff(sig, chart, y[0], STANDOFF);
        if (recorded || edge.is_some()) && t > 0.0 {
            match inv(y) {
                Ok(v) => traj.samples.push(Sample { t, state: *y, invariants: v }),
                Err(Error::ChartDomain(reason)) => {
                    status = FlowStatus::ChartExit { t, reason };
                    return Ok(Control::Stop);
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(reason) = edge {
            status = FlowStatus::ChartExit { t, reason };
            return Ok(Control::Stop);
        }
        Ok(Control::Continue)
    };
    match integrate(rhs, 0.0, y0, s_end, opts, observe) {
        Ok(stats) => traj.stats = stats,
        Err(Error::StepFailure { t, reason }) => match exited.into_inner() {
            Some(why) => status = FlowStatus::ChartExit { t, reason: format!("{reason}; {why}") },
            None => return Err(Error::StepFailure { t, reason }),
        },
        Err(e) => return Err(e),
    }
    traj.status = status;
    Ok(traj)
}
