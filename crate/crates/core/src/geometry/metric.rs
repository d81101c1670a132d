use serde::{Deserialize, Serialize};

use crate::coalgebra::DeformedModel;
use crate::kappa_math::sinhc;

/// Which kinetic term the metric is read from.
///
/// `NonConstant` belongs to `½J₊`, `Constant` to `½J₊e^{zJ₋}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricFamily {
    NonConstant,
    Constant,
}

/// Diagonal components `(g₁₁, g₂₂)` of `ds²` in Cartesian coordinates.
///
/// The line element carries the factor 2 coming from `H = ½ g^{ij} pᵢ pⱼ`
/// with `J₊ ~ p²`, so the flat limit is `2(dq₁² + dq₂²)`. A negative
/// signature flips the sign of `g₁₁`.
pub fn cartesian_metric(model: &DeformedModel, family: MetricFamily, q1: f64, q2: f64) -> [f64; 2] {
    let (z, k) = (model.z, model.signature);
    let (a1, a2) = (k * q1 * q1, q2 * q2);
    match family {
        MetricFamily::NonConstant => [
            2.0 * k * (-z * a2).exp() / sinhc(z * a1),
            2.0 * (z * a1).exp() / sinhc(z * a2),
        ],
        MetricFamily::Constant => [
            2.0 * k * (-z * a1 - 2.0 * z * a2).exp() / sinhc(z * a1),
            2.0 * (-z * a2).exp() / sinhc(z * a2),
        ],
    }
}

/// Gaussian curvature of [`cartesian_metric`].
pub fn gaussian_curvature(model: &DeformedModel, family: MetricFamily, q1: f64, q2: f64) -> f64 {
    match family {
        MetricFamily::NonConstant => {
            let j = model.signature * q1 * q1 + q2 * q2;
            -model.z * (model.z * j).sinh()
        }
        MetricFamily::Constant => model.z,
    }
}

/// The metric as a field `(u, v) ↦ (E, F, G)`, ready for [`brioschi_oracle`].
pub fn metric_field(model: DeformedModel, family: MetricFamily) -> impl Fn(f64, f64) -> [f64; 3] {
    move |u, v| {
        let [e, g] = cartesian_metric(&model, family, u, v);
        [e, 0.0, g]
    }
}

pub const BRIOSCHI_STEP: f64 = 1e-4;

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Gaussian curvature of a 2D metric `(E, F, G)` by the Brioschi formula,
/// all derivatives taken by central differences with step [`BRIOSCHI_STEP`].
pub fn brioschi_oracle<M: Fn(f64, f64) -> [f64; 3]>(metric: M, u: f64, v: f64) -> f64 {
    let h = BRIOSCHI_STEP;
    let at = |du: f64, dv: f64| metric(u + du * h, v + dv * h);
    let c = at(0.0, 0.0);
    let (up, um, vp, vm) = (at(1.0, 0.0), at(-1.0, 0.0), at(0.0, 1.0), at(0.0, -1.0));
    let d_u = |i: usize| (up[i] - um[i]) / (2.0 * h);
    let d_v = |i: usize| (vp[i] - vm[i]) / (2.0 * h);
    let (e, f, g) = (c[0], c[1], c[2]);
    let (eu, ev, fu, fv, gu, gv) = (d_u(0), d_v(0), d_u(1), d_v(1), d_u(2), d_v(2));
    let evv = (vp[0] - 2.0 * e + vm[0]) / (h * h);
    let guu = (up[2] - 2.0 * g + um[2]) / (h * h);
    let fuv = (at(1.0, 1.0)[1] - at(1.0, -1.0)[1] - at(-1.0, 1.0)[1] + at(-1.0, -1.0)[1]) / (4.0 * h * h);

    let a = [
        [-0.5 * evv + fuv - 0.5 * guu, 0.5 * eu, fu - 0.5 * ev],
        [fv - 0.5 * gu, e, f],
        [0.5 * gv, f, g],
    ];
    let b = [[0.0, 0.5 * ev, 0.5 * gu], [0.5 * ev, e, f], [0.5 * gu, f, g]];
    let w = e * g - f * f;
    (det3(a) - det3(b)) / (w * w)
}
