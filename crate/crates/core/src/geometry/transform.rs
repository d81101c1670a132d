//! Cartesian phase space ↔ polar phase space.
//!
//! Positions follow `cosh(λ₁ρ) = e^{zJ₋}` and
//! `sin²(λ₂θ) = (e^{2zκ₂q₁²} − 1)/(e^{2zJ₋} − 1)`; the `RChart` radius is then
//! `r = ∫₀^ρ dx / cosh(λ₁x)`. Momenta come from the linear relations
//!
//! ```text
//! κ₂ p₁/q₁ = A p_rad + B₁ p_θ        p₂/q₂ = A p_rad + B₂ p_θ
//! ```
//!
//! whose coefficients depend on the chart. The polar momenta produced this
//! way are twice the cotangent-lift momenta: `{rad, p_rad} = {θ, p_θ} = 2`,
//! with all cross brackets zero. Polar Hamiltonians written in these momenta
//! generate the same motion as the Cartesian ones once time is read with the
//! matching factor, which is what every polar formula in this crate assumes.
//!
//! The angle quadrant is taken from the signs of `q₁` (sine) and `q₂` (cosine).
//! Lorentzian charts only cover the time-like wedge `q₂ > 0`, `J₋ > 0`.

use serde::{Deserialize, Serialize};

use super::charts::check_radial;
use super::signature::ChartKind;
use crate::coalgebra::DeformedModel;
use crate::error::{Error, Result};
use crate::kappa_math::{
    ck_arcsin, ck_sin, ck_tan, expm1_ratio, gudermann_r, gudermann_rho, ln1p_ratio,
};
use crate::phase_space::CartesianState;

/// Polar position and momenta; `radial` is `ρ` or `r` depending on the chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    pub radial: f64,
    pub theta: f64,
    pub p_radial: f64,
    pub p_theta: f64,
}

impl PolarState {
    pub fn new(radial: f64, theta: f64, p_radial: f64, p_theta: f64) -> Self {
        Self { radial, theta, p_radial, p_theta }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.radial, self.theta, self.p_radial, self.p_theta]
    }
}

/// Coefficients `(A, B₁, B₂)` of the momentum relations.
fn momentum_coefficients(z: f64, k: f64, chart: ChartKind, radial: f64, theta: f64) -> (f64, f64, f64) {
    let t = ck_tan(theta, k);
    match chart {
        ChartKind::RhoChart => {
            let (s, tr) = (ck_sin(radial, -z), ck_tan(radial, -z));
            (1.0 / tr, 1.0 / (k * s * s * t), -t / (tr * tr))
        }
        ChartKind::RChart => {
            let (s, tr) = (ck_sin(radial, z), ck_tan(radial, z));
            (1.0 / tr, 1.0 / (k * tr * tr * t), -t / (s * s))
        }
    }
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn cartesian_to_polar(model: &DeformedModel, chart: ChartKind, x: &CartesianState) -> Result<PolarState> {
    let (z, k) = (model.z, model.signature);
    let CartesianState { q1, q2, p1, p2 } = *x;
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite state {x:?}")));
    }
    if q1 == 0.0 || q2 == 0.0 {
        return Err(Error::SingularPoint(format!("polar chart degenerates on the axes, state {x:?}")));
    }
    let a1 = k * q1 * q1;
    let j = a1 + q2 * q2;
    if !(j > 0.0) {
        return Err(Error::ChartDomain(format!("state {x:?} is not time-like (J- = {j})")));
    }
    if k < 0.0 && q2 < 0.0 {
        return Err(Error::ChartDomain(format!("state {x:?} lies outside the future time-like wedge")));
    }

    let half = (0.5 * j * expm1_ratio(z * j)).sqrt();
    let rho = 2.0 * ck_arcsin(half, -z)?;

    let denom = j * expm1_ratio(2.0 * z * j);
    let sin2 = q1 * q1 * expm1_ratio(2.0 * z * a1) / denom;
    let cos2 = (2.0 * z * a1).exp() * q2 * q2 * expm1_ratio(2.0 * z * q2 * q2) / denom;
    let theta = if k > 0.0 {
        (sign(q1) * sin2.sqrt()).atan2(sign(q2) * cos2.sqrt())
    } else {
        (sign(q1) * (sin2 / cos2).sqrt()).atanh()
    };

    let radial = match chart {
        ChartKind::RhoChart => rho,
        ChartKind::RChart => gudermann_r(z, rho)?,
    };
    check_radial(&model.ck_signature(), chart, radial)?;

    let (a, b1, b2) = momentum_coefficients(z, k, chart, radial, theta);
    let l1 = k * p1 / q1;
    let l2 = p2 / q2;
    let p_theta = (l1 - l2) / (b1 - b2);
    let p_radial = (l2 - b2 * p_theta) / a;
    Ok(PolarState { radial, theta, p_radial, p_theta })
}

pub fn polar_to_cartesian(model: &DeformedModel, chart: ChartKind, s: &PolarState) -> Result<CartesianState> {
    let (z, k) = (model.z, model.signature);
    check_radial(&model.ck_signature(), chart, s.radial)?;
    let rho = match chart {
        ChartKind::RhoChart => s.radial,
        ChartKind::RChart => gudermann_rho(z, s.radial)?,
    };
    let sh = ck_sin(0.5 * rho, -z);
    let j = 2.0 * sh * sh * ln1p_ratio(2.0 * z * sh * sh);

    let st = ck_sin(s.theta, k);
    let ct = crate::kappa_math::ck_cos(s.theta, k);
    let w = st * st * j * expm1_ratio(2.0 * z * j);
    let q1_sq = w * ln1p_ratio(2.0 * z * k * w);
    let q2_sq = j - k * q1_sq;
    if !(q1_sq > 0.0) || !(q2_sq > 0.0) {
        return Err(Error::SingularPoint(format!("polar state {s:?} maps onto an axis")));
    }
    let q1 = sign(st) * q1_sq.sqrt();
    let q2 = sign(ct) * q2_sq.sqrt();

    let (a, b1, b2) = momentum_coefficients(z, k, chart, s.radial, s.theta);
    let p1 = k * q1 * (a * s.p_radial + b1 * s.p_theta);
    let p2 = q2 * (a * s.p_radial + b2 * s.p_theta);
    Ok(CartesianState { q1, q2, p1, p2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cartesian_metric, polar_chart, MetricFamily, SpaceTag};
    use crate::phase_space::{bracket_of_gradients, sample_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Sample a state inside the chart of `model`, away from the light cone
    /// (Lorentzian needs `q₂ > |q₁|`) where finite differences lose accuracy.
    fn legal_state(rng: &mut ChaCha8Rng, model: &DeformedModel, chart: ChartKind) -> CartesianState {
        loop {
            let mut x = sample_state(rng);
            if model.signature < 0.0 {
                x.q2 = x.q2.abs();
                if x.q1.abs() > 0.8 * x.q2 {
                    continue;
                }
            }
            if cartesian_to_polar(model, chart, &x).is_ok() {
                return x;
            }
        }
    }

    fn models() -> Vec<(DeformedModel, ChartKind)> {
        SpaceTag::ALL
            .iter()
            .map(|t| (t.signature().model(0.0, 0.0), t.natural_chart()))
            .chain([(DeformedModel::new(0.5, 0.0, 0.0), ChartKind::RChart)])
            .chain([(DeformedModel::new(-0.3, 0.0, 0.0).with_signature(-1.0), ChartKind::RChart)])
            .collect()
    }

    #[test]
    fn roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (model, chart) in models() {
            for _ in 0..200 {
                let x = legal_state(&mut rng, &model, chart);
                let p = cartesian_to_polar(&model, chart, &x).unwrap();
                let y = polar_to_cartesian(&model, chart, &p).unwrap();
                for (a, b) in x.to_array().iter().zip(y.to_array()) {
                    assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()), "{model:?} {chart:?} {x:?} -> {y:?}");
                }
            }
        }
    }

    #[test]
    fn flat_limit_is_scaled_polar() {
        let m = DeformedModel::new(0.0, 0.0, 0.0);
        let x = CartesianState::new(0.6, 0.8, 0.0, 0.0);
        let p = cartesian_to_polar(&m, ChartKind::RhoChart, &x).unwrap();
        assert!((p.radial - 2f64.sqrt()).abs() < 1e-15);
        assert!((p.theta - 0.6f64.atan2(0.8)).abs() < 1e-15);
        let tiny = DeformedModel::new(1e-9, 0.0, 0.0);
        let q = cartesian_to_polar(&tiny, ChartKind::RhoChart, &x).unwrap();
        assert!((q.radial - p.radial).abs() < 1e-8 && (q.theta - p.theta).abs() < 1e-8);
    }

    #[test]
    fn angle_boundary_and_axes() {
        let m = DeformedModel::new(0.4, 0.0, 0.0);
        let p = cartesian_to_polar(&m, ChartKind::RhoChart, &CartesianState::new(1e-9, 0.7, 0.0, 0.0)).unwrap();
        assert!(p.theta.abs() < 1e-8);
        let on_axis = CartesianState::new(0.0, 0.7, 0.0, 0.0);
        assert!(matches!(cartesian_to_polar(&m, ChartKind::RhoChart, &on_axis), Err(Error::SingularPoint(_))));
        let lor = m.with_signature(-1.0);
        let space_like = CartesianState::new(0.9, 0.5, 0.0, 0.0);
        assert!(matches!(cartesian_to_polar(&lor, ChartKind::RhoChart, &space_like), Err(Error::ChartDomain(_))));
        let past = CartesianState::new(0.1, -0.5, 0.0, 0.0);
        assert!(matches!(cartesian_to_polar(&lor, ChartKind::RhoChart, &past), Err(Error::ChartDomain(_))));
    }

    #[test]
    fn quadrants_follow_coordinate_signs() {
        let m = DeformedModel::new(0.3, 0.0, 0.0);
        for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let x = CartesianState::new(0.5 * s1, 0.9 * s2, 0.0, 0.0);
            let t = cartesian_to_polar(&m, ChartKind::RhoChart, &x).unwrap().theta;
            assert_eq!(t.sin().signum(), s1);
            assert_eq!(t.cos().signum(), s2);
        }
    }

    fn jacobian(model: &DeformedModel, chart: ChartKind, x: &CartesianState) -> [[f64; 4]; 4] {
        let h = 1e-5;
        let mut jac = [[0.0; 4]; 4];
        for j in 0..4 {
            let (mut a, mut b) = (x.to_array(), x.to_array());
            a[j] += h;
            b[j] -= h;
            let fa = cartesian_to_polar(model, chart, &CartesianState::from_array(a)).unwrap().to_array();
            let fb = cartesian_to_polar(model, chart, &CartesianState::from_array(b)).unwrap().to_array();
            for i in 0..4 {
                jac[i][j] = (fa[i] - fb[i]) / (2.0 * h);
            }
        }
        jac
    }

    #[test]
    fn transform_is_canonical_with_valence_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (model, chart) in models() {
            for _ in 0..20 {
                let x = legal_state(&mut rng, &model, chart);
                let jac = jacobian(&model, chart, &x);
                let expected = |i: usize, j: usize| match (i, j) {
                    (0, 2) | (1, 3) => 2.0,
                    (2, 0) | (3, 1) => -2.0,
                    _ => 0.0,
                };
                for i in 0..4 {
                    for j in 0..4 {
                        let b = bracket_of_gradients(&jac[i], &jac[j]);
                        let scale = 1.0 + jac[i].iter().chain(&jac[j]).fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
                        assert!(
                            (b - expected(i, j)).abs() < 1e-6 * scale,
                            "{model:?} {chart:?} {x:?}: {{{i},{j}}} = {b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn metric_pulls_back_to_the_rho_chart() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for tag in SpaceTag::DEFORMED {
            let model = tag.signature().model(0.0, 0.0);
            for _ in 0..100 {
                let x = legal_state(&mut rng, &model, ChartKind::RhoChart);
                let v = [rand::Rng::gen_range(&mut rng, -1.0..1.0), rand::Rng::gen_range(&mut rng, -1.0..1.0)];
                let [g11, g22] = cartesian_metric(&model, MetricFamily::NonConstant, x.q1, x.q2);
                let cart = g11 * v[0] * v[0] + g22 * v[1] * v[1];
                let jac = jacobian(&model, ChartKind::RhoChart, &x);
                let dr = jac[0][0] * v[0] + jac[0][1] * v[1];
                let dt = jac[1][0] * v[0] + jac[1][1] * v[1];
                let p = cartesian_to_polar(&model, ChartKind::RhoChart, &x).unwrap();
                let m = polar_chart(&tag.signature(), ChartKind::RhoChart, p.radial, p.theta).unwrap();
                let polar = m.norm2(dr, dt);
                assert!((cart - polar).abs() < 1e-6 * (cart.abs() + polar.abs()).max(1e-3), "{tag}: {cart} vs {polar} at {x:?}");
            }
        }
    }
}
