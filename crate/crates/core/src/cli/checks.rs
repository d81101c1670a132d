//! Property checks behind `verify`, `curvature` and `decompose`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coalgebra::{
    algebra_residuals, casimir_observable, coproduct_join, one_site_generators, two_site_generators, DeformedModel, Site,
};
use crate::error::{Error, Result};
use crate::geometry::{
    ambient_embed, brioschi_oracle, cartesian_to_polar, gaussian_curvature, metric_field, ChartKind, CkSignature,
    MetricFamily, SpaceTag,
};
use crate::hamiltonians::{
    build, cz_polar, extra_integral, iz_polar, polar_form, rescaled_extra_integral, sw_decompose, CustomTerms,
    HamiltonianKind, HamiltonianSpec, SwCouplings,
};
use crate::kappa_math::{ck_cos, ck_sin, ck_tan, sinhc};
use crate::phase_space::{bracket, sample_state, CartesianState};

/// Largest residual of one property over a batch of points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Property {
    pub name: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub points: usize,
    pub pass: bool,
}

impl Property {
    pub fn new(name: &str, threshold: f64) -> Self {
        Self { name: name.to_string(), max_residual: 0.0, threshold, points: 0, pass: true }
    }

    /// Records one residual; NaN counts as a failure.
    pub fn record(&mut self, residual: f64) {
        let r = if residual.is_nan() { f64::INFINITY } else { residual.abs() };
        self.max_residual = self.max_residual.max(r);
        self.points += 1;
        self.pass = self.max_residual < self.threshold;
    }

    pub fn merge(&mut self, other: &Property) {
        self.max_residual = self.max_residual.max(other.max_residual);
        self.points += other.points;
        self.pass = self.max_residual < self.threshold;
    }
}

/// Properties with the same name merged, in order of first appearance.
pub fn merge_all(batches: impl IntoIterator<Item = Vec<Property>>) -> Vec<Property> {
    let mut out: Vec<Property> = Vec::new();
    for batch in batches {
        for p in batch {
            match out.iter_mut().find(|q| q.name == p.name) {
                Some(q) => q.merge(&p),
                None => out.push(p),
            }
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// Random generator for batch `stream` of a run seeded with `seed`, so that
/// results do not depend on how batches are scheduled.
pub fn batch_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Central differences with step 1e-6 agree with exact gradients to about 2e-7.
pub const GRADIENT_FD_TOL: f64 = 1e-5;

/// Hamiltonians exercised by the involution checks.
pub fn catalog(beta0: f64, gamma: f64) -> Vec<HamiltonianSpec> {
    let mut v: Vec<_> = HamiltonianKind::CATALOG
        .into_iter()
        .map(|k| HamiltonianSpec::of_kind(k, beta0, gamma).expect("catalog kinds need no custom terms"))
        .collect();
    v.push(HamiltonianSpec::custom(CustomTerms::named("exp-minus", beta0, gamma).expect("registry name")));
    v
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub algebra: f64,
    pub identity: f64,
    pub transform: f64,
}

/// Bracket relations, Casimir, coproduct and integral checks of one model.
pub fn model_properties(model: &DeformedModel, n_points: usize, rng: &mut ChaCha8Rng, tol: Tolerances) -> Result<Vec<Property>> {
    let z = model.z;
    let mut brackets = Property::new("algebra_brackets", tol.algebra);
    let mut casimir = Property::new("casimir_centrality", tol.algebra);
    let mut coproduct = Property::new("coproduct_homomorphism", tol.identity);
    let mut gradients = Property::new("gradient_selfcheck", GRADIENT_FD_TOL);
    let mut involution = Property::new("involution_h_cz", tol.algebra);
    let mut superint = Property::new("superintegrability_h_iz", tol.algebra);
    let mut scaling = Property::new("ssw_equals_isw_times_exp", tol.identity);
    let mut angular = Property::new("casimir_angular_momentum_form", tol.identity);

    let joined = coproduct_join(
        &one_site_generators(z, model.b1, Site::First, model.signature),
        &one_site_generators(z, model.b2, Site::Second, 1.0),
        z,
    );
    let explicit = two_site_generators(model);
    let c = casimir_observable(model);
    let sets: Vec<_> = catalog(0.7, 1.1).iter().map(|s| build(model, s)).collect::<Result<_>>()?;
    let isw = build(model, &HamiltonianSpec::isw(0.7))?.h;
    let ssw = build(model, &HamiltonianSpec::ssw(0.7))?.h;

    for _ in 0..n_points {
        let x = sample_state(rng);
        let r = algebra_residuals(model, &x)?;
        brackets.record(r.max_bracket());
        casimir.record(r.r4);
        gradients.record(r.r5);
        for (a, b) in joined.iter().zip(explicit.iter()) {
            coproduct.record(rel(a.eval(&x)?, b.eval(&x)?));
        }
        for set in &sets {
            involution.record(bracket(&set.h, &set.c_z, &x)?);
            if let Some(i) = &set.i_z {
                superint.record(bracket(&set.h, i, &x)?);
            }
        }
        let j = model.signature * x.q1 * x.q1 + x.q2 * x.q2;
        scaling.record(rel(ssw.eval(&x)?, isw.eval(&x)? * (z * j).exp()));
        if model.b1 == 0.0 && model.b2 == 0.0 {
            angular.record(rel(c.eval(&x)?, angular_momentum_form(model, &x)));
        }
    }
    let mut out = vec![brackets, casimir, coproduct, gradients, involution, superint, scaling];
    if angular.points > 0 {
        out.push(angular);
    }
    Ok(out)
}

/// Without barriers the Casimir is a deformed angular momentum squared:
/// `κ₂ sinhc(za₁) sinhc(za₂) e^{z(a₂−a₁)} (q₁p₂ − κ₂q₂p₁)²`, `a₁ = κ₂q₁²`, `a₂ = q₂²`.
pub fn angular_momentum_form(model: &DeformedModel, x: &CartesianState) -> f64 {
    let (z, k) = (model.z, model.signature);
    let (a1, a2) = (k * x.q1 * x.q1, x.q2 * x.q2);
    let l = x.q1 * x.p2 - k * x.q2 * x.p1;
    k * sinhc(z * a1) * sinhc(z * a2) * (z * (a2 - a1)).exp() * l * l
}

/// A Cartesian state inside the polar chart of a space with signature `k2`.
pub fn chart_state(rng: &mut ChaCha8Rng, k2: f64) -> CartesianState {
    let mut x = sample_state(rng);
    if k2 < 0.0 {
        x.q2 = x.q1.abs() * rng.gen_range(1.3..2.5);
    }
    x
}

/// Cartesian vs polar evaluation of the Hamiltonians and integrals on one space.
pub fn space_properties(tag: SpaceTag, b: [f64; 2], n_points: usize, rng: &mut ChaCha8Rng, tol: Tolerances) -> Result<Vec<Property>> {
    let sig = tag.signature();
    let model = sig.model(b[0], b[1]);
    let chart = tag.natural_chart();
    let mut two_path = Property::new("two_path_hamiltonian", tol.algebra);
    let mut cz = Property::new("cz_rescale", tol.algebra);
    let mut iz = Property::new("iz_rescale", tol.transform);
    let specs: Vec<_> = catalog(0.7, 1.1)
        .into_iter()
        .filter(|s| chart == ChartKind::RhoChart || s.kind.is_constant_curvature())
        .collect();
    let hs: Vec<_> = specs.iter().map(|s| build(&model, s).map(|set| set.h)).collect::<Result<_>>()?;
    let c = casimir_observable(&model);
    let extra = extra_integral(&model, 0.7);
    let beta = SwCouplings::from_barriers(model.b1, model.b2);
    let mut done = 0;
    while done < n_points {
        let x = chart_state(rng, sig.kappa2);
        let ps = match cartesian_to_polar(&model, chart, &x) {
            Ok(ps) => ps,
            Err(Error::ChartDomain(_)) => continue,
            Err(e) => return Err(e),
        };
        done += 1;
        for (spec, h) in specs.iter().zip(&hs) {
            two_path.record(rel(polar_form(&model, spec, chart, &ps)?, 2.0 * h.eval(&x)?));
        }
        cz.record(rel(cz_polar(&sig, ps.theta, ps.p_theta, model.b1, model.b2)?, 4.0 * sig.kappa2 * c.eval(&x)?));
        if chart == ChartKind::RChart {
            let polar = iz_polar(&sig, &ps, 0.7, beta.beta2)?;
            iz.record(rel(rescaled_extra_integral(&model, extra.eval(&x)?), polar));
        }
    }
    let mut out = vec![two_path, cz];
    if iz.points > 0 {
        out.push(iz);
    }
    Ok(out)
}

/// The full `verify` suite: every `(z, b)` grid cell plus every listed space.
pub fn verify_suite(
    z_grid: &[f64],
    b_grid: &[[f64; 2]],
    spaces: &[SpaceTag],
    space_b: [f64; 2],
    n_points: usize,
    seed: u64,
    tol: Tolerances,
) -> Result<Vec<Property>> {
    let cells: Vec<(f64, [f64; 2])> = z_grid.iter().flat_map(|&z| b_grid.iter().map(move |&b| (z, b))).collect();
    let grid: Vec<Vec<Property>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, &(z, b))| model_properties(&DeformedModel::new(z, b[0], b[1]), n_points, &mut batch_rng(seed, i as u64), tol))
        .collect::<Result<_>>()?;
    let per_space = n_points.min(200);
    let spaces: Vec<Vec<Property>> = spaces
        .par_iter()
        .enumerate()
        .map(|(i, &tag)| space_properties(tag, space_b, per_space, &mut batch_rng(seed, (cells.len() + i) as u64), tol))
        .collect::<Result<_>>()?;
    Ok(merge_all(grid.into_iter().chain(spaces)))
}

/// One row of the curvature comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub q1: f64,
    pub q2: f64,
    pub closed_form: f64,
    pub oracle: f64,
}

pub fn metric_family(tag: Option<SpaceTag>) -> MetricFamily {
    match tag {
        Some(SpaceTag::S2 | SpaceTag::AdS | SpaceTag::H2 | SpaceTag::DS) => MetricFamily::Constant,
        _ => MetricFamily::NonConstant,
    }
}

/// Closed-form Gaussian curvature against the Brioschi oracle at random points.
pub fn curvature_samples(sig: &CkSignature, family: MetricFamily, n_points: usize, rng: &mut ChaCha8Rng) -> Vec<CurvatureSample> {
    let model = sig.model(0.0, 0.0);
    let metric = metric_field(model, family);
    (0..n_points)
        .map(|_| {
            let mut coord = || rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let (q1, q2) = (coord(), coord());
            CurvatureSample { q1, q2, closed_form: gaussian_curvature(&model, family, q1, q2), oracle: brioschi_oracle(&metric, q1, q2) }
        })
        .collect()
}

/// One row of the decomposition report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionSample {
    pub r: f64,
    pub theta: f64,
    pub central: f64,
    pub barrier_x: f64,
    pub barrier_y: f64,
    pub total: f64,
    pub centered_total: Option<f64>,
}

/// Decomposition identities of the SW potential at random chart points.
pub fn decomposition_checks(
    sig: &CkSignature,
    beta0: f64,
    beta: SwCouplings,
    n_points: usize,
    rng: &mut ChaCha8Rng,
    tol: Tolerances,
) -> Result<(Vec<Property>, Vec<DecompositionSample>)> {
    let (k1, k2) = (sig.kappa1, sig.kappa2);
    let mut potential = Property::new("decomposition_equals_potential", tol.identity);
    let mut centered = Property::new("centered_equals_total", tol.identity);
    let mut center_1 = Property::new("center_1_distance", tol.identity);
    let mut center_2 = Property::new("center_2_distance", tol.identity);
    let mut rows = Vec::new();
    let mut attempts = 0;
    while rows.len() < n_points {
        attempts += 1;
        if attempts > 100 * n_points {
            return Err(Error::ChartDomain("could not find chart points for the decomposition".into()));
        }
        let (r, theta) = (rng.gen_range(0.05..1.4), rng.gen_range(0.05..1.4));
        let d = match sw_decompose(sig, r, theta, beta0, beta.beta1, beta.beta2) {
            Ok(d) => d,
            Err(Error::ChartDomain(_)) => continue,
            Err(e) => return Err(e),
        };
        let e = ambient_embed(sig, r, theta)?;
        let (st, ct) = (ck_sin(theta, k2), ck_cos(theta, k2));
        let s = ck_sin(r, k1);
        let fl = beta0 * ck_tan(r, k1).powi(2) + (beta.beta1 / (ct * ct) + beta.beta2 / (k2 * st * st)) / (s * s);
        potential.record(rel(d.total(), fl));
        let ct_total = d.centered_total().ok();
        if let Some(v) = ct_total {
            centered.record(rel(v, d.total()));
        }
        // cos(√κ r₁) = √κ x₁ and cos(√m r₂) = √m x₂
        if let Some(r1) = e.r1 {
            center_1.record((r1 * k1.sqrt()).cos() - k1.sqrt() * e.point.x1);
        }
        if let Some(r2) = e.r2 {
            let m = (k1 * k2).sqrt();
            center_2.record((r2 * m).cos() - m * e.point.x2);
        }
        rows.push(DecompositionSample {
            r,
            theta,
            central: d.central,
            barrier_x: d.barrier_x,
            barrier_y: d.barrier_y,
            total: d.total(),
            centered_total: ct_total,
        });
    }
    let props = [potential, centered, center_1, center_2].into_iter().filter(|p| p.points > 0).collect();
    Ok((props, rows))
}
