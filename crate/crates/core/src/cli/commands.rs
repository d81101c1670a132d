//! `verify`, `simulate`, `geodesic`, `curvature` and `decompose`.

use serde_json::{json, Value};

use super::checks::{
    batch_rng, curvature_samples, decomposition_checks, metric_family, verify_suite, Property, Tolerances,
};
use super::config::{GeodesicConfig, RunConfig, DEFAULT_STATE};
use super::{real, Outcome, Table};
use crate::dynamics::{
    closed_form_residual, drift_report, fit_closed_form, flat_residual, geodesic_flow, hamilton_flow,
    velocity_identity_residual, GeodesicStart, Trajectory,
};
use crate::error::{Error, Result};
use crate::geometry::{ChartKind, MetricFamily, SpaceTag};
use crate::hamiltonians::{build, SwCouplings};
use crate::phase_space::CartesianState;

fn tolerances(cfg: &RunConfig) -> Tolerances {
    let t = &cfg.thresholds;
    Tolerances { algebra: t.algebra, identity: t.identity, transform: t.transform }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn property_table(props: &[Property]) -> Table {
    let mut t = Table::new(&["property", "max_residual", "threshold", "points", "pass"]);
    for p in props {
        t.push(vec![p.name.clone(), real(p.max_residual), real(p.threshold), p.points.to_string(), p.pass.to_string()]);
    }
    t
}

fn trajectory_table(traj: &Trajectory) -> Table {
    let mut header = vec!["t"];
    header.extend(traj.state_fields.iter().map(String::as_str));
    header.extend(traj.invariant_names.iter().map(String::as_str));
    let mut t = Table::new(&header);
    for s in &traj.samples {
        let mut row = vec![real(s.t)];
        row.extend(s.state.iter().chain(&s.invariants).map(|&v| real(v)));
        t.push(row);
    }
    t
}

fn all_pass(props: &[Property]) -> bool {
    props.iter().all(|p| p.pass)
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let s = &cfg.sampling;
    let b_grid = match (cfg.model.b1, cfg.model.b2) {
        (None, None) => s.b_grid.clone(),
        (b1, b2) => vec![[b1.unwrap_or(1.0), b2.unwrap_or(1.0)]],
    };
    if s.z_grid.is_empty() || b_grid.is_empty() {
        return Err(Error::Config("sampling grids must not be empty".into()));
    }
    let z_grid = match cfg.fixed_z() {
        Some(z) => vec![z],
        None => s.z_grid.clone(),
    };
    let spaces: Vec<SpaceTag> = match cfg.space {
        Some(t) => vec![t],
        None if cfg.signature.is_some() || cfg.model.z.is_some() => Vec::new(),
        None => SpaceTag::ALL.to_vec(),
    };
    let space_b = [cfg.model.b1.unwrap_or(1.0), cfg.model.b2.unwrap_or(1.0)];
    let props = verify_suite(&z_grid, &b_grid, &spaces, space_b, s.n_points, s.seed, tolerances(cfg))?;
    let results = json!({
        "z_grid": z_grid,
        "b_grid": b_grid,
        "spaces": spaces,
        "properties": to_json(&props),
    });
    Ok(Outcome { pass: all_pass(&props), table: property_table(&props), results })
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome> {
    let model = cfg.model()?;
    let spec = cfg.hamiltonian_spec()?;
    let set = build(&model, &spec)?;
    let x0 = CartesianState::from_array(cfg.initial_state.unwrap_or(DEFAULT_STATE));
    let traj = hamilton_flow(&set, &x0, cfg.integrator.t_end, &cfg.flow_options()?)?;
    let drift = drift_report(&traj)?;
    let limit = cfg.thresholds.drift;
    let pass = traj.status.is_completed() && drift.values().all(|d| d.rel < limit);
    let results = json!({
        "model": to_json(&model),
        "hamiltonian": spec.kind.as_str(),
        "status": to_json(&traj.status),
        "drift_threshold": limit,
        "drift": to_json(&drift),
        "stats": to_json(&traj.stats),
        "trajectory": to_json(&traj),
    });
    Ok(Outcome { table: trajectory_table(&traj), results, pass })
}

pub fn geodesic(cfg: &RunConfig) -> Result<Outcome> {
    let sig = cfg.signature_or(SpaceTag::S2)?;
    let chart = cfg.geodesic.chart.or(sig.tag.map(SpaceTag::natural_chart)).unwrap_or(ChartKind::RhoChart);
    let [r, th, vr, vt] = cfg.geodesic.start.unwrap_or(GeodesicConfig::default_start(sig.kappa2));
    let traj = geodesic_flow(&sig, chart, &GeodesicStart::new(r, th, vr, vt), cfg.geodesic.s_end, &cfg.flow_options()?)?;
    let t = &cfg.thresholds;
    let drift = drift_report(&traj)?;
    // speed² is reported but not checked: near a chart edge g(v,v) is a
    // difference of diverging terms
    let mut fi = Property::new("first_integral_drift", t.first_integral);
    fi.record(drift["first_integral"].abs);
    let mut props = vec![fi];
    let note = match fit_closed_form(&sig, chart, &traj.samples[0].state) {
        Ok(cf) => {
            let mut p = Property::new("curve_equation", t.geodesic);
            p.record(closed_form_residual(&sig, chart, &traj, &cf));
            props.push(p);
            to_json(&cf)
        }
        Err(Error::VariantUnavailable(m)) => json!({ "unavailable": m }),
        Err(e) => return Err(e),
    };
    if chart == ChartKind::RhoChart {
        let mut p = Property::new("velocity_identity", t.geodesic);
        p.record(velocity_identity_residual(&sig, &traj)?);
        props.push(p);
    }
    if sig.kappa1 == 0.0 && chart == ChartKind::RhoChart {
        let mut p = Property::new("flat_hyperbola", t.geodesic);
        p.record(flat_residual(&sig, &traj)?);
        props.push(p);
    }
    let results = json!({
        "signature": to_json(&sig),
        "chart": to_json(&chart),
        "status": to_json(&traj.status),
        "closed_form": note,
        "drift": to_json(&drift),
        "properties": to_json(&props),
        "trajectory": to_json(&traj),
    });
    Ok(Outcome { pass: all_pass(&props), table: trajectory_table(&traj), results })
}

pub fn curvature(cfg: &RunConfig) -> Result<Outcome> {
    let sig = cfg.signature_or(SpaceTag::S2z)?;
    let family = metric_family(sig.tag);
    let mut rng = batch_rng(cfg.sampling.seed, 0);
    let samples = curvature_samples(&sig, family, cfg.sampling.n_points, &mut rng);
    let mut oracle = Property::new("closed_form_vs_oracle", cfg.thresholds.curvature);
    let mut constant = Property::new("constant_value", cfg.thresholds.curvature);
    let mut t = Table::new(&["q1", "q2", "closed_form", "oracle"]);
    for s in &samples {
        oracle.record(s.closed_form - s.oracle);
        if family == MetricFamily::Constant {
            constant.record(s.closed_form - sig.kappa1);
        }
        t.push(vec![real(s.q1), real(s.q2), real(s.closed_form), real(s.oracle)]);
    }
    let props: Vec<_> = [oracle, constant].into_iter().filter(|p| p.points > 0).collect();
    let results = json!({
        "signature": to_json(&sig),
        "family": format!("{family:?}"),
        "properties": to_json(&props),
        "samples": to_json(&samples),
    });
    Ok(Outcome { pass: all_pass(&props), table: t, results })
}

pub fn decompose(cfg: &RunConfig) -> Result<Outcome> {
    let sig = cfg.signature_or(SpaceTag::S2)?;
    if let Some(tag) = sig.tag {
        if !SpaceTag::CONSTANT.contains(&tag) {
            return Err(Error::Config(format!("decompose needs a constant curvature space, got {tag}")));
        }
    }
    let beta = SwCouplings::from_barriers(cfg.model.b1.unwrap_or(1.0), cfg.model.b2.unwrap_or(1.0));
    let beta0 = cfg.hamiltonian.beta0;
    let mut rng = batch_rng(cfg.sampling.seed, 0);
    let (props, rows) = decomposition_checks(&sig, beta0, beta, cfg.sampling.n_points, &mut rng, tolerances(cfg))?;
    let mut t = Table::new(&["r", "theta", "central", "barrier_x", "barrier_y", "total", "centered_total"]);
    for d in &rows {
        t.push(vec![
            real(d.r),
            real(d.theta),
            real(d.central),
            real(d.barrier_x),
            real(d.barrier_y),
            real(d.total),
            d.centered_total.map(real).unwrap_or_default(),
        ]);
    }
    let results = json!({
        "signature": to_json(&sig),
        "beta0": beta0,
        "beta": to_json(&beta),
        "properties": to_json(&props),
        "samples": to_json(&rows),
    });
    Ok(Outcome { pass: all_pass(&props), table: t, results })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> RunConfig {
        let c = RunConfig::from_json(json).unwrap();
        c.validate().unwrap();
        c
    }

    #[test]
    fn default_simulation_conserves_integrals() {
        let out = simulate(&cfg(r#"{"integrator": {"t_end": 5}}"#)).unwrap();
        assert!(out.pass, "{}", out.results["drift"]);
        assert_eq!(out.table.header, ["t", "q1", "q2", "p1", "p2", "h", "c_z", "i_z"]);
    }

    #[test]
    fn default_geodesic_passes() {
        let out = geodesic(&RunConfig::default()).unwrap();
        assert!(out.pass, "{}", out.results["properties"]);
    }

    #[test]
    fn deformed_geodesic_and_flat_limit() {
        for space in ["S2z", "H2z", "E2"] {
            let out = geodesic(&cfg(&format!(r#"{{"space": "{space}", "geodesic": {{"s_end": 3}}}}"#))).unwrap();
            assert!(out.pass, "{space} {}", out.results["properties"]);
        }
    }

    #[test]
    fn curvature_and_decomposition() {
        let c = cfg(r#"{"sampling": {"n_points": 50}}"#);
        assert!(curvature(&c).unwrap().pass);
        assert!(decompose(&c).unwrap().pass);
        let deformed = cfg(r#"{"space": "H2z"}"#);
        assert!(matches!(decompose(&deformed), Err(Error::Config(_))));
    }

    #[test]
    fn verify_small() {
        let out = verify(&cfg(r#"{"sampling": {"n_points": 30, "z_grid": [0.5]}}"#)).unwrap();
        assert!(out.pass);
        assert_eq!(out.table.header[0], "property");
    }
}
