//! Geodesics on a few spaces, compared with their closed forms.

use sl2z::dynamics::{
    closed_form_residual, drift_report, fit_closed_form, flat_residual, geodesic_flow, FlowOptions, GeodesicStart,
};
use sl2z::cli::config::GeodesicConfig;
use sl2z::geometry::{ChartKind, SpaceTag};

fn main() -> sl2z::Result<()> {
    let opts = FlowOptions { atol: 1e-16, ..FlowOptions::default() }.sampled(0.1);
    for tag in [SpaceTag::S2, SpaceTag::H2, SpaceTag::AdS, SpaceTag::DS] {
        let sig = tag.signature();
        let [r, th, vr, vt] = GeodesicConfig::default_start(sig.kappa2);
        let start = GeodesicStart::new(r, th, vr, vt);
        // timelike AdS geodesics refocus at r = π, the edge of the chart
        let traj = geodesic_flow(&sig, ChartKind::RChart, &start, 3.0, &opts)?;
        let cf = fit_closed_form(&sig, ChartKind::RChart, &traj.samples[0].state)?;
        println!(
            "{tag:>4}: alpha {:+.6}, theta0 {:+.6}, curve residual {:.2e}, {:?}",
            cf.alpha,
            cf.theta0,
            closed_form_residual(&sig, ChartKind::RChart, &traj, &cf),
            traj.status
        );
    }
    // the deformed flat space has straight lines ρ² = s² + λ₂²α²
    for tag in [SpaceTag::E2, SpaceTag::M2] {
        let sig = tag.signature();
        let traj = geodesic_flow(&sig, ChartKind::RhoChart, &GeodesicStart::new(1.0, 0.2, 0.5, 0.4), 4.0, &opts)?;
        let fi = drift_report(&traj)?["first_integral"].abs;
        println!("{tag:>4}: hyperbola residual {:.2e}, first integral drift {fi:.2e}", flat_residual(&sig, &traj)?);
    }
    Ok(())
}
