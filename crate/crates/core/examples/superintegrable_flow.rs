//! Integrates the superintegrable Smorodinsky–Winternitz flow and writes it as CSV.
//!
//! cargo run --example superintegrable_flow > flow.csv

use sl2z::coalgebra::DeformedModel;
use sl2z::dynamics::{drift_report, hamilton_flow, FlowOptions};
use sl2z::hamiltonians::{build, HamiltonianSpec};
use sl2z::phase_space::CartesianState;

fn main() -> sl2z::Result<()> {
    let model = DeformedModel::new(0.4, 1.0, 1.0);
    let set = build(&model, &HamiltonianSpec::ssw(1.0))?;
    let x0 = CartesianState::new(0.8, 0.9, 0.4, -0.3);
    let opts = FlowOptions::default().with_tolerance(1e-10, 1e-16).sampled(0.1);
    let traj = hamilton_flow(&set, &x0, 20.0, &opts)?;
    for (name, d) in drift_report(&traj)? {
        eprintln!("{name}: relative drift {:.2e}", d.rel);
    }
    eprintln!("{:?} after {} steps", traj.status, traj.stats.accepted);
    traj.write_csv(std::io::stdout().lock())
}
