//! A user-defined kinetic factor and potential.
//!
//! Any `H = ½ f(zJ₋) J₊ + 𝒰(z, J₋)` Poisson-commutes with the Casimir, so it
//! is integrable by construction. Here `f(u) = cosh u` and `𝒰 = β J₋ / (1 + zJ₋)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2z::coalgebra::DeformedModel;
use sl2z::dynamics::{drift_report, hamilton_flow, FlowOptions};
use sl2z::hamiltonians::{build, CustomTerms, HamiltonianSpec};
use sl2z::phase_space::{bracket, sample_state, CartesianState};

fn main() -> sl2z::Result<()> {
    let beta = 0.8;
    let terms = CustomTerms::new(
        "cosh-rational",
        |u: f64| (u.cosh(), u.sinh()),
        move |z: f64, j: f64| {
            let d = 1.0 + z * j;
            (beta * j / d, beta / (d * d))
        },
    )?;
    let model = DeformedModel::new(0.3, 0.5, 0.5);
    let set = build(&model, &HamiltonianSpec::custom(terms))?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let worst = (0..200)
        .map(|_| bracket(&set.h, &set.c_z, &sample_state(&mut rng)).map(f64::abs))
        .collect::<sl2z::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("max |{{H, C}}| over 200 points: {worst:.2e}");

    let traj = hamilton_flow(&set, &CartesianState::new(0.8, 0.9, 0.2, -0.1), 10.0, &FlowOptions::default())?;
    for (name, d) in drift_report(&traj)? {
        println!("{name}: relative drift {:.2e}", d.rel);
    }
    println!("{:?}", traj.status);
    Ok(())
}
