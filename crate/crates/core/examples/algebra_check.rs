//! Deformed sl(2) brackets and Casimir centrality at random points.
//!
//! cargo run --example algebra_check -- 0.7

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2z::coalgebra::{algebra_residuals, casimir_observable, DeformedModel};
use sl2z::phase_space::sample_state;

fn main() -> sl2z::Result<()> {
    let z: f64 = std::env::args().nth(1).map_or(0.7, |s| s.parse().expect("z must be a number"));
    let model = DeformedModel::new(z, 0.5, 1.5);
    let casimir = casimir_observable(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("z = {z}, b = ({}, {})", model.b1, model.b2);
    println!("{:>10} {:>10} {:>12} {:>12} {:>12}", "q1", "q2", "C", "bracket", "casimir");
    for _ in 0..8 {
        let x = sample_state(&mut rng);
        let r = algebra_residuals(&model, &x)?;
        println!(
            "{:>10.4} {:>10.4} {:>12.6} {:>12.3e} {:>12.3e}",
            x.q1,
            x.q2,
            casimir.eval(&x)?,
            r.max_bracket(),
            r.r4
        );
    }
    Ok(())
}
