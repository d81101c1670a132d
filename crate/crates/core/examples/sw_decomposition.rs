//! Splits the SW potential on S², AdS and dS into oscillators about the
//! origin and the two auxiliary centers.

use sl2z::geometry::SpaceTag;
use sl2z::hamiltonians::sw_decompose;

fn main() -> sl2z::Result<()> {
    let (beta0, beta1, beta2) = (0.5, 1.3, 0.7);
    for tag in [SpaceTag::S2, SpaceTag::AdS, SpaceTag::DS] {
        let sig = tag.signature();
        let d = sw_decompose(&sig, 0.6, 0.4, beta0, beta1, beta2)?;
        println!("{tag}: total {:.12}", d.total());
        println!("  central {:.12}  barrier_x {:.12}  barrier_y {:.12}", d.central, d.barrier_x, d.barrier_y);
        for (label, c) in [("O1", d.center_1), ("O2", d.center_2)] {
            match c {
                Some(c) => println!("  {label}: distance {:.6}, oscillator {:.12} + {:.3}", c.distance, c.oscillator, c.constant),
                None => println!("  {label}: not on this space"),
            }
        }
        if let Ok(c) = d.centered_total() {
            println!("  centered total {c:.12} (difference {:.1e})", c - d.total());
        }
    }
    Ok(())
}
