pub mod cli;
pub mod coalgebra;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hamiltonians;
pub mod kappa_math;
pub mod phase_space;

pub use error::{Error, Result};
