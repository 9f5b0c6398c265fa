//! Exact and asymptotic tail probabilities for geometric last passage percolation,
//! through its dualities with the Jacobi, Meixner and truncated unitary ensembles.

pub mod asymptotics;
pub mod combinatorics;
pub mod ensembles;
pub mod equilibrium;
pub mod error;
pub mod harness;
pub mod lpp;
pub mod numerics;

pub use error::{Error, Result};
