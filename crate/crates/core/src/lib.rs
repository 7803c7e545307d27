//! Triangle-free graphs with small independence number from two overlaid
//! random blow-ups, a 3-uniform analogue, baseline constructions, and the
//! measurements used to check them.

pub mod analysis;
pub mod baselines;
pub mod bits;
pub mod color;
pub mod construction;
pub mod error;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod params;
pub mod rng;

pub use error::{Error, Result};
