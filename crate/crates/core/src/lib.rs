//! Discrete Morse theory on finite simplicial complexes.
//!
//! The crate validates discrete Morse functions, builds their gradient
//! vector fields, collapses sublevel complexes, runs the discrete gradient
//! flow, and computes min-max critical values: mountain passes between two
//! local minima and the discrete geometric category of a complex.

pub mod chain;
pub mod cli;
pub mod collapse;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod generate;
pub mod io;
pub mod minmax;
pub mod simplex;
pub mod morse;

pub use chain::Chain;
pub use complex::{Limits, SimplicialComplex};
pub use error::{DmtError, Result};
pub use morse::{GradientField, MorseFunction, VPath, VectorField};
pub use simplex::Simplex;
