//! Harmonic analysis on finite Heisenberg groups: convolution algebras,
//! Weyl operators, weighted norms and inversion experiments.

pub mod channel;
pub mod cli;
pub mod convolution;
pub mod error;
pub mod function;
pub mod group;
pub mod inversion;
pub mod matrix;
pub mod norms;
pub mod weights;
pub mod weyl;

pub use error::{Error, Result};
pub use function::{Domain, GroupFunction};
pub use group::{GroupSpec, HeisElement, HeisSpec};
pub use matrix::OperatorMatrix;
pub use weights::WeightFn;
