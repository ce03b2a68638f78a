//! Gram-determinant characterizations of configurations in hyperbolic space.
//!
//! Points, horospheres and cooriented hyperplanes of the hyperboloid model,
//! the degeneracy tests for their pairwise-invariant matrices, and the
//! classifiers that recover a geometric witness from a degenerate matrix.

pub mod cli;
pub mod error;
pub mod generators;
pub mod lorentz;
pub mod models;
pub mod objects;
pub mod theorems;

pub use error::{GeomError, Result};
pub use lorentz::{DegeneracyVerdict, LorentzVector, DEFAULT_TOL};
pub use objects::{CoHyperplane, CoSphereE, EquidistantBranch, HPoint, Horosphere, Hypersphere};
