//! Exact-arithmetic lattice polytope invariants.
//!
//! The crate computes Ehrhart data (`h*`-vectors, normalized volumes,
//! degrees), empty depth, delta-genus, normality thresholds and
//! Castelnuovo-Mumford regularity for full-dimensional lattice polytopes, all
//! in unbounded integer arithmetic, and ships constructors for the named
//! polytope families plus exhaustive enumeration of small simplices and
//! polygons up to affine-unimodular equivalence.

pub mod ehrhart;
pub mod enumeration;
mod error;
pub mod families;
pub mod files;
pub mod invariants;
pub mod lattice;
pub mod polytope;
pub mod report;

pub use error::{Error, Result};
pub use lattice::{Int, IntMatrix, LatticePoint};
pub use polytope::{LatticePolytope, PointSet};
