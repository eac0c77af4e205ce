//! Finite-matroid computations around modular cuts, single-element
//! extensions, and amalgams.
//!
//! The crate provides:
//!
//! - a canonical flats-by-rank matroid representation with parsing,
//!   serialization, named generators, minors, and isomorphism testing;
//! - modular defect machinery: modularity, hypermodularity, the Escher
//!   scan, line partitions, and the bundle condition;
//! - modular cuts, Crapo single-element extensions, intersectability, and
//!   defect-reduction chains;
//! - the η/ξ calculus on unions of two extensions and the proper amalgam;
//! - the non-stickiness witness construction and budget-bounded embedding
//!   chains toward OTE and hypermodular matroids;
//! - brute-force oracles and an acceptance harness that replays the desk
//!   instances exactly.

pub mod acceptance;
pub mod amalgam;
pub mod axioms;
pub mod constructions;
pub mod cuts;
pub mod generators;
pub mod ground;
pub mod io;
pub mod iso;
pub mod matroid;
pub mod modularity;
pub mod oracle;
pub mod ranktable;

pub use ground::{GroundSet, Subset};
pub use matroid::{Matroid, RankOracle};
