//! Chow groups and effective cones of complete rational complexity-one T-varieties.
//!
//! The input datum is a marked fansy divisor: a complete fan `Σ`, a list of
//! special points of `P^1`, a complete polyhedral subdivision `S_p` with
//! tailfan `Σ` for each point, and a set `K` of marked cones. From it the
//! crate enumerates invariant cycle generators, assembles the relation matrix
//! presenting `A_k(X)`, reduces it to Smith form, and lists generators of the
//! effective cone. Constructors build the datum from toric downgrades and from
//! rank-two Klyachko bundles, and an independent toric presentation is
//! available for cross-checking.

#![allow(clippy::mutable_key_type, clippy::needless_range_loop)]

pub mod build;
pub mod chow;
pub mod document;
pub mod effcone;
pub mod exactlin;
pub mod fansy;
pub mod polyhedra;

pub use chow::{ChowClass, ChowError, ChowPresentation, RelationBlock};
pub use effcone::{EffClass, EffConeReport};
pub use exactlin::{IntMatrix, IntVec, RatVec, SmithInvariants, Sublattice};
pub use fansy::{CycleGenerator, GeneratorSets, MarkedFansyDivisor, ValidationReport, Violation};
pub use polyhedra::{Cone, Fan, GeometryError, PolyhedralComplex, Polyhedron};
