//! Exact rational cones, pointed polyhedra, polyhedral complexes and fans.
//!
//! Cones are stored by canonical generators with a derived H-representation
//! (computed by double description). Polyhedra are handled through their
//! homogenizations, so every polyhedral question reduces to one about cones.

mod complex;
mod cone;
mod dd;
mod polyhedron;

pub use complex::{ComplexFace, Fan, PolyhedralComplex};
pub use cone::Cone;
pub use polyhedron::Polyhedron;

use crate::exactlin::IntVec;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("polyhedron or cone contains a line")]
    NotPointed,
    #[error("the empty polyhedron has no tailcone")]
    EmptyPolyhedron,
    #[error("cells {0} and {1} do not meet in a common face")]
    NotCommonFace(String, String),
    #[error("tailcones do not form a fan: {0}")]
    NonFanTails(String),
    #[error("not complete: {0}")]
    Incomplete(String),
}

/// Facet normals and faces grouped by dimension.
pub fn dual_and_faces(c: &Cone) -> (Vec<IntVec>, BTreeMap<usize, Vec<Cone>>) {
    (c.facets().to_vec(), c.faces_by_dim())
}

pub fn tailcone(p: &Polyhedron) -> Result<Cone, GeometryError> {
    p.tailcone().cloned()
}

pub fn minkowski_sum(a: &Polyhedron, b: &Polyhedron) -> Result<Polyhedron, GeometryError> {
    a.minkowski_sum(b)
}

/// Faces of dimension `d` with their incident maximal cells; validates the complex first.
pub fn complex_faces(s: &PolyhedralComplex, d: usize) -> Result<Vec<ComplexFace>, GeometryError> {
    s.check_common_faces()?;
    Ok(s.faces_of_dim(d).into_iter().cloned().collect())
}

pub fn tailfan(s: &PolyhedralComplex) -> Result<Fan, GeometryError> {
    s.tailfan()
}
