//! Polyhedral complexes and fans.

use super::cone::Cone;
use super::polyhedron::Polyhedron;
use super::GeometryError;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// A face of a complex together with the indices of the maximal cells containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexFace {
    pub face: Polyhedron,
    pub cells: Vec<usize>,
}

/// A polyhedral complex given by its maximal cells (sorted, deduplicated).
#[derive(Debug)]
pub struct PolyhedralComplex {
    ambient: usize,
    cells: Vec<Polyhedron>,
    faces: OnceLock<Vec<ComplexFace>>,
}

impl Clone for PolyhedralComplex {
    fn clone(&self) -> Self {
        PolyhedralComplex {
            ambient: self.ambient,
            cells: self.cells.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for PolyhedralComplex {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.cells == other.cells
    }
}

impl Eq for PolyhedralComplex {}

impl PolyhedralComplex {
    pub fn new(ambient: usize, mut cells: Vec<Polyhedron>) -> PolyhedralComplex {
        cells.retain(|c| !c.is_empty());
        cells.sort();
        cells.dedup();
        PolyhedralComplex {
            ambient,
            cells,
            faces: OnceLock::new(),
        }
    }

    /// The complex whose cells are the maximal cones of a fan.
    pub fn from_fan(fan: &Fan) -> PolyhedralComplex {
        let origin = vec![num_rational::BigRational::from_integer(0.into()); fan.ambient()];
        PolyhedralComplex::new(
            fan.ambient(),
            fan.maximal_cones()
                .iter()
                .map(|c| Polyhedron::from_cone(&origin, c))
                .collect(),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn cells(&self) -> &[Polyhedron] {
        &self.cells
    }

    /// Every face of every cell, once, sorted by dimension then canonical form.
    pub fn faces(&self) -> &[ComplexFace] {
        self.faces.get_or_init(|| {
            let mut map: BTreeMap<Polyhedron, Vec<usize>> = BTreeMap::new();
            for (i, c) in self.cells.iter().enumerate() {
                for f in c.faces() {
                    map.entry(f).or_default().push(i);
                }
            }
            map.into_iter()
                .map(|(face, cells)| ComplexFace { face, cells })
                .collect()
        })
    }

    pub fn faces_of_dim(&self, d: usize) -> Vec<&ComplexFace> {
        self.faces()
            .iter()
            .filter(|f| f.face.dim() == Some(d))
            .collect()
    }

    pub fn find_face(&self, p: &Polyhedron) -> Option<&ComplexFace> {
        self.faces()
            .binary_search_by(|f| f.face.cmp(p))
            .ok()
            .map(|i| &self.faces()[i])
    }

    /// Faces of dimension `dim(face) + 1` containing `face`.
    pub fn cofaces(&self, face: &Polyhedron) -> Vec<&Polyhedron> {
        let Some(d) = face.dim() else {
            return Vec::new();
        };
        self.faces_of_dim(d + 1)
            .into_iter()
            .map(|f| &f.face)
            .filter(|g| face.is_face_of(g))
            .collect()
    }

    /// Checks the common-face axiom, purity and completeness.
    pub fn check(&self) -> Result<(), GeometryError> {
        self.check_common_faces()?;
        let n = self.ambient;
        if self.cells.is_empty() {
            return Err(GeometryError::Incomplete("no cells".into()));
        }
        for c in &self.cells {
            if c.dim() != Some(n) {
                return Err(GeometryError::Incomplete(format!(
                    "cell {c} is not full-dimensional"
                )));
            }
        }
        if n > 0 {
            for f in self.faces_of_dim(n - 1) {
                if f.cells.len() != 2 {
                    return Err(GeometryError::Incomplete(format!(
                        "facet {} lies in {} cells",
                        f.face,
                        f.cells.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn check_common_faces(&self) -> Result<(), GeometryError> {
        for i in 0..self.cells.len() {
            for j in i + 1..self.cells.len() {
                let a = &self.cells[i];
                let b = &self.cells[j];
                if !bounding_boxes_meet(a, b) {
                    continue;
                }
                let m = a.intersect(b);
                if !m.is_face_of(a) || !m.is_face_of(b) {
                    return Err(GeometryError::NotCommonFace(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(())
    }

    /// The fan of tailcones of all faces.
    pub fn tailfan(&self) -> Result<Fan, GeometryError> {
        let tails: Vec<Cone> = self.cells.iter().map(|c| c.tail().clone()).collect();
        let fan = Fan::new(self.ambient, tails);
        fan.check_common_faces()?;
        for f in self.faces() {
            if !fan.contains_cone(f.face.tail()) {
                return Err(GeometryError::NonFanTails(format!(
                    "tail {} of face {} is not a cone of the fan",
                    f.face.tail(),
                    f.face
                )));
            }
        }
        Ok(fan)
    }
}

/// Cheap rejection for pairs of cells that cannot meet.
fn bounding_boxes_meet(a: &Polyhedron, b: &Polyhedron) -> bool {
    let n = a.ambient();
    for k in 0..n {
        let unbounded_up = |p: &Polyhedron| p.tail().rays().iter().any(|r| r[k] > 0.into());
        let unbounded_down = |p: &Polyhedron| p.tail().rays().iter().any(|r| r[k] < 0.into());
        let max = |p: &Polyhedron| p.vertices().iter().map(|v| v[k].clone()).max();
        let min = |p: &Polyhedron| p.vertices().iter().map(|v| v[k].clone()).min();
        if !unbounded_up(a) && !unbounded_down(b) && max(a) < min(b) {
            return false;
        }
        if !unbounded_up(b) && !unbounded_down(a) && max(b) < min(a) {
            return false;
        }
    }
    true
}

/// A fan given by its maximal cones.
#[derive(Debug)]
pub struct Fan {
    ambient: usize,
    maximal: Vec<Cone>,
    cones: OnceLock<Vec<Cone>>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            ambient: self.ambient,
            maximal: self.maximal.clone(),
            cones: OnceLock::new(),
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.maximal == other.maximal
    }
}

impl Eq for Fan {}

impl Fan {
    /// Keeps the cones not contained in another listed cone.
    pub fn new(ambient: usize, mut cones: Vec<Cone>) -> Fan {
        cones.sort();
        cones.dedup();
        let maximal: Vec<Cone> = cones
            .iter()
            .filter(|c| {
                !cones
                    .iter()
                    .any(|d| d != *c && d.dim() > c.dim() && c.is_subset_of(d))
            })
            .cloned()
            .collect();
        Fan {
            ambient,
            maximal,
            cones: OnceLock::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// All cones of the fan, sorted by dimension then generators.
    pub fn cones(&self) -> &[Cone] {
        self.cones.get_or_init(|| {
            let mut all: Vec<Cone> = self
                .maximal
                .iter()
                .flat_map(|c| c.faces().iter().cloned())
                .collect();
            all.sort();
            all.dedup();
            all
        })
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<&Cone> {
        self.cones().iter().filter(|c| c.dim() == d).collect()
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones().binary_search(c).is_ok()
    }

    pub fn rays(&self) -> Vec<&Cone> {
        self.cones_of_dim(1)
    }

    /// Cones of the fan having `tau` as a face (including `tau`).
    pub fn star(&self, tau: &Cone) -> Vec<&Cone> {
        self.cones().iter().filter(|s| tau.is_face_of(s)).collect()
    }

    /// The smallest cone of the fan containing `v`, if any.
    pub fn carrier(&self, v: &[num_rational::BigRational]) -> Option<&Cone> {
        self.cones().iter().find(|c| c.contains(v))
    }

    pub fn check_common_faces(&self) -> Result<(), GeometryError> {
        for c in &self.maximal {
            if !c.is_pointed() {
                return Err(GeometryError::NotPointed);
            }
        }
        for i in 0..self.maximal.len() {
            for j in i + 1..self.maximal.len() {
                let a = &self.maximal[i];
                let b = &self.maximal[j];
                let m = a.intersect(b);
                if !m.is_face_of(a) || !m.is_face_of(b) {
                    return Err(GeometryError::NonFanTails(format!(
                        "cones {a} and {b} meet in {m}, not a common face"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks the fan axioms and completeness.
    pub fn check_complete(&self) -> Result<(), GeometryError> {
        self.check_common_faces()?;
        let n = self.ambient;
        if self.maximal.iter().any(|c| c.dim() != n) || self.maximal.is_empty() {
            return Err(GeometryError::Incomplete(
                "fan is not pure of full dimension".into(),
            ));
        }
        if n == 0 {
            return Ok(());
        }
        for tau in self.cones_of_dim(n - 1) {
            let k = self.maximal.iter().filter(|s| tau.is_face_of(s)).count();
            if k != 2 {
                return Err(GeometryError::Incomplete(format!(
                    "wall {tau} lies in {k} maximal cones"
                )));
            }
        }
        Ok(())
    }
}
