//! Pointed rational polyhedra, handled through their homogenization.

use super::cone::Cone;
use super::GeometryError;
use crate::exactlin::{primitive, rat_dot, to_rat_vec, vec_add, IntVec, RatVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// An affine form `(a, b)` read as `<a, x> >= b` or `<a, x> = b`.
pub type AffineForm = (IntVec, BigInt);

/// A pointed polyhedron `conv(vertices) + tail`, or the empty polyhedron.
///
/// Internally the polyhedron is the slice at height one of the cone
/// `cone((v, 1), (r, 0))` in `Q^(ambient + 1)`, which makes the canonical
/// form of that cone a canonical form of the polyhedron.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyhedron {
    ambient: usize,
    hom: Cone,
    vertices: Vec<RatVec>,
    tail: Cone,
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "Empty");
        }
        let verts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let c: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", c.join(","))
            })
            .collect();
        write!(f, "conv{{{}}} + {}", verts.join(" "), self.tail)
    }
}

fn homogenize_point(v: &[BigRational]) -> IntVec {
    let (mut w, mu) = primitive(v);
    w.push(mu);
    w
}

fn homogenize_ray(r: &[BigInt]) -> IntVec {
    let mut w = r.to_vec();
    w.push(BigInt::zero());
    w
}

impl Polyhedron {
    pub fn empty(ambient: usize) -> Polyhedron {
        Polyhedron {
            ambient,
            hom: Cone::zero(ambient + 1),
            vertices: Vec::new(),
            tail: Cone::zero(ambient),
        }
    }

    /// `conv(points) + cone(rays)`; no points gives the empty polyhedron.
    pub fn new(
        ambient: usize,
        points: &[RatVec],
        rays: &[IntVec],
    ) -> Result<Polyhedron, GeometryError> {
        if points.is_empty() {
            return Ok(Polyhedron::empty(ambient));
        }
        let mut gens: Vec<IntVec> = points.iter().map(|p| homogenize_point(p)).collect();
        gens.extend(rays.iter().map(|r| homogenize_ray(r)));
        Polyhedron::from_hom(ambient, Cone::new(ambient + 1, gens))
    }

    /// The translate `point + cone`.
    pub fn from_cone(point: &[BigRational], cone: &Cone) -> Polyhedron {
        Polyhedron::new(cone.ambient(), &[point.to_vec()], cone.rays())
            .expect("a pointed cone gives a pointed polyhedron")
    }

    /// `{x : <a, x> >= b for (a, b) in ineqs, <a, x> = b for (a, b) in eqs}`.
    pub fn from_inequalities(
        ambient: usize,
        ineqs: &[(RatVec, BigRational)],
        eqs: &[(RatVec, BigRational)],
    ) -> Result<Polyhedron, GeometryError> {
        let lift = |(a, b): &(RatVec, BigRational)| {
            let mut row = a.clone();
            row.push(-b);
            primitive(&row).0
        };
        let mut hi: Vec<IntVec> = ineqs.iter().map(lift).collect();
        let mut t = vec![BigInt::zero(); ambient + 1];
        t[ambient] = BigInt::one();
        hi.push(t);
        let he: Vec<IntVec> = eqs.iter().map(lift).collect();
        Polyhedron::from_hom(ambient, Cone::from_inequalities(ambient + 1, &hi, &he))
    }

    pub(crate) fn from_hom(ambient: usize, hom: Cone) -> Result<Polyhedron, GeometryError> {
        if hom.rays().iter().all(|g| !g[ambient].is_positive()) {
            return Ok(Polyhedron::empty(ambient));
        }
        if !hom.is_pointed() {
            return Err(GeometryError::NotPointed);
        }
        let mut vertices = Vec::new();
        let mut tail = Vec::new();
        for g in hom.rays() {
            if g[ambient].is_zero() {
                tail.push(g[..ambient].to_vec());
            } else {
                let d = BigRational::from_integer(g[ambient].clone());
                vertices.push(
                    g[..ambient]
                        .iter()
                        .map(|x| BigRational::from_integer(x.clone()) / &d)
                        .collect(),
                );
            }
        }
        vertices.sort();
        Ok(Polyhedron {
            ambient,
            hom,
            vertices,
            tail: Cone::new(ambient, tail),
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn tailcone(&self) -> Result<&Cone, GeometryError> {
        if self.is_empty() {
            Err(GeometryError::EmptyPolyhedron)
        } else {
            Ok(&self.tail)
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.tail.is_zero()
    }

    /// Dimension of the affine hull; `None` for the empty polyhedron.
    pub fn dim(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.hom.dim() - 1)
    }

    /// Inequalities `<a, x> >= b` (facets) and equations `<a, x> = b`.
    pub fn h_representation(&self) -> (Vec<AffineForm>, Vec<AffineForm>) {
        let n = self.ambient;
        let split = |g: &IntVec| (g[..n].to_vec(), -g[n].clone());
        let ineqs = self
            .hom
            .facets()
            .iter()
            .filter(|g| g[..n].iter().any(|x| !x.is_zero()))
            .map(split)
            .collect();
        let eqs = self.hom.equalities().iter().map(split).collect();
        (ineqs, eqs)
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut p = x.to_vec();
        p.push(BigRational::one());
        self.hom.contains(&p)
    }

    pub fn in_relative_interior(&self, x: &[BigRational]) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut p = x.to_vec();
        p.push(BigRational::one());
        let n = self.ambient;
        self.hom
            .equalities()
            .iter()
            .all(|e| crate::exactlin::pair(e, &p).is_zero())
            && self
                .hom
                .facets()
                .iter()
                .filter(|g| g[..n].iter().any(|x| !x.is_zero()))
                .all(|g| crate::exactlin::pair(g, &p).is_positive())
    }

    /// Average of the vertices plus the sum of the tail generators.
    pub fn interior_point(&self) -> RatVec {
        assert!(!self.is_empty());
        let k = BigRational::from_integer(BigInt::from(self.vertices.len()));
        let mut acc = vec![BigRational::zero(); self.ambient];
        for v in &self.vertices {
            acc = vec_add(&acc, v);
        }
        acc = acc.into_iter().map(|x| x / &k).collect();
        vec_add(&acc, &to_rat_vec(&self.tail.interior_point()))
    }

    /// Basis of the linear space parallel to the affine hull.
    pub fn lin_basis(&self) -> Vec<RatVec> {
        let mut dirs: Vec<RatVec> = Vec::new();
        if let Some(v0) = self.vertices.first() {
            for v in &self.vertices[1..] {
                dirs.push(crate::exactlin::vec_sub(v, v0));
            }
        }
        dirs.extend(self.tail.rays().iter().map(|r| to_rat_vec(r)));
        let mut basis: Vec<RatVec> = Vec::new();
        for d in dirs {
            let mut trial = basis.clone();
            trial.push(d);
            if crate::exactlin::rational_rank(&trial) == trial.len() {
                basis = trial;
            }
        }
        basis
    }

    /// Faces sorted by dimension (the polyhedron itself last); never includes the empty face.
    pub fn faces(&self) -> Vec<Polyhedron> {
        if self.is_empty() {
            return Vec::new();
        }
        let n = self.ambient;
        self.hom
            .faces()
            .iter()
            .filter(|f| f.rays().iter().any(|g| g[n].is_positive()))
            .map(|f| Polyhedron::from_hom(n, f.clone()).expect("faces of pointed are pointed"))
            .collect()
    }

    pub fn is_face_of(&self, other: &Polyhedron) -> bool {
        self.is_empty() || (!other.is_empty() && self.hom.is_face_of(&other.hom))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        if self.is_empty() || other.is_empty() {
            return Polyhedron::empty(self.ambient);
        }
        let n = self.ambient;
        let mut ineqs = self.hom.facets().to_vec();
        ineqs.extend(other.hom.facets().iter().cloned());
        let mut t = vec![BigInt::zero(); n + 1];
        t[n] = BigInt::one();
        ineqs.push(t);
        let mut eqs = self.hom.equalities().to_vec();
        eqs.extend(other.hom.equalities().iter().cloned());
        Polyhedron::from_hom(n, Cone::from_inequalities(n + 1, &ineqs, &eqs))
            .expect("intersection of pointed polyhedra is pointed")
    }

    /// Fails only when the joined tails contain a line.
    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron, GeometryError> {
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.ambient));
        }
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(vec_add(a, b));
            }
        }
        let mut rays = self.tail.rays().to_vec();
        rays.extend(other.tail.rays().iter().cloned());
        Polyhedron::new(self.ambient, &pts, &rays)
    }

    pub fn translate(&self, v: &[BigRational]) -> Polyhedron {
        if self.is_empty() {
            return self.clone();
        }
        let pts: Vec<RatVec> = self.vertices.iter().map(|p| vec_add(p, v)).collect();
        Polyhedron::new(self.ambient, &pts, self.tail.rays())
            .expect("translation keeps pointedness")
    }

    /// Minimum of the linear function `u` over the polyhedron (`None` if unbounded below).
    pub fn min_pairing(&self, u: &[BigRational]) -> Option<BigRational> {
        if self.is_empty() {
            return None;
        }
        if self
            .tail
            .rays()
            .iter()
            .any(|r| rat_dot(&to_rat_vec(r), u).is_negative())
        {
            return None;
        }
        self.vertices.iter().map(|v| rat_dot(v, u)).min()
    }
}
