//! Marked fansy divisors: the combinatorial datum of a complete rational
//! complexity-one T-variety, its validation, and the invariant cycles it names.

use crate::exactlin::{
    face_character_lattice, integral_pairing_sublattice, lattice_index, perp_lattice, RatVec,
};
use crate::polyhedra::{Cone, Fan, GeometryError, PolyhedralComplex, Polyhedron};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FansyError {
    #[error("k = {k} is outside 0..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("cone {0} is not marked")]
    NotMarked(String),
    #[error("cone {0} is not a cone of the tailfan")]
    NotInFan(String),
    #[error("{count} faces over point {point} have tailcone {cone}")]
    NonUniqueFace {
        point: String,
        cone: String,
        count: usize,
    },
    #[error("unknown point label {0}")]
    UnknownPoint(String),
    #[error("no special points and no tailfan given")]
    NoPoints,
    #[error("duplicate point label {0}")]
    DuplicateLabel(String),
    #[error("ambient rank mismatch: {0}")]
    AmbientMismatch(String),
    #[error("invalid marked fansy divisor:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One violated condition, named after the property it breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A fiber is not a complete polyhedral subdivision.
    Subdivision { point: String, detail: String },
    /// The tailcones of a fiber do not form the common tailfan.
    Tailfan { point: String, detail: String },
    /// A marked cone does not belong to the tailfan.
    MarkedOutsideFan { cone: String },
    /// Marked cones are not closed under passing to larger cones.
    UpwardClosure { marked: String, missing: String },
    /// The degree of a marked maximal slice leaves its cone.
    Degree { cone: String, normal: String },
    /// A face of a marked maximal cone is marked iff the degree meets it; this fails.
    FaceMarking {
        cone: String,
        face: String,
        degree_meets: bool,
    },
    /// A marked cone has no unique face over some point.
    UniqueFace {
        cone: String,
        point: String,
        count: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Subdivision { point, detail } => {
                write!(
                    f,
                    "subdivision: fiber {point} is not a complete subdivision ({detail})"
                )
            }
            Violation::Tailfan { point, detail } => {
                write!(
                    f,
                    "tailfan: fiber {point} does not have the common tailfan ({detail})"
                )
            }
            Violation::MarkedOutsideFan { cone } => {
                write!(f, "marking: marked cone {cone} is not in the tailfan")
            }
            Violation::UpwardClosure { marked, missing } => write!(
                f,
                "upward-closure: {marked} is marked but the larger cone {missing} is not"
            ),
            Violation::Degree { cone, normal } => write!(
                f,
                "degree: degree of the slice over {cone} is not inside the cone (normal {normal})"
            ),
            Violation::FaceMarking {
                cone,
                face,
                degree_meets,
            } => write!(
                f,
                "face-marking: face {face} of {cone} is {} but the degree {} it",
                if *degree_meets { "unmarked" } else { "marked" },
                if *degree_meets { "meets" } else { "misses" }
            ),
            Violation::UniqueFace { cone, point, count } => write!(
                f,
                "unique-face: {count} faces over {point} have marked tailcone {cone}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// An invariant cycle generator. Variant order gives the canonical order V, R, T.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleGenerator {
    /// A face of the fiber over the point with index `point`, with unmarked tail.
    V {
        point: usize,
        label: String,
        face: Polyhedron,
    },
    /// An unmarked cone of the tailfan (general-fiber orbit closure).
    R { cone: Cone },
    /// A marked cone (contracted orbit closure).
    T { cone: Cone },
}

impl CycleGenerator {
    pub fn kind(&self) -> char {
        match self {
            CycleGenerator::V { .. } => 'V',
            CycleGenerator::R { .. } => 'R',
            CycleGenerator::T { .. } => 'T',
        }
    }
}

impl fmt::Display for CycleGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleGenerator::V { label, face, .. } => write!(f, "V[{label}: {face}]"),
            CycleGenerator::R { cone } => write!(f, "R[{cone}]"),
            CycleGenerator::T { cone } => write!(f, "T[{cone}]"),
        }
    }
}

/// The generator sets of one degree `k`, each sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSets {
    pub r: Vec<CycleGenerator>,
    pub v: Vec<CycleGenerator>,
    pub t: Vec<CycleGenerator>,
}

impl GeneratorSets {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.r.len(), self.v.len(), self.t.len())
    }

    /// Canonical order: V, then R, then T.
    pub fn ordered(&self) -> Vec<CycleGenerator> {
        let mut out = self.v.clone();
        out.extend(self.r.iter().cloned());
        out.extend(self.t.iter().cloned());
        out
    }
}

/// The coefficients of the p-divisor attached to one cone of the tailfan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDivisorSlice {
    pub tail: Cone,
    pub coefficients: Vec<(String, Polyhedron)>,
}

/// A marked fansy divisor on `P^1`.
#[derive(Debug, Clone)]
pub struct MarkedFansyDivisor {
    rank: usize,
    labels: Vec<String>,
    complexes: Vec<PolyhedralComplex>,
    tailfan: Fan,
    marked: BTreeSet<Cone>,
    report: OnceLock<ValidationReport>,
}

impl PartialEq for MarkedFansyDivisor {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.labels == other.labels
            && self.complexes == other.complexes
            && self.marked == other.marked
    }
}

impl Eq for MarkedFansyDivisor {}

fn tail_fan_of(rank: usize, complex: &PolyhedralComplex) -> Fan {
    Fan::new(
        rank,
        complex.cells().iter().map(|c| c.tail().clone()).collect(),
    )
}

impl MarkedFansyDivisor {
    /// Builds the datum; the tailfan is read off the first fiber.
    ///
    /// With fewer than two points, generic points with fiber equal to the
    /// tailfan are appended (labels `aux1`, `aux2`). The last point is the basepoint.
    pub fn new(
        rank: usize,
        points: Vec<(String, PolyhedralComplex)>,
        marked: Vec<Cone>,
    ) -> Result<Self, FansyError> {
        let fan = points
            .first()
            .map(|(_, c)| tail_fan_of(rank, c))
            .ok_or(FansyError::NoPoints)?;
        Self::with_tailfan(rank, fan, points, marked)
    }

    pub fn with_tailfan(
        rank: usize,
        tailfan: Fan,
        mut points: Vec<(String, PolyhedralComplex)>,
        marked: Vec<Cone>,
    ) -> Result<Self, FansyError> {
        if tailfan.ambient() != rank {
            return Err(FansyError::AmbientMismatch("tailfan".into()));
        }
        let mut seen = BTreeSet::new();
        for (label, c) in &points {
            if !seen.insert(label.clone()) {
                return Err(FansyError::DuplicateLabel(label.clone()));
            }
            if c.ambient() != rank {
                return Err(FansyError::AmbientMismatch(format!("fiber {label}")));
            }
        }
        if let Some(c) = marked.iter().find(|c| c.ambient() != rank) {
            return Err(FansyError::AmbientMismatch(format!("marked cone {c}")));
        }
        let mut i = 1;
        while points.len() < 2 {
            let label = format!("aux{i}");
            i += 1;
            if seen.insert(label.clone()) {
                points.push((label, PolyhedralComplex::from_fan(&tailfan)));
            }
        }
        let (labels, complexes) = points.into_iter().unzip();
        Ok(MarkedFansyDivisor {
            rank,
            labels,
            complexes,
            tailfan,
            marked: marked.into_iter().collect(),
            report: OnceLock::new(),
        })
    }

    /// `n`, the rank of the lattice `N`; the variety has dimension `n + 1`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> &[String] {
        &self.labels
    }

    pub fn complexes(&self) -> &[PolyhedralComplex] {
        &self.complexes
    }

    pub fn complex(&self, label: &str) -> Result<&PolyhedralComplex, FansyError> {
        self.point_index(label).map(|i| &self.complexes[i])
    }

    pub fn point_index(&self, label: &str) -> Result<usize, FansyError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| FansyError::UnknownPoint(label.to_string()))
    }

    pub fn tailfan(&self) -> &Fan {
        &self.tailfan
    }

    pub fn marked(&self) -> &BTreeSet<Cone> {
        &self.marked
    }

    pub fn is_marked(&self, c: &Cone) -> bool {
        self.marked.contains(c)
    }

    /// Reorders the points (the last one becomes the basepoint).
    pub fn with_point_order(&self, order: &[usize]) -> MarkedFansyDivisor {
        assert_eq!(order.len(), self.labels.len());
        MarkedFansyDivisor {
            rank: self.rank,
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            complexes: order.iter().map(|&i| self.complexes[i].clone()).collect(),
            tailfan: self.tailfan.clone(),
            marked: self.marked.clone(),
            report: OnceLock::new(),
        }
    }

    /// Appends a generic point whose fiber is the tailfan.
    pub fn with_generic_point(&self, label: &str) -> MarkedFansyDivisor {
        let mut out = self.clone();
        out.labels.push(label.to_string());
        out.complexes
            .push(PolyhedralComplex::from_fan(&self.tailfan));
        out.report = OnceLock::new();
        out
    }

    /// Checks every defining condition and lists all violations found.
    pub fn validate(&self) -> &ValidationReport {
        self.report.get_or_init(|| self.compute_report())
    }

    pub fn ensure_valid(&self) -> Result<(), FansyError> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(FansyError::Invalid(r.clone()))
        }
    }

    fn compute_report(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let fan = &self.tailfan;
        if let Err(e) = fan.check_complete() {
            violations.push(Violation::Tailfan {
                point: self.labels[0].clone(),
                detail: e.to_string(),
            });
            return ValidationReport { violations };
        }
        let mut fibers_ok = true;
        for (label, c) in self.labels.iter().zip(&self.complexes) {
            if let Err(e) = c.check() {
                violations.push(Violation::Subdivision {
                    point: label.clone(),
                    detail: e.to_string(),
                });
                fibers_ok = false;
                continue;
            }
            match c.tailfan() {
                Ok(f) if f == *fan => {}
                Ok(f) => {
                    violations.push(Violation::Tailfan {
                        point: label.clone(),
                        detail: format!(
                            "maximal tailcones {:?} differ from {:?}",
                            f.maximal_cones(),
                            fan.maximal_cones()
                        ),
                    });
                    fibers_ok = false;
                }
                Err(e) => {
                    violations.push(Violation::Tailfan {
                        point: label.clone(),
                        detail: e.to_string(),
                    });
                    fibers_ok = false;
                }
            }
        }
        for c in &self.marked {
            if !fan.contains_cone(c) {
                violations.push(Violation::MarkedOutsideFan {
                    cone: c.to_string(),
                });
            }
        }
        for c in &self.marked {
            if !fan.contains_cone(c) {
                continue;
            }
            for s in fan.star(c) {
                if !self.marked.contains(s) {
                    violations.push(Violation::UpwardClosure {
                        marked: c.to_string(),
                        missing: s.to_string(),
                    });
                }
            }
        }
        if !fibers_ok {
            return ValidationReport { violations };
        }
        for sigma in fan.maximal_cones() {
            if !self.marked.contains(sigma) {
                continue;
            }
            for u in sigma.facets() {
                let total: Option<BigRational> = self
                    .complexes
                    .iter()
                    .map(|c| {
                        cells_with_tail(c, sigma)
                            .first()
                            .and_then(|cell| cell.min_pairing(&crate::exactlin::to_rat_vec(u)))
                    })
                    .sum();
                if total.is_none_or(|t| t.is_negative()) {
                    violations.push(Violation::Degree {
                        cone: sigma.to_string(),
                        normal: format!("{u:?}"),
                    });
                }
            }
            let Ok(deg) = self.degree_of(sigma) else {
                continue;
            };
            for tau in sigma.faces() {
                let meets = !deg
                    .intersect(&Polyhedron::from_cone(&zero_vec(self.rank), tau))
                    .is_empty();
                if meets != self.marked.contains(tau) {
                    violations.push(Violation::FaceMarking {
                        cone: sigma.to_string(),
                        face: tau.to_string(),
                        degree_meets: meets,
                    });
                }
            }
        }
        for c in &self.marked {
            if !fan.contains_cone(c) {
                continue;
            }
            for (label, cx) in self.labels.iter().zip(&self.complexes) {
                let n = faces_with_tail(cx, c).len();
                if n != 1 {
                    violations.push(Violation::UniqueFace {
                        cone: c.to_string(),
                        point: label.clone(),
                        count: n,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    fn degree_of(&self, sigma: &Cone) -> Result<Polyhedron, FansyError> {
        let mut acc = Polyhedron::from_cone(&zero_vec(self.rank), &Cone::zero(self.rank));
        for (label, c) in self.labels.iter().zip(&self.complexes) {
            let cells = cells_with_tail(c, sigma);
            if cells.len() != 1 {
                return Err(FansyError::NonUniqueFace {
                    point: label.clone(),
                    cone: sigma.to_string(),
                    count: cells.len(),
                });
            }
            acc = acc.minkowski_sum(cells[0])?;
        }
        Ok(acc)
    }

    /// `deg D^σ` for every marked maximal cone σ.
    pub fn deg_xi(&self) -> Result<Vec<(Cone, Polyhedron)>, FansyError> {
        self.tailfan
            .maximal_cones()
            .iter()
            .filter(|s| self.marked.contains(*s))
            .map(|s| Ok((s.clone(), self.degree_of(s)?)))
            .collect()
    }

    /// Coefficients of `D^σ`: per point, the unique face with tailcone σ (empty if none).
    pub fn slice(&self, sigma: &Cone) -> Result<PDivisorSlice, FansyError> {
        if !self.tailfan.contains_cone(sigma) {
            return Err(FansyError::NotInFan(sigma.to_string()));
        }
        let mut coefficients = Vec::new();
        for (label, c) in self.labels.iter().zip(&self.complexes) {
            let faces = faces_with_tail(c, sigma);
            let coef = match faces.len() {
                0 => Polyhedron::empty(self.rank),
                1 => faces[0].clone(),
                count => {
                    return Err(FansyError::NonUniqueFace {
                        point: label.clone(),
                        cone: sigma.to_string(),
                        count,
                    })
                }
            };
            coefficients.push((label.clone(), coef));
        }
        Ok(PDivisorSlice {
            tail: sigma.clone(),
            coefficients,
        })
    }

    /// `R_k`, `V_k` and `T_k` for `0 <= k <= n + 1`.
    pub fn enumerate_generators(&self, k: usize) -> Result<GeneratorSets, FansyError> {
        let n = self.rank;
        if k > n + 1 {
            return Err(FansyError::KOutOfRange { k, max: n + 1 });
        }
        let r = self
            .tailfan
            .cones_of_dim(n + 1 - k)
            .into_iter()
            .filter(|c| !self.marked.contains(*c))
            .map(|c| CycleGenerator::R { cone: c.clone() })
            .collect();
        let (v, t) = if k == n + 1 {
            (Vec::new(), Vec::new())
        } else {
            let d = n - k;
            let mut v = Vec::new();
            for (i, (label, c)) in self.labels.iter().zip(&self.complexes).enumerate() {
                for f in c.faces_of_dim(d) {
                    if !self.marked.contains(f.face.tail()) {
                        v.push(CycleGenerator::V {
                            point: i,
                            label: label.clone(),
                            face: f.face.clone(),
                        });
                    }
                }
            }
            v.sort();
            let t = self
                .tailfan
                .cones_of_dim(d)
                .into_iter()
                .filter(|c| self.marked.contains(*c))
                .map(|c| CycleGenerator::T { cone: c.clone() })
                .collect();
            (v, t)
        };
        Ok(GeneratorSets { r, v, t })
    }

    /// The unique face of the fiber over `label` whose tailcone is the marked cone σ.
    pub fn unique_face_over(&self, sigma: &Cone, label: &str) -> Result<&Polyhedron, FansyError> {
        if !self.marked.contains(sigma) {
            return Err(FansyError::NotMarked(sigma.to_string()));
        }
        let c = self.complex(label)?;
        let faces = faces_with_tail(c, sigma);
        if faces.len() != 1 {
            return Err(FansyError::NonUniqueFace {
                point: label.to_string(),
                cone: sigma.to_string(),
                count: faces.len(),
            });
        }
        Ok(faces[0])
    }

    /// Multiplicity of the image of a face in `N_Q / lin(F)`.
    pub fn mu_of_face(&self, face: &Polyhedron) -> BigInt {
        mu_of_face(face)
    }

    /// `s_σ`: the order of the group generated by the per-point vertex classes in `N_Q / N` modulo `span σ`.
    pub fn s_sigma(&self, sigma: &Cone) -> Result<BigInt, FansyError> {
        let base = perp_lattice(&sigma.span_basis(), self.rank);
        let mut points: Vec<RatVec> = Vec::new();
        for label in &self.labels {
            let f = self.unique_face_over(sigma, label)?;
            points.push(f.vertices()[0].clone());
        }
        let sub = integral_pairing_sublattice(&base, &points);
        Ok(lattice_index(&sub, &base).expect("sublattice of equal rank"))
    }
}

fn zero_vec(n: usize) -> RatVec {
    vec![BigRational::zero(); n]
}

fn cells_with_tail<'a>(c: &'a PolyhedralComplex, sigma: &Cone) -> Vec<&'a Polyhedron> {
    c.cells().iter().filter(|p| p.tail() == sigma).collect()
}

fn faces_with_tail<'a>(c: &'a PolyhedralComplex, sigma: &Cone) -> Vec<&'a Polyhedron> {
    c.faces()
        .iter()
        .filter(|f| f.face.tail() == sigma)
        .map(|f| &f.face)
        .collect()
}

/// Multiplicity of the image of a face in `N_Q / lin(F)`.
pub fn mu_of_face(face: &Polyhedron) -> BigInt {
    let n = face.ambient();
    let lin = face.lin_basis();
    let base = perp_lattice(&lin, n);
    let m = face_character_lattice(&lin, &face.vertices()[0], n);
    lattice_index(&m, &base).expect("sublattice of equal rank")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int_vec, rat, rat_vec};

    fn p1_fan() -> Fan {
        Fan::new(
            1,
            vec![Cone::from_i64(1, &[&[1]]), Cone::from_i64(1, &[&[-1]])],
        )
    }

    #[test]
    fn mu_examples() {
        let p = Polyhedron::new(2, &[rat_vec(&[1, 2])], &[]).unwrap();
        assert_eq!(mu_of_face(&p), BigInt::from(1));
        let half = vec![rat(1, 2), rat(0, 1)];
        let ray = Polyhedron::new(2, std::slice::from_ref(&half), &[int_vec(&[1, 0])]).unwrap();
        assert_eq!(mu_of_face(&ray), BigInt::from(1));
        let pt = Polyhedron::new(2, &[half], &[]).unwrap();
        assert_eq!(mu_of_face(&pt), BigInt::from(2));
    }

    #[test]
    fn aux_points_are_appended() {
        let fan = p1_fan();
        let x = MarkedFansyDivisor::with_tailfan(1, fan, Vec::new(), Vec::new()).unwrap();
        assert_eq!(x.points(), &["aux1".to_string(), "aux2".to_string()]);
        assert!(x.validate().is_valid());
    }

    #[test]
    fn top_degree_is_the_origin() {
        let x = MarkedFansyDivisor::with_tailfan(1, p1_fan(), Vec::new(), Vec::new()).unwrap();
        let g = x.enumerate_generators(2).unwrap();
        assert_eq!(g.counts(), (1, 0, 0));
        assert!(x.enumerate_generators(3).is_err());
    }
}
