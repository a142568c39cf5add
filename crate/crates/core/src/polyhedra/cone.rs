//! Rational polyhedral cones with canonical generators.

use super::dd::double_description;
use crate::exactlin::{
    dot, int_rank, integer_kernel, pair, primitive_direction, primitive_int, to_rat_vec, IntVec,
    RatVec, Sublattice,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

/// A rational polyhedral cone in `Q^ambient`.
///
/// Generators are canonical: for a pointed cone they are the primitive
/// extreme rays in lexicographic order; otherwise they are `±` a Hermite basis
/// of the lineality space followed by the extreme rays of the quotient,
/// projected orthogonally to the lineality space.
pub struct Cone {
    ambient: usize,
    rays: Vec<IntVec>,
    facets: Vec<IntVec>,
    equalities: Vec<IntVec>,
    lineality_dim: usize,
    faces: OnceLock<Vec<Cone>>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Cone {
            ambient: self.ambient,
            rays: self.rays.clone(),
            facets: self.facets.clone(),
            equalities: self.equalities.clone(),
            lineality_dim: self.lineality_dim,
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.rays.hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by dimension first, then by generators.
impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient, self.dim(), &self.rays).cmp(&(other.ambient, other.dim(), &other.rays))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone{}", self)
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| {
                let c: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("({})", c.join(","))
            })
            .collect();
        write!(f, "[{}]", rays.join(" "))
    }
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub(crate) fn project_out(v: &[BigInt], basis: &[IntVec]) -> RatVec {
    let k = basis.len();
    let mut out = to_rat_vec(v);
    if k == 0 {
        return out;
    }
    // Gram system G c = B v
    let mut gram: Vec<RatVec> = basis
        .iter()
        .map(|b| {
            let mut row: RatVec = basis
                .iter()
                .map(|c| BigRational::from_integer(dot(b, c)))
                .collect();
            row.push(BigRational::from_integer(dot(b, v)));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k)
            .find(|&i| !gram[i][c].is_zero())
            .expect("basis independent");
        gram.swap(c, p);
        let piv = gram[c][c].clone();
        for j in c..=k {
            gram[c][j] = &gram[c][j] / &piv;
        }
        for i in 0..k {
            if i != c && !gram[i][c].is_zero() {
                let f = gram[i][c].clone();
                for j in c..=k {
                    let t = &gram[c][j] * &f;
                    gram[i][j] -= t;
                }
            }
        }
    }
    for (i, b) in basis.iter().enumerate() {
        let coef = &gram[i][k];
        for (o, x) in out.iter_mut().zip(b) {
            *o -= coef * BigRational::from_integer(x.clone());
        }
    }
    out
}

fn normalize_gens(gens: impl IntoIterator<Item = IntVec>) -> Vec<IntVec> {
    let set: BTreeSet<IntVec> = gens
        .into_iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .map(|g| primitive_int(&g))
        .collect();
    set.into_iter().collect()
}

impl Cone {
    /// Cone generated by the given integer vectors.
    pub fn new(ambient: usize, gens: Vec<IntVec>) -> Cone {
        let gens = normalize_gens(gens);
        assert!(gens.iter().all(|g| g.len() == ambient), "ambient mismatch");
        let equalities: Vec<IntVec> =
            Sublattice::from_generators(ambient, &integer_kernel(&gens, ambient))
                .basis()
                .to_vec();
        let r = ambient - equalities.len();

        let dual = double_description(ambient, &gens, &[]);
        let facets: Vec<IntVec> = normalize_gens(
            dual.rays
                .iter()
                .map(|m| primitive_direction(&project_out(m, &dual.lineality))),
        );

        let mut lin_rows = equalities.clone();
        lin_rows.extend(facets.iter().cloned());
        let lineality: Vec<IntVec> =
            Sublattice::from_generators(ambient, &integer_kernel(&lin_rows, ambient))
                .basis()
                .to_vec();
        let l = lineality.len();

        let mut rays: BTreeSet<IntVec> = BTreeSet::new();
        if r > l {
            for g in &gens {
                let tight: Vec<IntVec> = facets
                    .iter()
                    .filter(|f| dot(f, g).is_zero())
                    .cloned()
                    .collect();
                if tight.len() == facets.len() {
                    continue;
                }
                if int_rank(&tight) + l + 1 == r {
                    rays.insert(primitive_direction(&project_out(g, &lineality)));
                }
            }
        }
        for b in &lineality {
            rays.insert(b.clone());
            rays.insert(b.iter().map(|x| -x).collect());
        }
        Cone {
            ambient,
            rays: rays.into_iter().collect(),
            facets,
            equalities,
            lineality_dim: l,
            faces: OnceLock::new(),
        }
    }

    pub fn from_i64(ambient: usize, gens: &[&[i64]]) -> Cone {
        Cone::new(
            ambient,
            gens.iter().map(|g| crate::exactlin::int_vec(g)).collect(),
        )
    }

    pub fn zero(ambient: usize) -> Cone {
        Cone::new(ambient, Vec::new())
    }

    pub fn full(ambient: usize) -> Cone {
        let mut gens = crate::exactlin::IntMatrix::identity(ambient).into_rows();
        gens.push(vec![BigInt::from(-1); ambient]);
        Cone::new(ambient, gens)
    }

    /// `{x : <a, x> >= 0 for a in ineqs, <e, x> = 0 for e in eqs}`.
    pub fn from_inequalities(ambient: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> Cone {
        let dd = double_description(ambient, ineqs, eqs);
        let mut gens = dd.rays;
        for l in dd.lineality {
            gens.push(l.iter().map(|x| -x).collect());
            gens.push(l);
        }
        Cone::new(ambient, gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    /// Primitive inner facet normals, each lying in the linear span of the cone.
    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    /// Hermite basis of the integral vectors vanishing on the cone.
    pub fn equalities(&self) -> &[IntVec] {
        &self.equalities
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.equalities.len()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_dim
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality_dim == 0
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn span_basis(&self) -> Vec<RatVec> {
        let mut basis: Vec<IntVec> = Vec::new();
        for r in &self.rays {
            let mut trial = basis.clone();
            trial.push(r.clone());
            if int_rank(&trial) == trial.len() {
                basis = trial;
            }
        }
        basis.iter().map(|b| to_rat_vec(b)).collect()
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.equalities.iter().all(|e| pair(e, v).is_zero())
            && self.facets.iter().all(|f| !pair(f, v).is_negative())
    }

    pub fn contains_int(&self, v: &[BigInt]) -> bool {
        self.equalities.iter().all(|e| dot(e, v).is_zero())
            && self.facets.iter().all(|f| !dot(f, v).is_negative())
    }

    pub fn in_relative_interior(&self, v: &[BigRational]) -> bool {
        self.equalities.iter().all(|e| pair(e, v).is_zero())
            && self.facets.iter().all(|f| pair(f, v).is_positive())
    }

    /// Sum of the generators, a point of the relative interior.
    pub fn interior_point(&self) -> IntVec {
        let mut acc = vec![BigInt::zero(); self.ambient];
        for r in &self.rays {
            for (a, x) in acc.iter_mut().zip(r) {
                *a += x;
            }
        }
        acc
    }

    pub fn join(&self, other: &Cone) -> Cone {
        let mut gens = self.rays.clone();
        gens.extend(other.rays.iter().cloned());
        Cone::new(self.ambient, gens)
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equalities.clone();
        eqs.extend(other.equalities.iter().cloned());
        Cone::from_inequalities(self.ambient, &ineqs, &eqs)
    }

    /// All faces, sorted by dimension and then generators; the cone itself is last.
    pub fn faces(&self) -> &[Cone] {
        self.faces.get_or_init(|| {
            let n = self.rays.len();
            let tight: Vec<Vec<bool>> = self
                .facets
                .iter()
                .map(|f| self.rays.iter().map(|r| dot(f, r).is_zero()).collect())
                .collect();
            let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
            let mut queue = vec![vec![true; n]];
            seen.insert(vec![true; n]);
            while let Some(mask) = queue.pop() {
                for t in &tight {
                    let sub: Vec<bool> = mask.iter().zip(t).map(|(a, b)| *a && *b).collect();
                    if seen.insert(sub.clone()) {
                        queue.push(sub);
                    }
                }
            }
            let mut faces: Vec<Cone> = seen
                .into_iter()
                .map(|mask| {
                    let gens = self
                        .rays
                        .iter()
                        .zip(&mask)
                        .filter(|(_, m)| **m)
                        .map(|(r, _)| r.clone())
                        .collect();
                    Cone::new(self.ambient, gens)
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            faces.sort();
            faces
        })
    }

    pub fn faces_by_dim(&self) -> BTreeMap<usize, Vec<Cone>> {
        let mut out: BTreeMap<usize, Vec<Cone>> = BTreeMap::new();
        for f in self.faces() {
            out.entry(f.dim()).or_default().push(f.clone());
        }
        out
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && other.faces().binary_search(self).is_ok()
    }

    /// Whether `self` is contained in `other` as a set.
    pub fn is_subset_of(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.contains_int(r))
    }
}
