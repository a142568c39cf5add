//! Presentations of the Chow groups `A_k(X)` by invariant cycles modulo
//! divisors of characters, their Smith reduction, and the toric presentation
//! of a complete fan used as an independent oracle.

use crate::exactlin::{
    integral_pairing_sublattice, pair, perp_lattice, rational_gcd, smith_decomposition, to_rat_vec,
    vec_sub, IntMatrix, IntVec, RatVec, SmithInvariants, Sublattice,
};
use crate::fansy::{mu_of_face, CycleGenerator, FansyError, MarkedFansyDivisor};
use crate::polyhedra::{Cone, Fan, Polyhedron};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error(transparent)]
    Fansy(#[from] FansyError),
    #[error("redirecting {face} to W[{cone}] needs s/mu = {s}/{mu}, which is not an integer")]
    NonIntegralRedirect {
        face: String,
        cone: String,
        s: BigInt,
        mu: BigInt,
    },
    #[error("{source_gen} is not a relation source in degree {k}")]
    NotASource { source_gen: String, k: usize },
    #[error("fan is not complete: {0}")]
    IncompleteFan(String),
    #[error("k = {k} is outside 0..={max}")]
    KOutOfRange { k: usize, max: usize },
}

/// The relations contributed by one invariant cycle of dimension `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationBlock {
    /// The generator of degree `k + 1` carrying the rational functions.
    pub source: CycleGenerator,
    /// Leading rows coming from `Z^P / Z` (only for horizontal sources).
    pub point_rows: usize,
    /// All rows; columns follow the generator order of degree `k`.
    pub rows: Vec<IntVec>,
}

/// The image of a generator in `Z^free + sum Z/d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChowClass {
    pub free: IntVec,
    pub torsion: IntVec,
}

impl ChowClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|x| x.is_zero())
    }
}

/// `A_k(X)` presented by generators, relation rows and their Smith reduction.
#[derive(Debug, Clone)]
pub struct ChowPresentation {
    pub k: usize,
    pub generators: Vec<CycleGenerator>,
    pub relations: IntMatrix,
    pub blocks: Vec<RelationBlock>,
    pub smith: SmithInvariants,
    pub class_map: Vec<ChowClass>,
}

impl ChowPresentation {
    fn assemble(k: usize, generators: Vec<CycleGenerator>, blocks: Vec<RelationBlock>) -> Self {
        let g = generators.len();
        let rows: Vec<IntVec> = blocks.iter().flat_map(|b| b.rows.iter().cloned()).collect();
        let relations = IntMatrix::from_rows(g, rows);
        let d = smith_decomposition(&relations);
        let r = d.rank();
        let class_map = (0..g)
            .map(|i| {
                let row = d.v.row(i);
                ChowClass {
                    free: row[r..].to_vec(),
                    torsion: (0..r)
                        .filter(|&j| !d.diagonal[j].is_one())
                        .map(|j| row[j].mod_floor(&d.diagonal[j]))
                        .collect(),
                }
            })
            .collect();
        let smith = SmithInvariants {
            free_rank: g - r,
            torsion: d.diagonal.into_iter().filter(|x| !x.is_one()).collect(),
        };
        ChowPresentation {
            k,
            generators,
            relations,
            blocks,
            smith,
            class_map,
        }
    }

    /// Class of an integer combination of the generators.
    pub fn class_of(&self, coeffs: &[BigInt]) -> ChowClass {
        assert_eq!(coeffs.len(), self.generators.len());
        let mut free = vec![BigInt::zero(); self.smith.free_rank];
        let mut torsion = vec![BigInt::zero(); self.smith.torsion.len()];
        for (c, cl) in coeffs.iter().zip(&self.class_map) {
            for (a, b) in free.iter_mut().zip(&cl.free) {
                *a += c * b;
            }
            for (a, b) in torsion.iter_mut().zip(&cl.torsion) {
                *a += c * b;
            }
        }
        for (a, d) in torsion.iter_mut().zip(&self.smith.torsion) {
            *a = a.mod_floor(d);
        }
        ChowClass { free, torsion }
    }

    pub fn generator_index(&self, g: &CycleGenerator) -> Option<usize> {
        self.generators.iter().position(|x| x == g)
    }

    /// The `(r, v, t)` counts of the generators.
    pub fn counts(&self) -> (usize, usize, usize) {
        let count = |c: char| self.generators.iter().filter(|g| g.kind() == c).count();
        (count('R'), count('V'), count('T'))
    }
}

/// The primitive functional on a character lattice that vanishes on the
/// characters orthogonal to `direction` and is positive on `direction`.
#[derive(Debug, Clone)]
pub struct OrientedPairing {
    direction: RatVec,
    scale: BigRational,
}

impl OrientedPairing {
    pub fn new(lattice: &Sublattice, direction: RatVec) -> Self {
        let vals: Vec<BigRational> = lattice
            .basis()
            .iter()
            .map(|m| pair(m, &direction))
            .collect();
        let scale = rational_gcd(&vals);
        assert!(!scale.is_zero(), "direction is orthogonal to the lattice");
        OrientedPairing { direction, scale }
    }

    /// Value on any rational character; integral on the lattice.
    pub fn eval(&self, m: &[BigInt]) -> BigRational {
        pair(m, &self.direction) / &self.scale
    }

    fn eval_int(&self, m: &[BigInt]) -> BigInt {
        let v = self.eval(m);
        debug_assert!(v.is_integer());
        v.to_integer()
    }
}

/// Pairing for the step from face `f` to a face `g` containing it in codimension one.
pub fn face_pairing(lattice: &Sublattice, f: &Polyhedron, g: &Polyhedron) -> OrientedPairing {
    OrientedPairing::new(lattice, vec_sub(&g.interior_point(), &f.interior_point()))
}

/// Pairing for the step from cone `tau` to a cone `sigma` containing it in codimension one.
pub fn cone_pairing(lattice: &Sublattice, tau: &Cone, sigma: &Cone) -> OrientedPairing {
    let w = vec_sub(
        &to_rat_vec(&sigma.interior_point()),
        &to_rat_vec(&tau.interior_point()),
    );
    OrientedPairing::new(lattice, w)
}

/// `M(F)`: characters orthogonal to `lin F` pairing integrally with its vertices.
pub fn face_lattice(face: &Polyhedron) -> Sublattice {
    let n = face.ambient();
    let base = perp_lattice(&face.lin_basis(), n);
    integral_pairing_sublattice(&base, &face.vertices()[..1])
}

/// `M(W_σ)`: characters of `M(σ)` pairing integrally with the vertex over `σ` at every point.
pub fn contracted_lattice(x: &MarkedFansyDivisor, sigma: &Cone) -> Result<Sublattice, FansyError> {
    let base = perp_lattice(&sigma.span_basis(), x.rank());
    let mut points: Vec<RatVec> = Vec::new();
    for label in x.points() {
        points.push(x.unique_face_over(sigma, label)?.vertices()[0].clone());
    }
    Ok(integral_pairing_sublattice(&base, &points))
}

fn cones_over<'a>(fan: &'a Fan, tau: &Cone) -> Vec<&'a Cone> {
    fan.cones_of_dim(tau.dim() + 1)
        .into_iter()
        .filter(|s| tau.is_face_of(s))
        .collect()
}

struct Degree<'a> {
    x: &'a MarkedFansyDivisor,
    k: usize,
    generators: Vec<CycleGenerator>,
    index: BTreeMap<CycleGenerator, usize>,
    s: BTreeMap<Cone, BigInt>,
}

impl<'a> Degree<'a> {
    fn new(x: &'a MarkedFansyDivisor, k: usize) -> Result<Self, ChowError> {
        x.ensure_valid()?;
        let generators = x.enumerate_generators(k)?.ordered();
        let index = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        let mut s = BTreeMap::new();
        for g in &generators {
            if let CycleGenerator::T { cone } = g {
                s.insert(cone.clone(), x.s_sigma(cone)?);
            }
        }
        Ok(Degree {
            x,
            k,
            generators,
            index,
            s,
        })
    }

    fn col(&self, g: &CycleGenerator) -> usize {
        self.index[g]
    }

    fn v_col(&self, point: usize, face: &Polyhedron) -> usize {
        self.col(&CycleGenerator::V {
            point,
            label: self.x.points()[point].clone(),
            face: face.clone(),
        })
    }

    fn zero_row(&self) -> IntVec {
        vec![BigInt::zero(); self.generators.len()]
    }

    fn block_v(&self, source: &CycleGenerator) -> Result<RelationBlock, ChowError> {
        let CycleGenerator::V { point, face, .. } = source else {
            unreachable!()
        };
        let x = self.x;
        let lattice = face_lattice(face);
        let mut targets: Vec<(OrientedPairing, usize, BigInt)> = Vec::new();
        for g in x.complexes()[*point].cofaces(face) {
            let pairing = face_pairing(&lattice, face, g);
            if x.is_marked(g.tail()) {
                let sigma = g.tail();
                let s = &self.s[sigma];
                let mu = mu_of_face(g);
                if !s.is_multiple_of(&mu) {
                    return Err(ChowError::NonIntegralRedirect {
                        face: g.to_string(),
                        cone: sigma.to_string(),
                        s: s.clone(),
                        mu,
                    });
                }
                let col = self.col(&CycleGenerator::T {
                    cone: sigma.clone(),
                });
                targets.push((pairing, col, s / mu));
            } else {
                targets.push((pairing, self.v_col(*point, g), BigInt::one()));
            }
        }
        let rows = lattice
            .basis()
            .iter()
            .map(|m| {
                let mut row = self.zero_row();
                for (pairing, col, factor) in &targets {
                    row[*col] += pairing.eval_int(m) * factor;
                }
                row
            })
            .collect();
        Ok(RelationBlock {
            source: source.clone(),
            point_rows: 0,
            rows,
        })
    }

    fn block_r(&self, source: &CycleGenerator) -> RelationBlock {
        let CycleGenerator::R { cone: tau } = source else {
            unreachable!()
        };
        let x = self.x;
        let n = x.rank();
        // faces of each fiber that are translates of tau, with their multiplicities
        let per_point: Vec<Vec<(usize, &Polyhedron, BigInt)>> = x
            .complexes()
            .iter()
            .enumerate()
            .map(|(p, c)| {
                c.faces_of_dim(tau.dim())
                    .into_iter()
                    .filter(|f| f.face.tail() == tau)
                    .map(|f| (self.v_col(p, &f.face), &f.face, mu_of_face(&f.face)))
                    .collect()
            })
            .collect();
        let mut rows = Vec::new();
        let last = per_point.len() - 1;
        for p in 0..last {
            let mut row = self.zero_row();
            for (col, _, mu) in &per_point[p] {
                row[*col] += mu;
            }
            for (col, _, mu) in &per_point[last] {
                row[*col] -= mu;
            }
            rows.push(row);
        }
        let point_rows = rows.len();
        let lattice = perp_lattice(&tau.span_basis(), n);
        let uncontracted: Vec<(OrientedPairing, usize)> = cones_over(x.tailfan(), tau)
            .into_iter()
            .filter(|s| !x.is_marked(s))
            .map(|s| {
                (
                    cone_pairing(&lattice, tau, s),
                    self.col(&CycleGenerator::R { cone: s.clone() }),
                )
            })
            .collect();
        for m in lattice.basis() {
            let mut row = self.zero_row();
            for faces in &per_point {
                for (col, f, mu) in faces {
                    let v = pair(m, &f.vertices()[0]);
                    debug_assert!((&v * BigRational::from_integer(mu.clone())).is_integer());
                    row[*col] += (v * BigRational::from_integer(mu.clone())).to_integer();
                }
            }
            for (pairing, col) in &uncontracted {
                row[*col] += pairing.eval_int(m);
            }
            rows.push(row);
        }
        RelationBlock {
            source: source.clone(),
            point_rows,
            rows,
        }
    }

    fn block_t(&self, source: &CycleGenerator) -> Result<RelationBlock, ChowError> {
        let CycleGenerator::T { cone: tau } = source else {
            unreachable!()
        };
        let x = self.x;
        let lattice = contracted_lattice(x, tau)?;
        let targets: Vec<(OrientedPairing, usize)> = cones_over(x.tailfan(), tau)
            .into_iter()
            .map(|s| {
                (
                    cone_pairing(&lattice, tau, s),
                    self.col(&CycleGenerator::T { cone: s.clone() }),
                )
            })
            .collect();
        let rows = lattice
            .basis()
            .iter()
            .map(|m| {
                let mut row = self.zero_row();
                for (pairing, col) in &targets {
                    row[*col] += pairing.eval_int(m);
                }
                row
            })
            .collect();
        Ok(RelationBlock {
            source: source.clone(),
            point_rows: 0,
            rows,
        })
    }

    fn sources(&self) -> Result<Vec<CycleGenerator>, ChowError> {
        if self.k > self.x.rank() {
            return Ok(Vec::new());
        }
        Ok(self.x.enumerate_generators(self.k + 1)?.ordered())
    }

    fn checked_block(&self, source: &CycleGenerator) -> Result<RelationBlock, ChowError> {
        if !self.sources()?.contains(source) {
            return Err(ChowError::NotASource {
                source_gen: source.to_string(),
                k: self.k,
            });
        }
        self.block(source)
    }

    fn block(&self, source: &CycleGenerator) -> Result<RelationBlock, ChowError> {
        match source {
            CycleGenerator::V { .. } => self.block_v(source),
            CycleGenerator::R { .. } => Ok(self.block_r(source)),
            CycleGenerator::T { .. } => self.block_t(source),
        }
    }
}

fn check_k(x: &MarkedFansyDivisor, k: usize) -> Result<(), ChowError> {
    if k > x.rank() + 1 {
        return Err(ChowError::KOutOfRange {
            k,
            max: x.rank() + 1,
        });
    }
    Ok(())
}

/// Relations from the characters of a face `F ∈ V_{k+1}`.
pub fn relation_block_v(
    x: &MarkedFansyDivisor,
    k: usize,
    source: &CycleGenerator,
) -> Result<RelationBlock, ChowError> {
    check_k(x, k)?;
    let d = Degree::new(x, k)?;
    match source {
        CycleGenerator::V { .. } => d.checked_block(source),
        _ => Err(ChowError::NotASource {
            source_gen: source.to_string(),
            k,
        }),
    }
}

/// Relations on the horizontal cycle of a cone `τ ∈ R_{k+1}`.
pub fn relation_block_r(
    x: &MarkedFansyDivisor,
    k: usize,
    source: &CycleGenerator,
) -> Result<RelationBlock, ChowError> {
    check_k(x, k)?;
    let d = Degree::new(x, k)?;
    match source {
        CycleGenerator::R { .. } => d.checked_block(source),
        _ => Err(ChowError::NotASource {
            source_gen: source.to_string(),
            k,
        }),
    }
}

/// Relations on the contracted cycle `W_τ` of a cone `τ ∈ T_{k+1}`.
pub fn relation_block_t(
    x: &MarkedFansyDivisor,
    k: usize,
    source: &CycleGenerator,
) -> Result<RelationBlock, ChowError> {
    check_k(x, k)?;
    let d = Degree::new(x, k)?;
    match source {
        CycleGenerator::T { .. } => d.checked_block(source),
        _ => Err(ChowError::NotASource {
            source_gen: source.to_string(),
            k,
        }),
    }
}

/// The presentation of `A_k(X)` for `0 <= k <= n + 1`.
pub fn presentation(x: &MarkedFansyDivisor, k: usize) -> Result<ChowPresentation, ChowError> {
    check_k(x, k)?;
    let d = Degree::new(x, k)?;
    let blocks = d
        .sources()?
        .iter()
        .map(|s| d.block(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChowPresentation::assemble(k, d.generators, blocks))
}

/// Presentations for every `k` from `0` to `n + 1`.
pub fn all_presentations(x: &MarkedFansyDivisor) -> Result<Vec<ChowPresentation>, ChowError> {
    (0..=x.rank() + 1).map(|k| presentation(x, k)).collect()
}

/// The toric presentation of `A_k` of a complete fan: orbit closures of the
/// cones of codimension `k` modulo divisors of characters on those of
/// codimension `k - 1`. Generators are reported as `R` cycles.
pub fn fulton_sturmfels(fan: &Fan, k: usize) -> Result<ChowPresentation, ChowError> {
    fan.check_complete()
        .map_err(|e| ChowError::IncompleteFan(e.to_string()))?;
    let m = fan.ambient();
    if k > m {
        return Err(ChowError::KOutOfRange { k, max: m });
    }
    let generators: Vec<CycleGenerator> = fan
        .cones_of_dim(m - k)
        .into_iter()
        .map(|c| CycleGenerator::R { cone: c.clone() })
        .collect();
    let index: BTreeMap<&Cone, usize> = generators
        .iter()
        .enumerate()
        .map(|(i, g)| match g {
            CycleGenerator::R { cone } => (cone, i),
            _ => unreachable!(),
        })
        .collect();
    let mut blocks = Vec::new();
    if k < m {
        for tau in fan.cones_of_dim(m - k - 1) {
            let lattice = perp_lattice(&tau.span_basis(), m);
            let targets: Vec<(OrientedPairing, usize)> = cones_over(fan, tau)
                .into_iter()
                .map(|s| (cone_pairing(&lattice, tau, s), index[s]))
                .collect();
            let rows = lattice
                .basis()
                .iter()
                .map(|mm| {
                    let mut row = vec![BigInt::zero(); generators.len()];
                    for (pairing, col) in &targets {
                        row[*col] += pairing.eval_int(mm);
                    }
                    row
                })
                .collect();
            blocks.push(RelationBlock {
                source: CycleGenerator::R { cone: tau.clone() },
                point_rows: 0,
                rows,
            });
        }
    }
    Ok(ChowPresentation::assemble(k, generators, blocks))
}
