//! Constructors for marked fansy divisors: toric downgrades, projectivized
//! rank-two toric vector bundles given by Klyachko filtrations, and the
//! bundled fixtures.

use crate::exactlin::{int_vec, solve_square, IntMatrix, IntVec, RatVec};
use crate::fansy::{FansyError, MarkedFansyDivisor};
use crate::polyhedra::{Cone, Fan, GeometryError, PolyhedralComplex, Polyhedron};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("fan is not complete: {0}")]
    IncompleteFan(String),
    #[error("basis change is not unimodular")]
    NotUnimodular,
    #[error("base fan is not smooth at cone {0}")]
    NonSmoothBase(String),
    #[error("inconsistent filtrations: {0}")]
    InconsistentFiltrations(String),
    #[error("no filtration or twist given for ray {0}")]
    MissingRay(String),
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Fansy(#[from] FansyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn fmt_vec(v: &[BigInt]) -> String {
    let c: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", c.join(","))
}

fn origin(n: usize) -> RatVec {
    vec![BigRational::zero(); n]
}

/// A complete fan in rank `n + 1` and an optional unimodular change of
/// coordinates; after it, the last coordinate is the direction forgotten by
/// the downgrade.
#[derive(Debug, Clone)]
pub struct DowngradeInput {
    pub fan: Fan,
    pub basis_change: Option<IntMatrix>,
}

impl DowngradeInput {
    pub fn new(fan: Fan) -> Self {
        DowngradeInput {
            fan,
            basis_change: None,
        }
    }

    /// The fan in the coordinates used for the splitting.
    pub fn split_fan(&self) -> Result<Fan, BuildError> {
        let Some(u) = &self.basis_change else {
            return Ok(self.fan.clone());
        };
        let m = self.fan.ambient();
        if u.rows() != m || u.cols() != m || !u.det().abs().is_one() {
            return Err(BuildError::NotUnimodular);
        }
        let ut = u.transpose();
        let cones = self
            .fan
            .maximal_cones()
            .iter()
            .map(|c| Cone::new(m, c.rays().iter().map(|r| ut.left_mul_vec(r)).collect()))
            .collect();
        Ok(Fan::new(m, cones))
    }
}

fn slice_at(cone: &Cone, height: i64) -> Result<Polyhedron, BuildError> {
    let n = cone.ambient() - 1;
    let h = BigInt::from(height);
    let ineqs: Vec<(RatVec, BigRational)> = cone
        .facets()
        .iter()
        .map(|a| {
            let lin = a[..n]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            (lin, BigRational::from_integer(-(&a[n] * &h)))
        })
        .collect();
    Ok(Polyhedron::from_inequalities(n, &ineqs, &[])?)
}

fn drop_last(c: &Cone) -> Cone {
    let n = c.ambient() - 1;
    Cone::new(n, c.rays().iter().map(|r| r[..n].to_vec()).collect())
}

fn hyperplane_section(c: &Cone) -> Cone {
    let m = c.ambient();
    let mut e = vec![BigInt::zero(); m];
    e[m - 1] = BigInt::one();
    drop_last(&c.intersect(&Cone::from_inequalities(m, &[], &[e])))
}

fn crosses(c: &Cone) -> bool {
    let last = c.ambient() - 1;
    c.rays().iter().any(|r| r[last].is_positive()) && c.rays().iter().any(|r| r[last].is_negative())
}

/// Restricts the torus action of a toric variety to the subtorus forgetting
/// the last coordinate. The special points are `0` and `inf`.
pub fn downgrade(input: &DowngradeInput) -> Result<MarkedFansyDivisor, BuildError> {
    input
        .fan
        .check_complete()
        .map_err(|e| BuildError::IncompleteFan(e.to_string()))?;
    let fan = input.split_fan()?;
    let m = fan.ambient();
    if m == 0 {
        return Err(BuildError::Malformed(
            "downgrade needs rank at least 1".into(),
        ));
    }
    let n = m - 1;
    let mut points = Vec::new();
    for (label, height) in [("0", 1i64), ("inf", -1i64)] {
        let mut cells = Vec::new();
        for c in fan.maximal_cones() {
            if c.rays()
                .iter()
                .any(|r| r[n].signum() == BigInt::from(height))
            {
                cells.push(slice_at(c, height)?);
            }
        }
        points.push((label.to_string(), PolyhedralComplex::new(n, cells)));
    }
    let marked: Vec<Cone> = fan
        .cones()
        .iter()
        .filter(|c| crosses(c))
        .map(hyperplane_section)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(MarkedFansyDivisor::new(n, points, marked)?)
}

/// Fan of `P(O(D_a) + O(D_b))` over a complete base fan, where each ray
/// `rho` carries the coefficients `a_rho`, `b_rho`.
pub fn projectivized_fan(base: &Fan, twists: &[(IntVec, i64, i64)]) -> Result<Fan, BuildError> {
    let n = base.ambient();
    let lookup: BTreeMap<&IntVec, i64> = twists.iter().map(|(r, a, b)| (r, a - b)).collect();
    let lift = |r: &IntVec| -> Result<IntVec, BuildError> {
        let t = lookup
            .get(r)
            .ok_or_else(|| BuildError::MissingRay(fmt_vec(r)))?;
        let mut w = r.clone();
        w.push(BigInt::from(*t));
        Ok(w)
    };
    let mut up = vec![BigInt::zero(); n + 1];
    up[n] = BigInt::one();
    let down: IntVec = up.iter().map(|x| -x).collect();
    let mut cones = Vec::new();
    for s in base.maximal_cones() {
        let lifted: Vec<IntVec> = s.rays().iter().map(lift).collect::<Result<_, _>>()?;
        for e in [&up, &down] {
            let mut g = lifted.clone();
            g.push(e.clone());
            cones.push(Cone::new(n + 1, g));
        }
    }
    Ok(Fan::new(n + 1, cones))
}

/// The Klyachko filtration of the two-dimensional fiber along one ray:
/// the whole fiber for `j <= full_upto`, the named line for
/// `full_upto < j <= line_upto`, and zero above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayFiltration {
    pub ray: IntVec,
    pub full_upto: i64,
    pub line: Option<(String, i64)>,
}

impl RayFiltration {
    /// `(value of the character of the line, value of the complementary character)`.
    fn values(&self) -> (i64, i64) {
        match &self.line {
            Some((_, b)) => (*b, self.full_upto),
            None => (self.full_upto, self.full_upto),
        }
    }
}

/// Rank-two toric vector bundle on a smooth complete toric variety.
#[derive(Debug, Clone)]
pub struct KlyachkoBundle {
    pub base: Fan,
    pub filtrations: Vec<RayFiltration>,
}

/// Sign pattern of `u_1 - u_2` on a cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HijClass {
    /// `u_1 = u_2` on the cone.
    H,
    /// `u_1 - u_2` takes both signs on the cone.
    I,
    /// `u_1 - u_2` has one sign on the cone and is not zero.
    J,
}

impl fmt::Display for HijClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl KlyachkoBundle {
    /// Checks smoothness, coverage of every ray, the shape of each
    /// filtration and that each maximal cone sees at most two lines.
    pub fn new(base: Fan, filtrations: Vec<RayFiltration>) -> Result<Self, BuildError> {
        base.check_complete()
            .map_err(|e| BuildError::IncompleteFan(e.to_string()))?;
        let b = KlyachkoBundle { base, filtrations };
        for f in &b.filtrations {
            if let Some((label, upto)) = &f.line {
                if *upto <= f.full_upto {
                    return Err(BuildError::InconsistentFiltrations(format!(
                        "ray {}: line {label} must persist above the full step",
                        fmt_vec(&f.ray)
                    )));
                }
                if label == "full" || label == "zero" {
                    return Err(BuildError::InconsistentFiltrations(format!(
                        "reserved line label {label}"
                    )));
                }
            }
        }
        for s in b.base.maximal_cones() {
            let rays = s.rays();
            if rays.len() != b.base.ambient()
                || !IntMatrix::from_rows(b.base.ambient(), rays.to_vec())
                    .det()
                    .abs()
                    .is_one()
            {
                return Err(BuildError::NonSmoothBase(s.to_string()));
            }
            for r in rays {
                b.filtration(r)?;
            }
            if b.lines_on(s)?.len() > 2 {
                return Err(BuildError::InconsistentFiltrations(format!(
                    "more than two lines on cone {s}"
                )));
            }
        }
        Ok(b)
    }

    pub fn filtration(&self, ray: &[BigInt]) -> Result<&RayFiltration, BuildError> {
        self.filtrations
            .iter()
            .find(|f| f.ray == ray)
            .ok_or_else(|| BuildError::MissingRay(fmt_vec(ray)))
    }

    /// Distinct lines on the rays of a cone, in label order.
    pub fn lines_on(&self, c: &Cone) -> Result<Vec<String>, BuildError> {
        let mut out = BTreeSet::new();
        for r in c.rays() {
            if let Some((l, _)) = &self.filtration(r)?.line {
                out.insert(l.clone());
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Distinct lines, in order of first appearance along the filtration list.
    pub fn special_points(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for f in &self.filtrations {
            if let Some((l, _)) = &f.line {
                if !out.contains(l) {
                    out.push(l.clone());
                }
            }
        }
        out
    }

    /// The character `u_A - u_B` on a smooth maximal cone, where `A` is the
    /// first line on it (`B` the second, or any other line).
    fn difference_character(&self, s: &Cone, a: &str) -> Result<RatVec, BuildError> {
        let rhs: Vec<BigInt> = s
            .rays()
            .iter()
            .map(|r| {
                let f = self.filtration(r)?;
                let (line_val, other_val) = f.values();
                Ok(BigInt::from(match &f.line {
                    Some((l, _)) if l == a => line_val - other_val,
                    Some(_) => other_val - line_val,
                    None => 0,
                }))
            })
            .collect::<Result<_, BuildError>>()?;
        solve_square(s.rays(), &rhs).ok_or_else(|| BuildError::NonSmoothBase(s.to_string()))
    }
}

pub fn classify_hij(b: &KlyachkoBundle, sigma: &Cone) -> Result<HijClass, BuildError> {
    Ok(match b.lines_on(sigma)?.len() {
        0 => HijClass::H,
        1 => HijClass::J,
        2 => HijClass::I,
        _ => {
            return Err(BuildError::InconsistentFiltrations(format!(
                "more than two lines on cone {sigma}"
            )))
        }
    })
}

fn cut(sigma: &Cone, d: &RatVec, sign: i64, bound: i64) -> Result<Polyhedron, BuildError> {
    // sigma cap { sign * <d, x> >= bound }
    let n = sigma.ambient();
    let mut ineqs: Vec<(RatVec, BigRational)> = sigma
        .facets()
        .iter()
        .map(|a| (crate::exactlin::to_rat_vec(a), BigRational::zero()))
        .collect();
    let s = BigRational::from_integer(BigInt::from(sign));
    ineqs.push((
        d.iter().map(|x| x * &s).collect(),
        BigRational::from_integer(BigInt::from(bound)),
    ));
    Ok(Polyhedron::from_inequalities(n, &ineqs, &[])?)
}

/// Marked fansy divisor of the projectivization of a rank-two bundle.
pub fn bundle_rank2(b: &KlyachkoBundle) -> Result<MarkedFansyDivisor, BuildError> {
    let n = b.base.ambient();
    let mut labels = b.special_points();
    let mut aux = 1;
    while labels.len() < 2 {
        let l = format!("aux{aux}");
        aux += 1;
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    let mut cells: BTreeMap<&str, Vec<Polyhedron>> =
        labels.iter().map(|l| (l.as_str(), Vec::new())).collect();
    let o = origin(n);
    for s in b.base.maximal_cones() {
        let lines = b.lines_on(s)?;
        match lines.len() {
            0 => {
                for v in cells.values_mut() {
                    v.push(Polyhedron::from_cone(&o, s));
                }
            }
            1 => {
                let d = b.difference_character(s, &lines[0])?;
                for (l, v) in cells.iter_mut() {
                    if *l == lines[0] {
                        v.push(cut(s, &d, 1, 1)?);
                        v.push(cut(s, &d, -1, -1)?);
                    } else {
                        v.push(Polyhedron::from_cone(&o, s));
                    }
                }
            }
            _ => {
                let d = b.difference_character(s, &lines[0])?;
                for (l, v) in cells.iter_mut() {
                    if *l == lines[0] {
                        v.push(cut(s, &d, 1, 1)?);
                        v.push(cut(s, &d, -1, -1)?);
                    } else if *l == lines[1] {
                        v.push(cut(s, &d, -1, 1)?);
                        v.push(cut(s, &d, 1, -1)?);
                    } else {
                        v.push(cut(s, &d, 1, 0)?);
                        v.push(cut(s, &d, -1, 0)?);
                    }
                }
            }
        }
    }
    let mut by_label: BTreeMap<String, Vec<Polyhedron>> =
        cells.into_iter().map(|(l, v)| (l.to_string(), v)).collect();
    let points: Vec<(String, PolyhedralComplex)> = labels
        .iter()
        .map(|l| {
            let v = by_label.remove(l).unwrap_or_default();
            (l.clone(), PolyhedralComplex::new(n, v))
        })
        .collect();
    let tailfan = points[0].1.tailfan()?;
    let base_cones: BTreeSet<&Cone> = b.base.cones().iter().collect();
    let mut marked = Vec::new();
    for tau in tailfan.cones() {
        let uncontracted = base_cones.contains(tau) && b.lines_on(tau)?.is_empty();
        if !uncontracted {
            marked.push(tau.clone());
        }
    }
    Ok(MarkedFansyDivisor::with_tailfan(
        n, tailfan, points, marked,
    )?)
}

/// `(r_k, v_k, t_k)` read off the H/I/J classes of the base cones.
///
/// A cone of class H is a face of every fiber, so it contributes once per
/// special point.
pub fn predicted_counts(b: &KlyachkoBundle, k: usize) -> Result<(usize, usize, usize), BuildError> {
    let n = b.base.ambient();
    if k > n {
        return Err(BuildError::Malformed(format!("k = {k} exceeds n = {n}")));
    }
    let count = |d: usize, class: HijClass| -> Result<usize, BuildError> {
        let mut c = 0;
        for s in b.base.cones_of_dim(d) {
            if classify_hij(b, s)? == class {
                c += 1;
            }
        }
        Ok(c)
    };
    let p = b.special_points().len().max(2);
    if k == n {
        return Ok((count(1, HijClass::H)?, count(1, HijClass::J)? + p, 0));
    }
    let hi = n - k + 1;
    let lo = n - k;
    let r = count(hi, HijClass::H)?;
    let v = count(hi, HijClass::J)? + count(lo, HijClass::J)? + p * count(lo, HijClass::H)?;
    let t = count(hi, HijClass::I)? + count(lo, HijClass::J)? + 2 * count(lo, HijClass::I)?;
    Ok((r, v, t))
}

pub fn p2_fan() -> Fan {
    Fan::new(
        2,
        vec![
            Cone::from_i64(2, &[&[1, 0], &[0, 1]]),
            Cone::from_i64(2, &[&[0, 1], &[-1, -1]]),
            Cone::from_i64(2, &[&[-1, -1], &[1, 0]]),
        ],
    )
}

pub fn p1p1_fan() -> Fan {
    Fan::new(
        2,
        vec![
            Cone::from_i64(2, &[&[1, 0], &[0, 1]]),
            Cone::from_i64(2, &[&[0, 1], &[-1, 0]]),
            Cone::from_i64(2, &[&[-1, 0], &[0, -1]]),
            Cone::from_i64(2, &[&[0, -1], &[1, 0]]),
        ],
    )
}

fn line(ray: &[i64], label: &str) -> RayFiltration {
    RayFiltration {
        ray: int_vec(ray),
        full_upto: 0,
        line: Some((label.to_string(), 1)),
    }
}

/// The bundle on `P^1 x P^1` with lines `0`, `1`, `inf` on `e1`, `e2`, `-e1`
/// and no line on `-e2`.
pub fn p1p1_example_bundle() -> KlyachkoBundle {
    KlyachkoBundle::new(
        p1p1_fan(),
        vec![
            line(&[1, 0], "0"),
            line(&[0, 1], "1"),
            line(&[-1, 0], "inf"),
            RayFiltration {
                ray: int_vec(&[0, -1]),
                full_upto: 0,
                line: None,
            },
        ],
    )
    .expect("example bundle is valid")
}

/// Twists `(ray, a, b)` of `P(O(D_a) + O(D_b))` over `P^2` for the two bundles of the fixtures.
pub fn p2_twists(name: &str) -> Option<Vec<(IntVec, i64, i64)>> {
    let rays = [int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -1])];
    let (a, b) = match name {
        "p2_E" => ([1, 0, 0], [0, 0, 0]),
        "p2_F" => ([1, 1, 0], [0, 0, 1]),
        _ => return None,
    };
    Some(
        rays.into_iter()
            .zip(a.into_iter().zip(b))
            .map(|(r, (a, b))| (r, a, b))
            .collect(),
    )
}

pub const FIXTURE_NAMES: [&str; 4] = ["gr24", "p1p1_bundle", "p2_E", "p2_F"];

pub const GR24_JSON: &str = include_str!("../fixtures/gr24.json");

pub fn fixture(name: &str) -> Result<MarkedFansyDivisor, BuildError> {
    match name {
        "gr24" => crate::document::InputDocument::from_json(GR24_JSON)
            .map_err(|e| BuildError::Malformed(e.to_string()))?
            .build(),
        "p1p1_bundle" => bundle_rank2(&p1p1_example_bundle()),
        "p2_E" | "p2_F" => {
            let twists = p2_twists(name).expect("known name");
            downgrade(&DowngradeInput::new(projectivized_fan(&p2_fan(), &twists)?))
        }
        _ => Err(BuildError::UnknownFixture(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_vec;

    #[test]
    fn p2_downgrade_marks_crossing_section() {
        // P^2 with the second coordinate forgotten
        let x = downgrade(&DowngradeInput::new(p2_fan())).unwrap();
        assert!(x.validate().is_valid(), "{}", x.validate());
        // Cone((0,1),(-1,-1)) crosses; its section is the ray (-1)
        assert!(x.is_marked(&Cone::from_i64(1, &[&[-1]])));
        // ray (1,0) lies in H and stays unmarked
        assert!(!x.is_marked(&Cone::from_i64(1, &[&[1]])));
    }

    #[test]
    fn hij_examples() {
        let b = p1p1_example_bundle();
        let q1 = Cone::from_i64(2, &[&[1, 0], &[0, 1]]);
        let q4 = Cone::from_i64(2, &[&[0, -1], &[1, 0]]);
        assert_eq!(classify_hij(&b, &q1).unwrap(), HijClass::I);
        assert_eq!(classify_hij(&b, &q4).unwrap(), HijClass::J);
        assert_eq!(
            classify_hij(&b, &Cone::from_i64(2, &[&[0, -1]])).unwrap(),
            HijClass::H
        );
    }

    #[test]
    fn example_bundle_fibers() {
        let x = bundle_rank2(&p1p1_example_bundle()).unwrap();
        assert!(x.validate().is_valid(), "{}", x.validate());
        assert_eq!(x.points(), &["0", "1", "inf"]);
        let verts: Vec<RatVec> = x
            .complex("0")
            .unwrap()
            .faces_of_dim(0)
            .iter()
            .map(|f| f.face.vertices()[0].clone())
            .collect();
        assert_eq!(verts, vec![rat_vec(&[0, 0]), rat_vec(&[1, 0])]);
    }

    #[test]
    fn trivial_bundle_has_no_marks() {
        let b = KlyachkoBundle::new(
            p2_fan(),
            [[1, 0], [0, 1], [-1, -1]]
                .iter()
                .map(|r| RayFiltration {
                    ray: int_vec(r),
                    full_upto: 0,
                    line: None,
                })
                .collect(),
        )
        .unwrap();
        let x = bundle_rank2(&b).unwrap();
        assert!(x.marked().is_empty());
        for k in 0..=2 {
            assert_eq!(predicted_counts(&b, k).unwrap().2, 0);
        }
    }

    #[test]
    fn non_smooth_base_rejected() {
        let fan = Fan::new(
            2,
            vec![
                Cone::from_i64(2, &[&[1, 0], &[1, 2]]),
                Cone::from_i64(2, &[&[1, 2], &[-1, 0]]),
                Cone::from_i64(2, &[&[-1, 0], &[0, -1]]),
                Cone::from_i64(2, &[&[0, -1], &[1, 0]]),
            ],
        );
        let filtrations = [[1, 0], [1, 2], [-1, 0], [0, -1]]
            .iter()
            .map(|r| RayFiltration {
                ray: int_vec(r),
                full_upto: 0,
                line: None,
            })
            .collect();
        assert!(matches!(
            KlyachkoBundle::new(fan, filtrations),
            Err(BuildError::NonSmoothBase(_))
        ));
    }
}
