//! Shared builders for integration tests: the rule-based Gr(2,4) datum and
//! random complete fans and bundles.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use tvchow::build::{KlyachkoBundle, RayFiltration};
use tvchow::chow::{all_presentations, cone_pairing, face_lattice, face_pairing, fulton_sturmfels};
use tvchow::exactlin::{int_vec, perp_lattice, IntMatrix, IntVec, RatVec};
use tvchow::fansy::mu_of_face;
use tvchow::{Cone, Fan, MarkedFansyDivisor, PolyhedralComplex, Polyhedron, SmithInvariants};

fn rv(v: &[i64]) -> RatVec {
    v.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

/// Tailfan of the Gr(2,4) example in the basis `e1, e2, e3` with `e0 = -e1 - e2 - e3`.
pub fn gr24_tailfan() -> Fan {
    let e: [[i64; 3]; 4] = [[-1, -1, -1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let neg = |v: [i64; 3]| [-v[0], -v[1], -v[2]];
    let mut cones = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&x| x != i && x != j).collect();
            let gens = vec![
                int_vec(&e[i]),
                int_vec(&e[j]),
                int_vec(&neg(e[rest[0]])),
                int_vec(&neg(e[rest[1]])),
            ];
            cones.push(Cone::new(3, gens));
        }
    }
    Fan::new(3, cones)
}

/// Fiber obtained from the tailfan by replacing the origin with the edge `[a, b]`.
pub fn edge_fiber(fan: &Fan, a: &[i64], b: &[i64]) -> PolyhedralComplex {
    let d: IntVec = a.iter().zip(b).map(|(x, y)| BigInt::from(y - x)).collect();
    let minus_d: IntVec = d.iter().map(|x| -x).collect();
    let cells = fan
        .maximal_cones()
        .iter()
        .map(|s| {
            let pts = if s.contains_int(&minus_d) {
                vec![rv(a)]
            } else if s.contains_int(&d) {
                vec![rv(b)]
            } else {
                vec![rv(a), rv(b)]
            };
            Polyhedron::new(3, &pts, s.rays()).unwrap()
        })
        .collect();
    PolyhedralComplex::new(3, cells)
}

pub fn gr24_by_rule() -> MarkedFansyDivisor {
    let fan = gr24_tailfan();
    let points = vec![
        ("0".to_string(), edge_fiber(&fan, &[0, 0, 0], &[-1, -1, 0])),
        ("1".to_string(), edge_fiber(&fan, &[0, 0, 0], &[-1, 0, -1])),
        ("inf".to_string(), edge_fiber(&fan, &[1, 1, 1], &[1, 0, 0])),
    ];
    let marked = fan
        .cones()
        .iter()
        .filter(|c| !c.is_zero())
        .cloned()
        .collect();
    MarkedFansyDivisor::with_tailfan(3, fan, points, marked).unwrap()
}

/// Random unimodular matrix as a product of elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..n * 2 {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c = BigInt::from(rng.gen_range(-1i64..=1));
        let mut e = IntMatrix::identity(n);
        e.set(i, j, c);
        m = e.mul(&m);
    }
    if rng.gen_bool(0.5) {
        let mut p = IntMatrix::identity(n);
        p.set(0, 0, BigInt::from(-1));
        m = p.mul(&m);
    }
    m
}

fn apply(m: &IntMatrix, v: &IntVec) -> IntVec {
    m.transpose().left_mul_vec(v)
}

fn cross(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: &[i64; 3], b: &[i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Face fan of a random integral polytope containing the origin in its
/// interior: the maximal cones are the cones over the facets, which gives a
/// complete rank-3 fan with at most `max_rays` rays.
pub fn random_complete_fan3<R: Rng>(rng: &mut R, max_rays: usize) -> Fan {
    loop {
        let mut pts: Vec<[i64; 3]> = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]];
        let extra = rng.gen_range(0..=max_rays.saturating_sub(4));
        for _ in 0..extra {
            let p = [
                rng.gen_range(-2..=2),
                rng.gen_range(-2..=2),
                rng.gen_range(-2..=2),
            ];
            if p != [0, 0, 0] {
                pts.push(p);
            }
        }
        pts.shuffle(rng);
        // facets of the convex hull by brute force over triples
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    let u = [
                        pts[j][0] - pts[i][0],
                        pts[j][1] - pts[i][1],
                        pts[j][2] - pts[i][2],
                    ];
                    let w = [
                        pts[k][0] - pts[i][0],
                        pts[k][1] - pts[i][1],
                        pts[k][2] - pts[i][2],
                    ];
                    let nrm = cross(&u, &w);
                    if nrm == [0, 0, 0] {
                        continue;
                    }
                    let c = dot3(&nrm, &pts[i]);
                    let signs: Vec<i64> =
                        pts.iter().map(|p| (dot3(&nrm, p) - c).signum()).collect();
                    let (nrm, c, signs) = if signs.iter().all(|&s| s <= 0) {
                        (nrm, c, signs)
                    } else if signs.iter().all(|&s| s >= 0) {
                        (
                            [-nrm[0], -nrm[1], -nrm[2]],
                            -c,
                            signs.iter().map(|s| -s).collect(),
                        )
                    } else {
                        continue;
                    };
                    let _ = nrm;
                    if c <= 0 {
                        continue;
                    }
                    let on: Vec<usize> = (0..pts.len()).filter(|&t| signs[t] == 0).collect();
                    if !facets.contains(&on) {
                        facets.push(on);
                    }
                }
            }
        }
        let cones: Vec<Cone> = facets
            .iter()
            .map(|f| Cone::new(3, f.iter().map(|&t| int_vec(&pts[t])).collect()))
            .collect();
        let fan = Fan::new(3, cones);
        if fan.rays().len() <= max_rays && fan.check_complete().is_ok() {
            let u = random_unimodular(rng, 3);
            let moved = fan
                .maximal_cones()
                .iter()
                .map(|c| Cone::new(3, c.rays().iter().map(|r| apply(&u, r)).collect()))
                .collect();
            return Fan::new(3, moved);
        }
    }
}

/// A random bundle over the given smooth complete surface fan. Every
/// assignment is compatible since maximal cones have only two rays.
pub fn random_bundle<R: Rng>(rng: &mut R, base: &Fan) -> KlyachkoBundle {
    let labels = ["0", "1", "inf", "2"];
    let filtrations = base
        .rays()
        .iter()
        .map(|r| {
            let full_upto = rng.gen_range(-1..=1);
            let line = if rng.gen_bool(0.65) {
                let l = labels[rng.gen_range(0..labels.len())];
                Some((l.to_string(), full_upto + rng.gen_range(1..=2)))
            } else {
                None
            };
            RayFiltration {
                ray: r.rays()[0].clone(),
                full_upto,
                line,
            }
        })
        .collect();
    KlyachkoBundle::new(base.clone(), filtrations).unwrap()
}

/// Smith invariants of every degree `0..=n+1`.
pub fn all_smith(x: &MarkedFansyDivisor) -> Vec<SmithInvariants> {
    all_presentations(x)
        .unwrap()
        .into_iter()
        .map(|p| p.smith)
        .collect()
}

/// Smith invariants of the toric presentation in every degree.
pub fn oracle_smith(fan: &Fan) -> Vec<SmithInvariants> {
    (0..=fan.ambient())
        .map(|k| fulton_sturmfels(fan, k).unwrap().smith)
        .collect()
}

/// Checks `mu(G) v_{G,H} = mu(H) v_{tau,sigma}` over every nested pair of
/// translated cones `G ⊂ H` in every fiber; returns the number of pairs and
/// the failures.
pub fn lattice_index_pairs(x: &MarkedFansyDivisor) -> (usize, Vec<String>) {
    let n = x.rank();
    let mut count = 0;
    let mut failures = Vec::new();
    for (label, c) in x.points().iter().zip(x.complexes()) {
        let translates: Vec<&Polyhedron> = c
            .faces()
            .iter()
            .map(|f| &f.face)
            .filter(|f| f.dim() == Some(f.tail().dim()))
            .collect();
        for g in &translates {
            let tau = g.tail();
            let m_tau = perp_lattice(&tau.span_basis(), n);
            for h in c.cofaces(g) {
                let sigma = h.tail();
                if h.dim() != Some(sigma.dim()) || sigma.dim() != tau.dim() + 1 {
                    continue;
                }
                count += 1;
                let f_gh = face_pairing(&face_lattice(g), g, h);
                let f_ts = cone_pairing(&m_tau, tau, sigma);
                let mu_g = BigRational::from_integer(mu_of_face(g));
                let mu_h = BigRational::from_integer(mu_of_face(h));
                for m in m_tau.basis() {
                    if &mu_g * f_gh.eval(m) != &mu_h * f_ts.eval(m) {
                        failures.push(format!("{label}: {g} in {h}"));
                        break;
                    }
                }
            }
        }
    }
    (count, failures)
}
