//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers and rationals:
//! row Hermite normal form with its unimodular transform, Smith normal form,
//! integer kernels, and the sublattice bookkeeping (perpendicular lattices,
//! lattice indices, rank-one quotients) that the geometric layers need.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub type IntVec = Vec<BigInt>;
pub type RatVec = Vec<BigRational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("expected rank difference {expected}, found ranks {inner} and {outer}")]
    RankMismatch {
        expected: usize,
        inner: usize,
        outer: usize,
    },
    #[error("inner lattice is not contained in the outer lattice")]
    NotContained,
    #[error("ambient ranks differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
}

/// Dense integer matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<IntVec>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<IntVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| int_vec(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &IntVec {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[IntVec] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<IntVec> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn push_row(&mut self, row: IntVec) {
        assert_eq!(row.len(), self.cols);
        self.data.push(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> IntVec {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += a * &self.data[i][j];
            }
        }
        out
    }

    /// Determinant of a square matrix (fraction-free Bareiss elimination).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(v: &[i64]) -> RatVec {
    v.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

pub fn to_rat_vec(v: &[BigInt]) -> RatVec {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairing of an integer covector with a rational vector.
pub fn pair(m: &[BigInt], v: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for (a, b) in m.iter().zip(v) {
        if !a.is_zero() {
            acc += b * BigRational::from_integer(a.clone());
        }
    }
    acc
}

pub fn rat_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[BigRational], b: &[BigRational]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[BigRational], b: &[BigRational]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[BigRational], s: &BigRational) -> RatVec {
    a.iter().map(|x| x * s).collect()
}

fn lcm_of_denominators<'a>(vals: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    vals.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Smallest positive `mu` with `mu * v` integral, together with `mu * v`.
/// The zero vector gives `(0, 1)`.
pub fn primitive(v: &[BigRational]) -> (IntVec, BigInt) {
    let mu = lcm_of_denominators(v);
    let w = v
        .iter()
        .map(|x| (x * BigRational::from_integer(mu.clone())).to_integer())
        .collect();
    (w, mu)
}

/// Primitive integer vector on the ray through `v` (zero stays zero).
pub fn primitive_direction(v: &[BigRational]) -> IntVec {
    let (w, _) = primitive(v);
    primitive_int(&w)
}

pub fn primitive_int(w: &[BigInt]) -> IntVec {
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return w.to_vec();
    }
    w.iter().map(|x| x / &g).collect()
}

/// Non-negative generator of the additive group spanned by the given rationals.
pub fn rational_gcd(vals: &[BigRational]) -> BigRational {
    let d = lcm_of_denominators(vals);
    let dq = BigRational::from_integer(d.clone());
    let g = vals
        .iter()
        .map(|x| (x * &dq).to_integer())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
    BigRational::new(g, d)
}

/// Rank over Q of a list of rational vectors.
pub fn rational_rank(vectors: &[RatVec]) -> usize {
    let mut rows: Vec<RatVec> = vectors.to_vec();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..ncols {
                    let t = &rows[rank][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn int_rank(vectors: &[IntVec]) -> usize {
    let rv: Vec<RatVec> = vectors.iter().map(|v| to_rat_vec(v)).collect();
    rational_rank(&rv)
}

/// Unique solution of the square system `rows . x = rhs`, if the rows are independent.
pub fn solve_square(rows: &[IntVec], rhs: &[BigInt]) -> Option<RatVec> {
    let n = rows.len();
    let mut a: Vec<RatVec> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            assert_eq!(r.len(), n, "square system expected");
            let mut row = to_rat_vec(r);
            row.push(BigRational::from_integer(b.clone()));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for j in c..=n {
            a[c][j] = &a[c][j] / &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let t = &a[c][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

fn apply_row_pair(
    m: &mut [IntVec],
    i: usize,
    j: usize,
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    d: &BigInt,
) {
    // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
    for k in 0..m[i].len() {
        let x = m[i][k].clone();
        let y = m[j][k].clone();
        m[i][k] = a * &x + b * &y;
        m[j][k] = c * &x + d * &y;
    }
}

/// Row Hermite normal form: returns `(h, u)` with `u` unimodular and `u * m = h`.
///
/// Pivots are positive, entries above a pivot are reduced into `[0, pivot)`,
/// and zero rows sit at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows;
    let cols = m.cols;
    let mut h = m.data.clone();
    let mut u = IntMatrix::identity(rows).data;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            if h[r][c].is_zero() {
                h.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let a = h[r][c].clone();
            let b = h[i][c].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let c2 = -(&b / &g);
            let d2 = &a / &g;
            apply_row_pair(&mut h, r, i, &x, &y, &c2, &d2);
            apply_row_pair(&mut u, r, i, &x, &y, &c2, &d2);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for k in 0..cols {
                h[r][k] = -&h[r][k];
            }
            for k in 0..rows {
                u[r][k] = -&u[r][k];
            }
        }
        let p = h[r][c].clone();
        for i in 0..r {
            let q = h[i][c].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for k in 0..cols {
                let t = &q * &h[r][k];
                h[i][k] -= t;
            }
            for k in 0..rows {
                let t = &q * &u[r][k];
                u[i][k] -= t;
            }
        }
        r += 1;
    }
    (IntMatrix::from_rows(cols, h), IntMatrix::from_rows(rows, u))
}

/// Smith decomposition `u * m * v = diag(d_1, ..., d_r, 0, ...)` with
/// `d_i | d_{i+1}` and all `d_i > 0`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Free rank and torsion of the cokernel of an integer matrix whose rows are relations.
#[derive(
    Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct SmithInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for SmithInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 || self.torsion.is_empty() {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn smith_decomposition(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.data.clone();
    let mut u = IntMatrix::identity(rows).data;
    let mut v = IntMatrix::identity(cols).data;
    let mut diagonal = Vec::new();

    let swap_cols = |x: &mut Vec<IntVec>, i: usize, j: usize| {
        for row in x.iter_mut() {
            row.swap(i, j);
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for k in t..cols {
                    let s = &q * &a[t][k];
                    a[i][k] -= s;
                }
                for k in 0..rows {
                    let s = &q * &u[t][k];
                    u[i][k] -= s;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                for row in v.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t onto the diagonal
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    u.swap(t, best.0);
                }
                if best.1 != t {
                    swap_cols(&mut a, t, best.1);
                    swap_cols(&mut v, t, best.1);
                }
                continue;
            }
            // divisibility of the remaining block
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    for k in t..cols {
                        let s = a[i][k].clone();
                        a[t][k] += s;
                    }
                    for k in 0..rows {
                        let s = u[i][k].clone();
                        u[t][k] += s;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for k in t..cols {
                a[t][k] = -&a[t][k];
            }
            for k in 0..rows {
                u[t][k] = -&u[t][k];
            }
        }
        diagonal.push(a[t][t].clone());
        t += 1;
    }
    SmithDecomposition {
        diagonal,
        u: IntMatrix::from_rows(rows, u),
        v: IntMatrix::from_rows(cols, v),
    }
}

/// Invariant factors (> 1 only) and free rank of the cokernel `Z^cols / rowspace(m)`.
pub fn snf(m: &IntMatrix) -> SmithInvariants {
    let d = smith_decomposition(m);
    SmithInvariants {
        free_rank: m.cols - d.rank(),
        torsion: d.diagonal.into_iter().filter(|x| !x.is_one()).collect(),
    }
}

/// Basis of `{x in Z^ncols : rows . x = 0}` (a saturated lattice).
pub fn integer_kernel(rows: &[IntVec], ncols: usize) -> Vec<IntVec> {
    if rows.is_empty() {
        return IntMatrix::identity(ncols).data;
    }
    let a = IntMatrix::from_rows(ncols, rows.to_vec());
    let (h, u) = hnf(&a.transpose());
    (0..ncols)
        .filter(|&i| h.data[i].iter().all(Zero::is_zero))
        .map(|i| u.data[i].clone())
        .collect()
}

/// Scale a rational vector to an integer vector on the same ray.
pub fn clear_denominators(v: &[BigRational]) -> IntVec {
    primitive(v).0
}

/// A sublattice of `Z^ambient`, stored by its row Hermite basis so that
/// equal lattices compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<IntVec>,
}

impl Sublattice {
    pub fn from_generators(ambient: usize, gens: &[IntVec]) -> Self {
        if gens.is_empty() {
            return Self::zero(ambient);
        }
        let (h, _) = hnf(&IntMatrix::from_rows(ambient, gens.to_vec()));
        let basis = h
            .data
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        Sublattice { ambient, basis }
    }

    pub fn full(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: IntMatrix::identity(ambient).data,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<IntVec> {
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let p = b.iter().position(|x| !x.is_zero()).unwrap();
            let (q, r) = rest[p].div_rem(&b[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                *x -= &q * y;
            }
            out.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }
}

/// `{m in Z^ambient : <m, v> = 0 for every spanning v}`.
pub fn perp_lattice(span_basis: &[RatVec], ambient: usize) -> Sublattice {
    let rows: Vec<IntVec> = span_basis
        .iter()
        .map(|v| clear_denominators(v))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    Sublattice::from_generators(ambient, &integer_kernel(&rows, ambient))
}

/// The sublattice of `base` pairing integrally with every given point.
pub fn integral_pairing_sublattice(base: &Sublattice, points: &[RatVec]) -> Sublattice {
    let r = base.rank();
    // coefficient lattice in base coordinates, rows
    let mut coeffs: Vec<IntVec> = IntMatrix::identity(r).data;
    for v in points {
        if coeffs.is_empty() {
            break;
        }
        let vals: Vec<BigRational> = coeffs
            .iter()
            .map(|c| {
                let m = combine(base.basis(), c, base.ambient());
                pair(&m, v)
            })
            .collect();
        let d = lcm_of_denominators(&vals);
        if d.is_one() {
            continue;
        }
        let dq = BigRational::from_integer(d.clone());
        let mut row: IntVec = vals.iter().map(|x| (x * &dq).to_integer()).collect();
        row.push(d);
        let s = coeffs.len();
        let ker = integer_kernel(&[row], s + 1);
        let projected: Vec<IntVec> = ker.into_iter().map(|k| k[..s].to_vec()).collect();
        let reduced = Sublattice::from_generators(s, &projected);
        coeffs = reduced
            .basis()
            .iter()
            .map(|k| IntMatrix::from_rows(r, coeffs.clone()).left_mul_vec(k))
            .collect();
    }
    let gens: Vec<IntVec> = coeffs
        .iter()
        .map(|c| combine(base.basis(), c, base.ambient()))
        .collect();
    Sublattice::from_generators(base.ambient(), &gens)
}

fn combine(basis: &[IntVec], coeffs: &[BigInt], ambient: usize) -> IntVec {
    let mut out = vec![BigInt::zero(); ambient];
    for (b, c) in basis.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Character sublattice of a face: `{m in M(tail) : <m, vertex> in Z}`.
/// Its index in `M(tail)` is the multiplicity of the vertex image.
pub fn face_character_lattice(
    tail_span: &[RatVec],
    vertex_image: &RatVec,
    ambient: usize,
) -> Sublattice {
    let base = perp_lattice(tail_span, ambient);
    integral_pairing_sublattice(&base, std::slice::from_ref(vertex_image))
}

fn coordinate_matrix(inner: &Sublattice, outer: &Sublattice) -> Result<Vec<IntVec>, LatticeError> {
    if inner.ambient != outer.ambient {
        return Err(LatticeError::AmbientMismatch(inner.ambient, outer.ambient));
    }
    inner
        .basis
        .iter()
        .map(|b| outer.coords(b).ok_or(LatticeError::NotContained))
        .collect()
}

/// Index `[outer : inner]` for lattices of equal rank.
pub fn lattice_index(inner: &Sublattice, outer: &Sublattice) -> Result<BigInt, LatticeError> {
    if inner.rank() != outer.rank() {
        return Err(LatticeError::RankMismatch {
            expected: 0,
            inner: inner.rank(),
            outer: outer.rank(),
        });
    }
    let c = coordinate_matrix(inner, outer)?;
    Ok(IntMatrix::from_rows(outer.rank(), c).det().abs())
}

/// A vector of `outer` generating the free rank-one part of `outer / inner`.
///
/// The returned index is always 1: the vector is chosen so that
/// `outer = sat(inner) + Z v`. Its sign is arbitrary.
pub fn quotient_generator(
    inner: &Sublattice,
    outer: &Sublattice,
) -> Result<(IntVec, BigInt), LatticeError> {
    if outer.rank() != inner.rank() + 1 {
        return Err(LatticeError::RankMismatch {
            expected: 1,
            inner: inner.rank(),
            outer: outer.rank(),
        });
    }
    let c = coordinate_matrix(inner, outer)?;
    let r = outer.rank();
    let ker = integer_kernel(&c, r);
    debug_assert_eq!(ker.len(), 1);
    // functional phi on outer coordinates vanishing on inner; find y with phi . y = 1
    let phi = primitive_int(&ker[0]);
    let (h, u) = hnf(&IntMatrix::from_rows(
        1,
        phi.iter().map(|x| vec![x.clone()]).collect(),
    ));
    debug_assert!(h.get(0, 0).is_one());
    let y = u.row(0).clone();
    let v = combine(outer.basis(), &y, outer.ambient());
    Ok((v, BigInt::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn hnf_small_example() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().abs(), BigInt::one());
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn hnf_identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        let (h, u) = hnf(&i3);
        assert_eq!(h, i3);
        assert_eq!(u, i3);
        let z = IntMatrix::zeros(2, 2);
        let (h, u) = hnf(&z);
        assert!(h.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn snf_examples() {
        let s = snf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.torsion, int_vec(&[2, 4]));
        assert_eq!(s.free_rank, 0);
        let s = snf(&IntMatrix::identity(2));
        assert!(s.torsion.is_empty());
        assert_eq!(s.free_rank, 0);
        let s = snf(&m(&[&[0, 0]]));
        assert!(s.torsion.is_empty());
        assert_eq!(s.free_rank, 2);
    }

    #[test]
    fn snf_fixes_divisibility() {
        // diag(2, 3) ~ diag(1, 6)
        let s = snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.torsion, int_vec(&[6]));
        let d = smith_decomposition(&m(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]));
        assert_eq!(d.diagonal, int_vec(&[2, 2, 60]));
    }

    #[test]
    fn primitive_examples() {
        let (w, mu) = primitive(&[rat(1, 2), rat(3, 2)]);
        assert_eq!((w, mu), (int_vec(&[1, 3]), BigInt::from(2)));
        let (w, mu) = primitive(&rat_vec(&[-1, -1, 0]));
        assert_eq!((w, mu), (int_vec(&[-1, -1, 0]), BigInt::one()));
        let (w, mu) = primitive(&rat_vec(&[0, 0]));
        assert_eq!((w, mu), (int_vec(&[0, 0]), BigInt::one()));
    }

    #[test]
    fn perp_examples() {
        let l = perp_lattice(&[rat_vec(&[1, 1, 0])], 3);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&int_vec(&[1, -1, 0])));
        assert!(l.contains(&int_vec(&[0, 0, 1])));
        assert_eq!(perp_lattice(&[], 3), Sublattice::full(3));
        let full = [rat_vec(&[1, 0]), rat_vec(&[1, 1])];
        assert_eq!(perp_lattice(&full, 2).rank(), 0);
    }

    #[test]
    fn quotient_generator_examples() {
        let inner = Sublattice::from_generators(2, &[int_vec(&[1, 0])]);
        let (v, idx) = quotient_generator(&inner, &Sublattice::full(2)).unwrap();
        assert_eq!(idx, BigInt::one());
        assert_eq!(v[1].abs(), BigInt::one());

        let outer = Sublattice::from_generators(2, &[int_vec(&[1, 0]), int_vec(&[1, 3])]);
        let (v, _) = quotient_generator(&inner, &outer).unwrap();
        // the class of v generates outer / inner, so its second coordinate is +-3
        assert_eq!(v[1].abs(), BigInt::from(3));

        assert!(quotient_generator(&outer, &outer).is_err());
    }

    #[test]
    fn lattice_index_examples() {
        let full = Sublattice::full(2);
        let a = Sublattice::from_generators(2, &[int_vec(&[2, 0]), int_vec(&[1, 3])]);
        assert_eq!(lattice_index(&a, &full).unwrap(), BigInt::from(6));
        assert_eq!(lattice_index(&full, &full).unwrap(), BigInt::one());
        let b = Sublattice::from_generators(2, &[int_vec(&[2, 0]), int_vec(&[0, 2])]);
        assert_eq!(lattice_index(&b, &full).unwrap(), BigInt::from(4));
        assert!(lattice_index(&full, &b).is_err());
    }

    #[test]
    fn face_character_lattice_examples() {
        let l = face_character_lattice(&[], &vec![rat(1, 2)], 1);
        assert_eq!(l.basis(), &[int_vec(&[2])]);

        let l = face_character_lattice(&[rat_vec(&[0, 0, 1])], &rat_vec(&[3, 1, 0]), 3);
        assert_eq!(l, perp_lattice(&[rat_vec(&[0, 0, 1])], 3));

        let tail = [rat_vec(&[0, 0, 1])];
        let l = face_character_lattice(&tail, &vec![rat(1, 2), rat(0, 1), rat(5, 1)], 3);
        let perp = perp_lattice(&tail, 3);
        assert_eq!(lattice_index(&l, &perp).unwrap(), BigInt::from(2));
        assert!(l.contains(&int_vec(&[2, 0, 0])));
        assert!(l.contains(&int_vec(&[0, 1, 0])));
        assert!(!l.contains(&int_vec(&[1, 0, 0])));
    }

    #[test]
    fn rational_gcd_values() {
        assert_eq!(rational_gcd(&[rat(1, 2), rat(3, 4)]), rat(1, 4));
        assert_eq!(rational_gcd(&[rat(0, 1)]), rat(0, 1));
        assert_eq!(rational_gcd(&[rat(-6, 1), rat(4, 1)]), rat(2, 1));
    }

    #[test]
    fn solve_square_values() {
        let x = solve_square(&[int_vec(&[1, 1]), int_vec(&[1, -1])], &int_vec(&[3, 1])).unwrap();
        assert_eq!(x, rat_vec(&[2, 1]));
        assert!(solve_square(&[int_vec(&[1, 1]), int_vec(&[2, 2])], &int_vec(&[0, 0])).is_none());
    }

    #[test]
    fn det_values() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(
            m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]).det(),
            BigInt::from(18)
        );
    }
}
