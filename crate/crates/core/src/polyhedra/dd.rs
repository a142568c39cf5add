//! Double description: generators of `{x : A x >= 0, E x = 0}`.

use crate::exactlin::{dot, primitive_int, IntVec};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn full_below(n: usize, upto: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..upto {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Lineality basis and extreme rays (modulo lineality) of a polyhedral cone.
#[derive(Clone, Debug)]
pub(crate) struct DdResult {
    pub lineality: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

fn combine(s0: &BigInt, r: &[BigInt], s: &BigInt, l0: &[BigInt]) -> IntVec {
    let v: IntVec = r.iter().zip(l0).map(|(x, y)| s0 * x - s * y).collect();
    primitive_int(&v)
}

pub(crate) fn double_description(dim: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> DdResult {
    let nbits = ineqs.len();
    let mut lin: Vec<IntVec> = (0..dim)
        .map(|i| {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::one();
            v
        })
        .collect();
    let mut rays: Vec<(IntVec, Bits)> = Vec::new();

    let constraints = eqs
        .iter()
        .map(|e| (e, None))
        .chain(ineqs.iter().enumerate().map(|(i, a)| (a, Some(i))));

    for (a, index) in constraints {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(pos) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.swap_remove(pos);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lin.iter_mut() {
                let s = dot(a, l);
                if !s.is_zero() {
                    *l = combine(&s0, l, &s, &l0);
                }
            }
            for (r, bits) in rays.iter_mut() {
                let s = dot(a, r);
                if !s.is_zero() {
                    *r = combine(&s0, r, &s, &l0);
                }
                if let Some(i) = index {
                    bits.insert(i);
                }
            }
            if let Some(i) = index {
                rays.push((l0, Bits::full_below(nbits, i)));
            }
            continue;
        }

        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut zero = Vec::new();
        for (k, (r, _)) in rays.iter().enumerate() {
            let s = dot(a, r);
            if s.is_positive() {
                plus.push((k, s));
            } else if s.is_negative() {
                minus.push((k, s));
            } else {
                zero.push(k);
            }
        }
        let mut next: Vec<(IntVec, Bits)> = Vec::new();
        for &(p, ref sp) in &plus {
            for &(q, ref sq) in &minus {
                let common = rays[p].1.and(&rays[q].1);
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, (_, z))| k != p && k != q && common.is_subset(z));
                if blocked {
                    continue;
                }
                // sp * r_q - sq * r_p vanishes on a and is a positive combination
                let v = combine(sp, &rays[q].0, sq, &rays[p].0);
                let mut bits = common;
                if let Some(i) = index {
                    bits.insert(i);
                }
                next.push((v, bits));
            }
        }
        for k in zero {
            let (r, mut bits) = rays[k].clone();
            if let Some(i) = index {
                bits.insert(i);
            }
            next.push((r, bits));
        }
        if index.is_some() {
            for (k, _) in plus {
                next.push(rays[k].clone());
            }
        }
        rays = next;
    }
    DdResult {
        lineality: lin,
        rays: rays.into_iter().map(|(r, _)| r).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int_vec;

    #[test]
    fn positive_orthant() {
        let ineqs = vec![int_vec(&[1, 0]), int_vec(&[0, 1])];
        let r = double_description(2, &ineqs, &[]);
        assert!(r.lineality.is_empty());
        let mut rays = r.rays;
        rays.sort();
        assert_eq!(rays, vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn half_plane_keeps_lineality() {
        let r = double_description(2, &[int_vec(&[1, 0])], &[]);
        assert_eq!(r.lineality.len(), 1);
        assert_eq!(r.rays.len(), 1);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // cone over a square: |x| <= z, |y| <= z
        let ineqs = vec![
            int_vec(&[1, 0, 1]),
            int_vec(&[-1, 0, 1]),
            int_vec(&[0, 1, 1]),
            int_vec(&[0, -1, 1]),
        ];
        let r = double_description(3, &ineqs, &[]);
        assert!(r.lineality.is_empty());
        assert_eq!(r.rays.len(), 4);
    }

    #[test]
    fn equality_cuts_dimension() {
        let r = double_description(3, &[int_vec(&[1, 0, 0])], &[int_vec(&[0, 0, 1])]);
        assert_eq!(r.lineality.len(), 1);
        assert_eq!(r.rays.len(), 1);
        assert!(r.rays[0][2].is_zero());
    }
}
