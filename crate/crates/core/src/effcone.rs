//! Generators of the pseudoeffective cones `Eff_k(X)` and their classes in
//! `A_k(X) ⊗ Q`.

use crate::chow::{presentation, ChowError, ChowPresentation};
use crate::exactlin::{primitive_int, IntVec};
use crate::fansy::{CycleGenerator, MarkedFansyDivisor};
use num_traits::Zero;
use std::collections::BTreeMap;

/// One distinct class together with the generators mapping to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffClass {
    /// Coordinates in the free part of the presentation.
    pub class: IntVec,
    /// Indices into [`EffConeReport::generators`].
    pub members: Vec<usize>,
}

/// The cone generators of one degree and their images.
#[derive(Debug, Clone)]
pub struct EffConeReport {
    pub k: usize,
    pub generators: Vec<CycleGenerator>,
    /// Image of each generator in `A_k ⊗ Q`, in presentation coordinates.
    pub classes: Vec<IntVec>,
    /// Distinct classes in order of first appearance.
    pub distinct: Vec<EffClass>,
}

impl EffConeReport {
    pub fn from_presentation(p: &ChowPresentation) -> Self {
        let classes: Vec<IntVec> = p.class_map.iter().map(|c| c.free.clone()).collect();
        let mut distinct: Vec<EffClass> = Vec::new();
        let mut seen: BTreeMap<&IntVec, usize> = BTreeMap::new();
        for (i, c) in classes.iter().enumerate() {
            match seen.get(c) {
                Some(&j) => distinct[j].members.push(i),
                None => {
                    seen.insert(c, distinct.len());
                    distinct.push(EffClass {
                        class: c.clone(),
                        members: vec![i],
                    });
                }
            }
        }
        EffConeReport {
            k: p.k,
            generators: p.generators.clone(),
            classes,
            distinct,
        }
    }

    /// Distinct rays of `A_k ⊗ Q` spanned by the nonzero classes.
    pub fn rays(&self) -> Vec<IntVec> {
        let mut out: Vec<IntVec> = Vec::new();
        for c in &self.classes {
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            let r = primitive_int(c);
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }
}

/// Generators `B_τ`, `Z_{p,F}` and `W_σ` of `Eff_k(X)` with their classes.
pub fn eff_generators(x: &MarkedFansyDivisor, k: usize) -> Result<EffConeReport, ChowError> {
    Ok(EffConeReport::from_presentation(&presentation(x, k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::fixture;

    #[test]
    fn gr24_classes() {
        let x = fixture("gr24").unwrap();
        let r2 = eff_generators(&x, 2).unwrap();
        assert_eq!(r2.generators.len(), 11);
        assert_eq!(r2.distinct.len(), 3);
        let sum =
            |a: &IntVec, b: &IntVec| -> IntVec { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let c: Vec<&IntVec> = r2.distinct.iter().map(|d| &d.class).collect();
        let found = (0..3).any(|w| {
            let (a, b) = match w {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            &sum(c[a], c[b]) == c[w]
        });
        assert!(found, "{c:?}");
        let r1 = eff_generators(&x, 1).unwrap();
        assert_eq!(r1.generators.len(), 12);
        assert_eq!(r1.rays().len(), 1);
        let top = eff_generators(&x, 4).unwrap();
        assert_eq!(top.generators.len(), 1);
    }
}
