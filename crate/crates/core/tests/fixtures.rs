mod common;

use common::{all_smith, gr24_by_rule, lattice_index_pairs};
use tvchow::build::{bundle_rank2, fixture, p1p1_example_bundle, FIXTURE_NAMES};
use tvchow::document::{fixture_document, InputDocument};
use tvchow::effcone::eff_generators;
use tvchow::exactlin::int_vec;
use tvchow::{Cone, SmithInvariants};

fn free(r: usize) -> SmithInvariants {
    SmithInvariants {
        free_rank: r,
        torsion: vec![],
    }
}

fn counts(name: &str, ks: &[usize]) -> Vec<(usize, usize, usize)> {
    let x = fixture(name).unwrap();
    ks.iter()
        .map(|&k| x.enumerate_generators(k).unwrap().counts())
        .collect()
}

#[test]
fn gr24_generator_counts() {
    assert_eq!(
        counts("gr24", &[3, 2, 1, 0]),
        vec![(0, 6, 0), (0, 3, 8), (0, 0, 12), (0, 0, 6)]
    );
}

#[test]
fn gr24_fixture_matches_rule() {
    assert_eq!(fixture("gr24").unwrap(), gr24_by_rule());
    assert!(gr24_by_rule().validate().is_valid());
}

#[test]
fn gr24_chow_groups() {
    let x = fixture("gr24").unwrap();
    let expected: Vec<SmithInvariants> = [1, 1, 2, 1, 1].into_iter().map(free).collect();
    assert_eq!(all_smith(&x), expected);
}

#[test]
fn gr24_effective_classes() {
    let x = fixture("gr24").unwrap();
    let r1 = eff_generators(&x, 1).unwrap();
    assert_eq!(r1.distinct.len(), 1);
    let r2 = eff_generators(&x, 2).unwrap();
    assert_eq!(r2.distinct.len(), 3);
    // the three edge cycles share one class, the sum of the two ray classes
    let v_class = &r2.classes[0];
    assert!(r2
        .distinct
        .iter()
        .any(|d| &d.class == v_class && d.members == vec![0, 1, 2]));
    let others: Vec<_> = r2.distinct.iter().filter(|d| &d.class != v_class).collect();
    let sum: Vec<_> = others[0]
        .class
        .iter()
        .zip(&others[1].class)
        .map(|(a, b)| a + b)
        .collect();
    assert_eq!(&sum, v_class);
    assert_eq!(others[0].members.len(), 4);
    assert_eq!(others[1].members.len(), 4);
}

#[test]
fn projectivized_bundle_counts() {
    let e = counts("p2_E", &[2, 1, 0]);
    let f = counts("p2_F", &[2, 1, 0]);
    assert_eq!(e, vec![(2, 3, 0), (1, 7, 1), (0, 4, 2)]);
    assert_eq!(f, vec![(0, 5, 0), (0, 4, 5), (0, 1, 5)]);
    let sums = |c: &[(usize, usize, usize)]| -> Vec<usize> {
        c.iter().map(|(r, v, t)| r + v + t).collect()
    };
    assert_eq!(sums(&e), vec![5, 9, 6]);
    assert_eq!(sums(&f), vec![5, 9, 6]);
}

#[test]
fn projective_bundles_have_expected_ranks() {
    assert_eq!(
        all_smith(&fixture("p1p1_bundle").unwrap()),
        [1, 3, 3, 1].map(free).to_vec()
    );
    for name in ["p2_E", "p2_F"] {
        assert_eq!(
            all_smith(&fixture(name).unwrap()),
            [1, 2, 2, 1].map(free).to_vec()
        );
    }
}

#[test]
fn example_bundle_marking() {
    let x = bundle_rank2(&p1p1_example_bundle()).unwrap();
    let fan = x.tailfan();
    for c in fan.maximal_cones() {
        assert!(x.is_marked(c), "{c}");
    }
    let excluded = Cone::new(2, vec![int_vec(&[0, -1])]);
    for r in fan.rays() {
        assert_eq!(x.is_marked(r), r != &excluded, "{r}");
    }
    assert!(!x.is_marked(&Cone::zero(2)));
}

#[test]
fn lattice_index_identity_on_fixtures() {
    for name in FIXTURE_NAMES {
        let (count, failures) = lattice_index_pairs(&fixture(name).unwrap());
        assert!(count > 0, "{name}");
        assert!(failures.is_empty(), "{name}: {failures:?}");
    }
}

#[test]
fn fixture_documents_round_trip() {
    for name in FIXTURE_NAMES {
        let doc = fixture_document(name).unwrap();
        let text = doc.to_json();
        let back = InputDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.build().unwrap(), fixture(name).unwrap());
        let explicit = InputDocument::from_divisor(&fixture(name).unwrap()).unwrap();
        assert_eq!(explicit.build().unwrap(), fixture(name).unwrap());
    }
}
