mod common;

use common::{all_smith, lattice_index_pairs, oracle_smith, random_complete_fan3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvchow::build::{downgrade, p1p1_fan, p2_fan, p2_twists, projectivized_fan, DowngradeInput};
use tvchow::chow::fulton_sturmfels;
use tvchow::fansy::mu_of_face;
use tvchow::SmithInvariants;

#[test]
fn projective_bundle_fans_match_downgrades() {
    for name in ["p2_E", "p2_F"] {
        let fan = projectivized_fan(&p2_fan(), &p2_twists(name).unwrap()).unwrap();
        let x = downgrade(&DowngradeInput::new(fan.clone())).unwrap();
        assert_eq!(all_smith(&x), oracle_smith(&fan), "{name}");
    }
}

#[test]
fn surface_oracle_values() {
    let p2: Vec<usize> = (0..=2)
        .map(|k| fulton_sturmfels(&p2_fan(), k).unwrap().smith.free_rank)
        .collect();
    assert_eq!(p2, vec![1, 1, 1]);
    let p1p1: Vec<usize> = (0..=2)
        .map(|k| fulton_sturmfels(&p1p1_fan(), k).unwrap().smith.free_rank)
        .collect();
    assert_eq!(p1p1, vec![1, 2, 1]);
}

#[test]
fn random_fans_match_downgrades() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut with_multiplicity = 0;
    let mut with_torsion = 0;
    for i in 0..24 {
        let fan = random_complete_fan3(&mut rng, 12);
        let x = downgrade(&DowngradeInput::new(fan.clone())).unwrap();
        assert!(x.validate().is_valid(), "fan {i}: {}", x.validate());
        let oracle = oracle_smith(&fan);
        assert_eq!(all_smith(&x), oracle, "fan {i}");
        if oracle.iter().any(|s| !s.torsion.is_empty()) {
            with_torsion += 1;
        }
        let (_, failures) = lattice_index_pairs(&x);
        assert!(failures.is_empty(), "fan {i}: {failures:?}");
        if x.complexes()
            .iter()
            .flat_map(|c| c.faces())
            .any(|f| mu_of_face(&f.face) > 1.into())
        {
            with_multiplicity += 1;
        }
    }
    // the sample must exercise non-reduced fiber components and torsion
    assert!(with_multiplicity > 0);
    assert!(with_torsion > 0);
}

#[test]
fn oracle_extremes_are_free_of_rank_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = SmithInvariants {
        free_rank: 1,
        torsion: vec![],
    };
    for _ in 0..5 {
        let fan = random_complete_fan3(&mut rng, 10);
        let s = oracle_smith(&fan);
        assert_eq!(s[0], one);
        assert_eq!(s[3], one);
    }
}
