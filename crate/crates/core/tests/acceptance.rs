//! Acceptance suite: one PASS/FAIL line per criterion. All comparisons are
//! exact; each criterion also has a pinned wall-clock budget.

mod common;

use common::{all_smith, lattice_index_pairs, oracle_smith, random_bundle, random_complete_fan3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};
use tvchow::build::{
    bundle_rank2, downgrade, fixture, p1p1_example_bundle, p1p1_fan, p2_fan, p2_twists,
    predicted_counts, projectivized_fan, DowngradeInput, KlyachkoBundle, FIXTURE_NAMES,
};
use tvchow::effcone::eff_generators;
use tvchow::exactlin::{int_rank, int_vec};
use tvchow::{Cone, SmithInvariants};

const BUDGET: Duration = Duration::from_secs(10);
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const RANDOM_FANS: usize = 24;
const MAX_RAYS: usize = 12;
const RANDOM_BUNDLES_PER_BASE: usize = 6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn free(r: usize) -> SmithInvariants {
    SmithInvariants {
        free_rank: r,
        torsion: vec![],
    }
}

fn gr24_counts() -> Outcome {
    let x = fixture("gr24").map_err(|e| e.to_string())?;
    let expected = [
        (3, (0, 6, 0)),
        (2, (0, 3, 8)),
        (1, (0, 0, 12)),
        (0, (0, 0, 6)),
    ];
    for (k, want) in expected {
        let got = x
            .enumerate_generators(k)
            .map_err(|e| e.to_string())?
            .counts();
        ensure(got == want, || format!("k={k}: got {got:?}, want {want:?}"))?;
    }
    Ok("(r,v,t) = (0,6,0), (0,3,8), (0,0,12), (0,0,6) for k = 3..0".into())
}

fn gr24_chow() -> Outcome {
    let x = fixture("gr24").map_err(|e| e.to_string())?;
    let got = all_smith(&x);
    let want: Vec<SmithInvariants> = [1, 1, 2, 1, 1].into_iter().map(free).collect();
    ensure(got == want, || format!("smith invariants {got:?}"))?;
    // k = 2: the edge cycles E^+, E^- and the contracted W have classes with exactly one relation
    let r = eff_generators(&x, 2).map_err(|e| e.to_string())?;
    ensure(r.distinct.len() == 3, || {
        format!("{} distinct classes", r.distinct.len())
    })?;
    let v_class = &r.classes[0];
    let others: Vec<&Vec<_>> = r
        .distinct
        .iter()
        .map(|d| &d.class)
        .filter(|c| *c != v_class)
        .collect();
    let sum: Vec<_> = others[0]
        .iter()
        .zip(others[1])
        .map(|(a, b)| a + b)
        .collect();
    ensure(&sum == v_class, || "E^+ + E^- != W".into())?;
    ensure(
        int_rank(&[others[0].clone(), others[1].clone()]) == 2,
        || "E^+ and E^- are dependent".into(),
    )?;
    Ok("A_k free of ranks 1,1,2,1,1; A_2 = Z(E+,E-,W)/(E+ + E- - W)".into())
}

fn projectivized_bundle_counts() -> Outcome {
    let rows = [
        ("p2_E", [(2, 3, 0), (1, 7, 1), (0, 4, 2)]),
        ("p2_F", [(0, 5, 0), (0, 4, 5), (0, 1, 5)]),
    ];
    for (name, want) in rows {
        let x = fixture(name).map_err(|e| e.to_string())?;
        for (k, w) in [2usize, 1, 0].into_iter().zip(want) {
            let got = x
                .enumerate_generators(k)
                .map_err(|e| e.to_string())?
                .counts();
            ensure(got == w, || {
                format!("{name} k={k}: got {got:?}, want {w:?}")
            })?;
        }
        let sums: Vec<usize> = [2usize, 1, 0]
            .iter()
            .map(|&k| {
                let (r, v, t) = x.enumerate_generators(k).unwrap().counts();
                r + v + t
            })
            .collect();
        ensure(sums == vec![5, 9, 6], || {
            format!("{name} row sums {sums:?}")
        })?;
    }
    Ok("p2_E and p2_F counts match, sums (5,9,6)".into())
}

fn downgrade_oracle() -> Outcome {
    let mut fans = Vec::new();
    for name in ["p2_E", "p2_F"] {
        let twists = p2_twists(name).expect("known fixture");
        fans.push((
            name.to_string(),
            projectivized_fan(&p2_fan(), &twists).map_err(|e| e.to_string())?,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for i in 0..RANDOM_FANS {
        fans.push((
            format!("random fan {i}"),
            random_complete_fan3(&mut rng, MAX_RAYS),
        ));
    }
    for (name, fan) in &fans {
        let x = downgrade(&DowngradeInput::new(fan.clone())).map_err(|e| format!("{name}: {e}"))?;
        let a = all_smith(&x);
        let b = oracle_smith(fan);
        ensure(a == b, || format!("{name}: pipeline {a:?} vs oracle {b:?}"))?;
    }
    Ok(format!("{} fans agree in every degree", fans.len()))
}

fn bundle_identities() -> Outcome {
    let mut bundles: Vec<(String, KlyachkoBundle)> =
        vec![("p1p1_bundle".into(), p1p1_example_bundle())];
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0d1e);
    for (base_name, base) in [("P2", p2_fan()), ("P1xP1", p1p1_fan())] {
        for i in 0..RANDOM_BUNDLES_PER_BASE {
            bundles.push((
                format!("{base_name} bundle {i}"),
                random_bundle(&mut rng, &base),
            ));
        }
    }
    for (name, b) in &bundles {
        let x = bundle_rank2(b).map_err(|e| format!("{name}: {e}"))?;
        for k in 0..=b.base.ambient() {
            let got = x
                .enumerate_generators(k)
                .map_err(|e| e.to_string())?
                .counts();
            let want = predicted_counts(b, k).map_err(|e| e.to_string())?;
            ensure(got == want, || {
                format!("{name} k={k}: enumerated {got:?}, predicted {want:?}")
            })?;
        }
    }
    Ok(format!("{} bundles, all k <= n", bundles.len()))
}

fn example_marking() -> Outcome {
    let x = bundle_rank2(&p1p1_example_bundle()).map_err(|e| e.to_string())?;
    let fan = x.tailfan();
    for c in fan.maximal_cones() {
        ensure(x.is_marked(c), || format!("maximal cone {c} unmarked"))?;
    }
    let excluded = Cone::new(2, vec![int_vec(&[0, -1])]);
    for r in fan.rays() {
        ensure(x.is_marked(r) == (r != &excluded), || {
            format!("ray {r} marking wrong")
        })?;
    }
    Ok("K = all maximal cones and all rays except (0,-1)".into())
}

fn lattice_index_identity() -> Outcome {
    let mut total = 0;
    for name in FIXTURE_NAMES {
        let x = fixture(name).map_err(|e| e.to_string())?;
        let (count, failures) = lattice_index_pairs(&x);
        ensure(failures.is_empty(), || format!("{name}: {failures:?}"))?;
        total += count;
    }
    Ok(format!("{total} nested face pairs"))
}

fn structural() -> Outcome {
    for name in FIXTURE_NAMES {
        let x = fixture(name).map_err(|e| e.to_string())?;
        let n = x.rank();
        ensure(x.enumerate_generators(n).unwrap().t.is_empty(), || {
            format!("{name}: T_n nonempty")
        })?;
        let base = all_smith(&x);
        ensure(base[0] == free(1) && base[n + 1] == free(1), || {
            format!("{name}: A_0 = {}, A_n+1 = {}", base[0], base[n + 1])
        })?;
        let m = x.points().len();
        for last in 0..m {
            let mut order: Vec<usize> = (0..m).filter(|&i| i != last).collect();
            order.push(last);
            let moved = all_smith(&x.with_point_order(&order));
            ensure(moved == base, || {
                format!("{name}: basepoint {last} changes invariants")
            })?;
        }
        let aux = all_smith(&x.with_generic_point("aux"));
        ensure(aux == base, || {
            format!("{name}: aux point changes invariants")
        })?;
    }
    Ok("T_n empty, A_0 = A_n+1 = Z, basepoint and aux invariance".into())
}

fn run(index: usize, title: &str, budget: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let result = match result {
        Ok(_) if elapsed > budget => Err(format!("over budget {budget:?}")),
        r => r,
    };
    let secs = elapsed.as_secs_f64();
    match &result {
        Ok(detail) => println!("[criterion {index}] PASS {title}: {detail} ({secs:.2}s)"),
        Err(why) => println!("[criterion {index}] FAIL {title}: {why} ({secs:.2}s)"),
    }
    result.is_ok()
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 8] = [
        ("Gr(2,4) generator counts", BUDGET, gr24_counts),
        ("Gr(2,4) Chow groups", BUDGET, gr24_chow),
        (
            "projectivized bundle counts",
            BUDGET,
            projectivized_bundle_counts,
        ),
        ("downgrade vs toric oracle", ORACLE_BUDGET, downgrade_oracle),
        ("bundle count identities", BUDGET, bundle_identities),
        ("example bundle marking", BUDGET, example_marking),
        ("lattice index identity", BUDGET, lattice_index_identity),
        ("structural invariants", BUDGET, structural),
    ];
    let mut passed = 0;
    for (i, (title, budget, f)) in criteria.iter().enumerate() {
        if run(i + 1, title, *budget, *f) {
            passed += 1;
        }
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
