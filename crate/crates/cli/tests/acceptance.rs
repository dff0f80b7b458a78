//! One test per acceptance criterion, each printing a single PASS/FAIL line.
//! All criteria compare exact integers; the pinned tolerance is zero.

use toric_cli::verify::{self, Harness, Outcome, TOLERANCE};
use toric_core::mmp::blow_up;
use toric_core::{make_family_fan, FamilyError, FamilyFan, FamilySpec};

fn run(id: &str) -> Outcome {
    assert_eq!(TOLERANCE, 0);
    let mut outcomes = verify::run(&Harness::default(), Some(id)).expect("known criterion");
    assert_eq!(outcomes.len(), 1);
    let outcome = outcomes.remove(0);
    println!("{outcome}");
    outcome
}

macro_rules! criterion {
    ($name:ident, $id:literal) => {
        #[test]
        fn $name() {
            let outcome = run($id);
            assert!(outcome.passed, "{outcome}");
        }
    };
}

criterion!(a01_rank_law, "A1");
criterion!(a02_block_sizes, "A2");
criterion!(a03_forced_relations, "A3");
criterion!(a04_singular_hexagon_cone, "A4");
criterion!(a05_automorphism_orders, "A5");
criterion!(a06_two_hexagon_actions, "A6");
criterion!(a07_mmp_census, "A7");
criterion!(a08_adjacent_minus_one_rule, "A8");
criterion!(a09_schur_centralizer, "A9");
criterion!(a10_star_table, "A10");
criterion!(a11_diagonal_obstruction, "A11");
criterion!(a12_parity_and_tables, "A12");

#[test]
fn full_suite_passes() {
    let outcomes = verify::run(&Harness::default(), None).unwrap();
    assert_eq!(outcomes.len(), 12);
    for o in &outcomes {
        println!("{o}");
    }
    assert!(outcomes.iter().all(|o| o.passed));
}

/// The hexagon constructor replaced by a blow-up of the hexagon.
fn mutated_families(spec: FamilySpec) -> Result<FamilyFan, FamilyError> {
    let mut built = make_family_fan(spec)?;
    if let FamilySpec::Dp6(_) = spec {
        built.fan = blow_up(&built.fan, 0).expect("smooth surface");
    }
    Ok(built)
}

#[test]
fn mutated_hexagon_is_caught() {
    let harness = Harness {
        families: mutated_families,
        ..Harness::default()
    };
    let outcomes = verify::run(&harness, None).unwrap();
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id.as_str())
        .collect();
    for o in outcomes.iter().filter(|o| !o.passed) {
        println!("{o}");
    }
    assert_eq!(failed, ["A5", "A6", "A9"]);
}
