mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_core::families::s3_generators_with_negation;
use toric_core::mmp::hexagon_fan;
use toric_core::{
    action_from_generators, blow_up, check_adjacent_minus_one_rule, contract_orbit,
    contractible_orbits, enumerate_invariant_fans, fan_automorphisms, fan_isomorphism,
    invariant_picard_number, make_family_fan, run_equivariant_mmp, self_intersection_profile,
    EnumerationParams, Fan, FamilySpec, GroupAction, Lattice, MmpError, MmpMode, MmpTrace,
    TerminalLabel,
};

use common::{det_naive, random_smooth_surface};

fn family(spec: &str) -> Fan {
    make_family_fan(spec.parse().unwrap()).unwrap().fan
}

fn action(fan: &Fan, negation: bool) -> GroupAction {
    action_from_generators(fan, &s3_generators_with_negation(fan.lattice(), negation).unwrap())
        .unwrap()
}

fn census(lattice: Lattice, negation: bool) -> Vec<Fan> {
    enumerate_invariant_fans(EnumerationParams {
        lattice,
        height: 2,
        max_rays: 12,
        require_smooth: true,
        include_negation: negation,
    })
    .unwrap()
    .into_iter()
    .map(|f| f.fan)
    .collect()
}

/// Structural checks on one trace, independent of how it was produced.
fn check_trace(start: &Fan, trace: &MmpTrace) {
    let mut current = start.clone();
    for step in &trace.steps {
        assert_eq!(step.fan, current);
        let profile = self_intersection_profile(&step.fan).unwrap();
        for &r in &step.orbit {
            assert_eq!(profile.self_intersection(r), -1);
        }
        let removed: BTreeSet<Vec<i64>> = step.orbit_rays().into_iter().collect();
        let kept: BTreeSet<Vec<i64>> = step.fan.rays().iter().cloned().collect();
        current = contract_orbit(&step.fan, &step.orbit).unwrap();
        let after: BTreeSet<Vec<i64>> = current.rays().iter().cloned().collect();
        assert_eq!(after, kept.difference(&removed).cloned().collect());
    }
    assert_eq!(trace.terminal, current);
    assert!(contractible_orbits(&trace.terminal, &trace.terminal_group)
        .unwrap()
        .is_empty());
}

proptest! {
    #[test]
    fn profile_matches_determinant_oracle(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random_smooth_surface(&mut rng, 10);
        let profile = self_intersection_profile(&fan).unwrap();
        let order = &profile.order;
        let n = order.len();
        let mut total = 0;
        for k in 0..n {
            let p = fan.ray(order[(k + n - 1) % n]).to_vec();
            let q = fan.ray(order[(k + 1) % n]).to_vec();
            let a = det_naive(&[p, q]) as i64;
            prop_assert_eq!(profile.self_intersection(order[k]), -a);
            total += profile.self_intersection(order[k]);
        }
        prop_assert_eq!(total, 12 - 3 * n as i64);
    }

    #[test]
    fn blown_up_point_is_a_minus_one_ray(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random_smooth_surface(&mut rng, 8);
        for k in 0..fan.cones().len() {
            let c = &fan.cones()[k];
            let (a, b) = (fan.ray(c[0]), fan.ray(c[1]));
            let up = blow_up(&fan, k).unwrap();
            let new = up.ray_index(&[a[0] + b[0], a[1] + b[1]]).unwrap();
            prop_assert_eq!(self_intersection_profile(&up).unwrap().self_intersection(new), -1);
            prop_assert_eq!(contract_orbit(&up, &[new]).unwrap(), fan.clone());
        }
    }

    #[test]
    fn traces_are_consistent_under_full_automorphisms(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random_smooth_surface(&mut rng, 8);
        let group = fan_automorphisms(&fan).unwrap();
        let traces = run_equivariant_mmp(&fan, &group, MmpMode::ExploreAll).unwrap();
        prop_assert!(!traces.is_empty());
        for t in &traces {
            check_trace(&fan, t);
        }
        let first = run_equivariant_mmp(&fan, &group, MmpMode::FirstOrbit).unwrap();
        prop_assert_eq!(first.len(), 1);
        prop_assert!(traces.contains(&first[0]));
    }
}

#[test]
fn hexagon_in_weight_lattice_contracts_to_plane() {
    let fan = family("dp6:n2");
    let group = action(&fan, false);
    for mode in [MmpMode::FirstOrbit, MmpMode::ExploreAll] {
        let traces = run_equivariant_mmp(&fan, &group, mode).unwrap();
        assert_eq!(traces.len(), if mode == MmpMode::FirstOrbit { 1 } else { 2 });
        for t in &traces {
            check_trace(&fan, t);
            assert_eq!(t.steps.len(), 1);
            assert_eq!(t.steps[0].orbit.len(), 3);
            assert_eq!(t.label, TerminalLabel::P2);
            assert_eq!(invariant_picard_number(&t.terminal, &t.terminal_group).unwrap(), 1);
        }
    }
}

#[test]
fn hexagon_in_root_lattice_is_already_minimal() {
    let fan = family("dp6:n1");
    let traces = run_equivariant_mmp(&fan, &action(&fan, false), MmpMode::ExploreAll).unwrap();
    assert_eq!(traces.len(), 1);
    assert!(traces[0].steps.is_empty());
    assert_eq!(traces[0].label, TerminalLabel::DP6Terminal);
}

#[test]
fn negation_blocks_the_weight_lattice_contraction() {
    let q22 = make_family_fan(FamilySpec::Q22).unwrap().fan;
    let traces = run_equivariant_mmp(&q22, &action(&q22, true), MmpMode::ExploreAll).unwrap();
    assert_eq!(traces.len(), 1);
    assert!(traces[0].steps.is_empty());
    assert_eq!(traces[0].label, TerminalLabel::DP6Terminal);
    assert!(fan_isomorphism(&traces[0].terminal, &hexagon_fan()).is_some());
}

#[test]
fn terminal_labels() {
    let trivial_run = |spec: &str| {
        let fan = family(spec);
        let t = run_equivariant_mmp(&fan, &GroupAction::trivial(&fan), MmpMode::FirstOrbit).unwrap();
        t[0].label.clone()
    };
    assert_eq!(trivial_run("projective:2"), TerminalLabel::P2);
    assert_eq!(trivial_run("hirzebruch:0"), TerminalLabel::P1xP1);
    assert_eq!(trivial_run("hirzebruch:2"), TerminalLabel::Hirzebruch(2));
    assert_eq!(trivial_run("hirzebruch:-3"), TerminalLabel::Hirzebruch(3));
    // H_1 is the blow-up of P^2 in a point
    assert_eq!(trivial_run("hirzebruch:1"), TerminalLabel::P2);
}

#[test]
fn preconditions() {
    let p112 = family("p11a:2");
    assert!(matches!(
        self_intersection_profile(&p112),
        Err(MmpError::NotSmoothComplete)
    ));
    let h1 = family("hirzebruch:1");
    let profile = self_intersection_profile(&h1).unwrap();
    let not_minus_one = (0..4).find(|&r| profile.self_intersection(r) != -1).unwrap();
    assert!(matches!(
        contract_orbit(&h1, &[not_minus_one]),
        Err(MmpError::NotMinusOne(_))
    ));
    let hex = hexagon_fan();
    let order = self_intersection_profile(&hex).unwrap().order;
    assert!(matches!(
        contract_orbit(&hex, &[order[0], order[1]]),
        Err(MmpError::AdjacentRays(_, _))
    ));
    assert!(matches!(
        self_intersection_profile(&family("projective:3")),
        Err(MmpError::NotSurface(3))
    ));
}

#[test]
fn census_terminates_at_plane_or_hexagon() {
    for lattice in [Lattice::RootA2, Lattice::WeightA2] {
        let fans = census(lattice, false);
        assert!(!fans.is_empty());
        let mut labels = BTreeSet::new();
        for fan in &fans {
            let group = action(fan, false);
            assert_eq!(group.order(), 6);
            for t in run_equivariant_mmp(fan, &group, MmpMode::ExploreAll).unwrap() {
                check_trace(fan, &t);
                assert!(
                    matches!(t.label, TerminalLabel::P2 | TerminalLabel::DP6Terminal),
                    "{lattice} {:?}: {}",
                    fan.rays(),
                    t.label
                );
                let rho = invariant_picard_number(&t.terminal, &t.terminal_group).unwrap();
                assert!(rho == 1 || rho == 2, "rho = {rho}");
                labels.insert(t.label);
            }
        }
        // the root lattice carries no invariant P^2; in the weight lattice
        // the hexagon itself still contracts
        let expected = match lattice {
            Lattice::RootA2 => BTreeSet::from([TerminalLabel::DP6Terminal]),
            _ => BTreeSet::from([TerminalLabel::P2]),
        };
        assert_eq!(labels, expected, "{lattice}");
    }
}

#[test]
fn census_with_negation_stops_at_hexagon() {
    for lattice in [Lattice::RootA2, Lattice::WeightA2] {
        for fan in census(lattice, true) {
            let group = action(&fan, true);
            assert_eq!(group.order(), 12);
            for t in run_equivariant_mmp(&fan, &group, MmpMode::ExploreAll).unwrap() {
                let reaches_six = t.terminal.num_rays() == 6
                    || t.steps.iter().any(|s| s.fan.num_rays() == 6);
                if reaches_six {
                    assert_eq!(t.label, TerminalLabel::DP6Terminal);
                }
                assert!(matches!(t.label, TerminalLabel::P2 | TerminalLabel::DP6Terminal));
            }
        }
    }
}

#[test]
fn adjacent_minus_one_pairs_have_opposite_neighbours() {
    for lattice in [Lattice::RootA2, Lattice::WeightA2] {
        for negation in [false, true] {
            for fan in census(lattice, negation) {
                let found = check_adjacent_minus_one_rule(&fan).unwrap();
                let profile = self_intersection_profile(&fan).unwrap();
                let n = profile.order.len();
                let mut expected = 0;
                for k in 0..n {
                    let (a, b) = (profile.order[k], profile.order[(k + 1) % n]);
                    if profile.self_intersection(a) == -1 && profile.self_intersection(b) == -1 {
                        expected += 1;
                        let p = fan.ray(profile.order[(k + n - 1) % n]);
                        let q = fan.ray(profile.order[(k + 2) % n]);
                        assert_eq!([p[0] + q[0], p[1] + q[1]], [0, 0]);
                    }
                }
                assert_eq!(found.len(), expected);
            }
        }
    }
}
