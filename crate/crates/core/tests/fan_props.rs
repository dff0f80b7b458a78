mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_core::fan::primitive;
use toric_core::{
    build_surface_fan, cone_invariant_factors, fan_isomorphism, fan_isomorphisms,
    make_family_fan, validate_fan, Fan, FamilySpec, FanError, IntMatrix, Lattice,
};

use common::{det_naive, in_closed_half_plane, random_smooth_surface, random_unimodular};

fn distinct_primitive(raw: Vec<(i64, i64)>) -> Vec<Vec<i64>> {
    let mut seen = BTreeSet::new();
    raw.into_iter()
        .filter(|&(x, y)| (x, y) != (0, 0))
        .map(|(x, y)| primitive(&[x, y]).unwrap())
        .filter(|v| seen.insert(v.clone()))
        .collect()
}

fn transformed(fan: &Fan, g: &IntMatrix) -> Fan {
    let rays = fan.rays().iter().map(|r| g.apply_i64(r).unwrap()).collect();
    Fan::new(fan.lattice(), rays, fan.cones().to_vec()).unwrap()
}

fn smooth_by_det(fan: &Fan) -> bool {
    fan.cones().iter().all(|c| {
        let rows: Vec<Vec<i64>> = c.iter().map(|&i| fan.ray(i).to_vec()).collect();
        det_naive(&rows).abs() == 1
    })
}

proptest! {
    #[test]
    fn surface_completeness_matches_half_plane_test(
        raw in proptest::collection::vec((-4i64..=4, -4i64..=4), 3..8)
    ) {
        let rays = distinct_primitive(raw);
        prop_assume!(rays.len() >= 3);
        match build_surface_fan(Lattice::Standard(2), &rays) {
            Ok(fan) => {
                prop_assert!(!in_closed_half_plane(&rays));
                let report = validate_fan(&fan);
                prop_assert!(report.complete && report.simplicial);
                prop_assert_eq!(report.smooth, smooth_by_det(&fan));
                prop_assert_eq!(fan.num_rays(), rays.len());
                let got: BTreeSet<_> = fan.rays().iter().cloned().collect();
                let want: BTreeSet<_> = rays.iter().cloned().collect();
                prop_assert_eq!(got, want);
            }
            Err(FanError::Incomplete(_)) => prop_assert!(in_closed_half_plane(&rays)),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn rays_are_made_primitive(x in -20i64..=20, y in -20i64..=20, k in 1i64..=5) {
        prop_assume!((x, y) != (0, 0));
        let fan = build_surface_fan(
            Lattice::Standard(2),
            &[vec![k * x, k * y], vec![-1, 0], vec![0, -1], vec![1, 1]],
        );
        if let Ok(fan) = fan {
            let p = primitive(&[x, y]).unwrap();
            prop_assert!(fan.ray_index(&p).is_some());
        }
    }

    #[test]
    fn isomorphism_is_invariant_under_unimodular_change(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random_smooth_surface(&mut rng, 7);
        let g = random_unimodular(&mut rng, 2, 4);
        let moved = transformed(&fan, &g);
        let (a, b) = (validate_fan(&fan), validate_fan(&moved));
        prop_assert_eq!((a.complete, a.simplicial, a.smooth), (b.complete, b.simplicial, b.smooth));
        let h = fan_isomorphism(&fan, &moved).expect("isomorphic by construction");
        prop_assert!(fan.maps_onto(&h, &moved).is_some());
        prop_assert!(fan_isomorphism(&moved, &fan).is_some());
        let count = fan_isomorphisms(&fan, &fan).len();
        prop_assert_eq!(fan_isomorphisms(&fan, &moved).len(), count);
        prop_assert_eq!(fan_isomorphisms(&moved, &moved).len(), count);
    }

    #[test]
    fn ambient_coordinates_roundtrip(a in -50i64..=50, b in -50i64..=50, p in 0usize..6) {
        for l in [Lattice::RootA2, Lattice::WeightA2] {
            let amb = l.ambient(&[a, b]);
            prop_assert_eq!(l.lattice_coords(&amb).unwrap(), vec![a, b]);
            let perm = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][p];
            let mut moved = [0i64; 3];
            for i in 0..3 {
                moved[perm[i]] = amb[i];
            }
            let g = l.coordinate_permutation(perm).unwrap();
            prop_assert_eq!(g.apply_i64(&[a, b]).unwrap(), l.lattice_coords(&moved).unwrap());
            prop_assert!(g.is_unimodular());
        }
    }
}

#[test]
fn smooth_fans_are_simplicial() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let fan = random_smooth_surface(&mut rng, 10);
        let r = validate_fan(&fan);
        assert!(r.smooth && r.simplicial && r.complete);
        for c in fan.cones() {
            assert!(cone_invariant_factors(&fan, c).iter().all(|d| *d == BigInt::from(1)));
        }
    }
}

#[test]
fn hexagons_in_both_lattices_are_isomorphic() {
    let n1 = make_family_fan(FamilySpec::Dp6(Lattice::RootA2)).unwrap().fan;
    let n2 = make_family_fan(FamilySpec::Dp6(Lattice::WeightA2)).unwrap().fan;
    assert!(fan_isomorphism(&n1, &n2).is_some());
    assert_eq!(fan_isomorphisms(&n1, &n2).len(), 12);
    let p2 = make_family_fan(FamilySpec::ProjectiveSpace(2)).unwrap().fan;
    assert!(fan_isomorphism(&n1, &p2).is_none());
}

#[test]
fn identity_is_the_first_self_isomorphism() {
    for spec in ["projective:3", "bundle-p1xp1:1", "hirzebruch:2", "dp6:n2"] {
        let fan = make_family_fan(spec.parse().unwrap()).unwrap().fan;
        assert!(fan_isomorphism(&fan, &fan).unwrap().is_identity(), "{spec}");
    }
}

#[test]
fn higher_rank_isomorphism_under_base_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in ["projective:3", "bundle-p1xp1:2", "bundle-p3:1", "p1111m:2"] {
        let fan = make_family_fan(spec.parse().unwrap()).unwrap().fan;
        let g = random_unimodular(&mut rng, fan.rank(), 5);
        let moved = transformed(&fan, &g);
        assert_eq!(validate_fan(&moved), validate_fan(&fan), "{spec}");
        assert!(fan_isomorphism(&fan, &moved).is_some(), "{spec}");
    }
}

#[test]
fn weighted_and_hirzebruch_are_distinguished() {
    let h1 = make_family_fan(FamilySpec::Hirzebruch(1)).unwrap().fan;
    let h2 = make_family_fan(FamilySpec::Hirzebruch(2)).unwrap().fan;
    let hm2 = make_family_fan(FamilySpec::Hirzebruch(-2)).unwrap().fan;
    assert!(fan_isomorphism(&h1, &h2).is_none());
    assert!(fan_isomorphism(&h2, &hm2).is_some());
    let p112 = make_family_fan(FamilySpec::WeightedP11a(2)).unwrap().fan;
    let r = validate_fan(&p112);
    assert!(r.complete && r.simplicial && !r.smooth);
}

#[test]
fn structural_errors() {
    let l = Lattice::Standard(2);
    assert!(matches!(
        Fan::new(l, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![0, 1]]),
        Err(FanError::DuplicateCone(_))
    ));
    assert!(matches!(
        Fan::new(l, vec![vec![1, 0], vec![0, 1], vec![-1, 0]], vec![vec![0, 2]]),
        Err(FanError::NotSimplicial(_))
    ));
    assert!(matches!(
        build_surface_fan(l, &[vec![1, 0], vec![0, 1], vec![2, 0]]),
        Err(FanError::ParallelRays(_, _))
    ));
    assert!(matches!(
        build_surface_fan(l, &[vec![1, 0], vec![0, 1], vec![-1, 1]]),
        Err(FanError::Incomplete(_))
    ));
    assert!(matches!(
        build_surface_fan(Lattice::Standard(3), &[vec![1, 0, 0]]),
        Err(FanError::NotSurface(3))
    ));
    assert!(matches!(
        Lattice::RootA2.lattice_coords(&[1, 1, 1]),
        Err(FanError::NotInRootLattice(_))
    ));
    for s in ["rootA2", "weightA2", "standard:4"] {
        assert_eq!(s.parse::<Lattice>().unwrap().to_string(), s);
    }
    assert!("standard:0".parse::<Lattice>().is_err());
}

#[test]
fn three_dimensional_incomplete_fan_is_flagged() {
    let fan = Fan::new(
        Lattice::Standard(3),
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]],
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]],
    )
    .unwrap();
    let r = validate_fan(&fan);
    assert!(r.simplicial && !r.complete);
}
