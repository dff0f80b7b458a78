mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_core::families::corpus_specs;
use toric_core::{
    class_group, derive_block_relation, derive_block_relation_with_anchor, make_family_fan,
    ray_blocks, rays_linearly_equivalent, relation_lattice, DivisorError, Fan, FamilySpec,
    IntMatrix, Lattice,
};

use common::random_smooth_surface;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn family(spec: FamilySpec) -> Fan {
    make_family_fan(spec).unwrap().fan
}

fn pairing(u: &[BigInt], v: &[i64]) -> BigInt {
    u.iter().zip(v).map(|(a, &b)| a * b).sum()
}

fn relation_holds(fan: &Fan, c: &[BigInt]) -> bool {
    (0..fan.rank()).all(|k| {
        c.iter()
            .enumerate()
            .map(|(i, ci)| ci * fan.ray(i)[k])
            .sum::<BigInt>()
            == BigInt::from(0)
    })
}

/// Brute-force search for `u` with `⟨u, vₖ⟩ = δₖᵢ − δₖⱼ` in a small box.
fn equivalence_witness(fan: &Fan, i: usize, j: usize, bound: i64) -> bool {
    let n = fan.rank();
    let mut u = vec![-bound; n];
    loop {
        let ok = (0..fan.num_rays()).all(|k| {
            let p: i64 = u.iter().zip(fan.ray(k)).map(|(a, b)| a * b).sum();
            p == i64::from(k == i) - i64::from(k == j)
        });
        if ok {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            if u[pos] < bound {
                u[pos] += 1;
                break;
            }
            u[pos] = -bound;
            pos += 1;
        }
    }
}

fn assert_block_oracle(fan: &Fan, label: &str) {
    let cl = class_group(fan).unwrap();
    let relations = relation_lattice(fan);
    let blocks = ray_blocks(fan).unwrap();
    for i in 0..fan.num_rays() {
        for j in 0..fan.num_rays() {
            let same = blocks.block_of(i).unwrap().contains(&j);
            assert_eq!(same, rays_linearly_equivalent(fan, i, j), "{label}: {i} {j}");
            if cl.group.is_torsion_free() {
                let orthogonal = relations.basis.iter().all(|c| c[i] == c[j]);
                assert_eq!(same, orthogonal, "{label}: {i} {j}");
            }
            if same && fan.rank() <= 4 {
                assert!(equivalence_witness(fan, i, j, 3), "{label}: {i} {j}");
            }
        }
    }
}

#[test]
fn rank_law_on_corpus() {
    for spec in corpus_specs() {
        let fan = family(spec);
        let cl = class_group(&fan).unwrap();
        assert_eq!(cl.group.free_rank(), fan.num_rays() - fan.rank(), "{spec}");
        assert_eq!(relation_lattice(&fan).rank(), fan.num_rays() - fan.rank(), "{spec}");
        for c in &relation_lattice(&fan).basis {
            assert!(relation_holds(&fan, c), "{spec}");
        }
    }
}

#[test]
fn blocks_agree_with_independent_equivalence_tests() {
    for spec in corpus_specs() {
        assert_block_oracle(&family(spec), &spec.to_string());
    }
}

proptest! {
    #[test]
    fn random_smooth_surfaces_obey_rank_law(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random_smooth_surface(&mut rng, 10);
        let cl = class_group(&fan).unwrap();
        prop_assert!(cl.group.is_torsion_free());
        prop_assert_eq!(cl.group.free_rank(), fan.num_rays() - 2);
        assert_block_oracle(&fan, "random");
    }
}

#[test]
fn class_groups_of_examples() {
    let p2 = family(FamilySpec::ProjectiveSpace(2));
    assert_eq!(class_group(&p2).unwrap().group.to_string(), "Z");
    assert_eq!(ray_blocks(&p2).unwrap().sizes(), vec![3]);

    let dp6 = family(FamilySpec::Dp6(Lattice::RootA2));
    assert_eq!(class_group(&dp6).unwrap().group.to_string(), "Z^4");
    assert_eq!(ray_blocks(&dp6).unwrap().sizes(), vec![1; 6]);

    let p112 = family(FamilySpec::WeightedP11a(2));
    assert_eq!(class_group(&p112).unwrap().group.free_rank(), 1);
    assert_eq!(ray_blocks(&p112).unwrap().sizes(), vec![2, 1]);

    let sing = family(FamilySpec::SingularHexagon);
    assert_eq!(class_group(&sing).unwrap().group.free_rank(), 4);
}

#[test]
fn block_sizes_of_families() {
    let sizes = |s: FamilySpec| ray_blocks(&family(s)).unwrap().sizes();
    assert_eq!(sizes(FamilySpec::ProjectiveSpace(4)), vec![5]);
    // weight one is P^4, where the fifth ray joins the block
    assert_eq!(sizes(FamilySpec::WeightedP1111m(1)), vec![5]);
    for m in 2..=4 {
        assert_eq!(sizes(FamilySpec::WeightedP1111m(m)), vec![4, 1]);
    }
    for a in -2..=2 {
        let bundle = if a == 0 { vec![4, 2] } else { vec![4, 1, 1] };
        assert_eq!(sizes(FamilySpec::BundleOverP3(a)), bundle, "a = {a}");
        let hirz = if a == 0 { vec![2, 2] } else { vec![2, 1, 1] };
        assert_eq!(sizes(FamilySpec::Hirzebruch(a)), hirz, "a = {a}");
        if a != 0 {
            assert_eq!(sizes(FamilySpec::BundleOverP1xP1(a)), vec![2, 2, 1, 1], "a = {a}");
        }
    }
}

fn check_relation(fan: &Fan, block: &[usize], expected: &[i64]) {
    let rel = derive_block_relation(fan, block).unwrap();
    assert_eq!(rel.anchor, *block.iter().max().unwrap());
    assert_eq!(rel.relation, big(expected));
    assert!(relation_holds(fan, &rel.relation));
    assert!(relation_lattice(fan).contains(&rel.relation));
    for (j, u) in &rel.duals {
        for i in 0..fan.num_rays() {
            let want = i64::from(i == *j) - i64::from(i == rel.anchor);
            assert_eq!(pairing(u, fan.ray(i)), BigInt::from(want), "u_{j} on v_{i}");
        }
    }
    let duals: Vec<Vec<BigInt>> = rel.duals.iter().map(|(_, u)| u.clone()).collect();
    let m = IntMatrix::from_big_rows(&duals, fan.rank()).unwrap();
    assert_eq!(m.rank(), block.len() - 1);
    for anchor in block {
        let other = derive_block_relation_with_anchor(fan, block, *anchor).unwrap();
        assert_eq!(other.relation, rel.relation, "anchor {anchor}");
    }
}

#[test]
fn forced_relations_of_weighted_spaces() {
    check_relation(&family(FamilySpec::WeightedP1111m(1)), &[0, 1, 2, 3, 4], &[1; 5]);
    for m in 2..=4 {
        let fan = family(FamilySpec::WeightedP1111m(m));
        check_relation(&fan, &[0, 1, 2, 3], &[1, 1, 1, 1, m]);
    }
    let fan = family(FamilySpec::WeightedP1111m(2));
    let rel = derive_block_relation(&fan, &[0, 1, 2, 3]).unwrap();
    assert_eq!(rel.duals[0], (0, big(&[1, 0, 0, 0])));
}

#[test]
fn forced_relations_of_bundles() {
    for a in -2..=2 {
        let fan = family(FamilySpec::BundleOverP3(a));
        check_relation(&fan, &[0, 1, 2, 3], &[1, 1, 1, 1, -a, 0]);
        if a != 0 {
            let m = IntMatrix::from_i64_rows(&fan.rays()[..4].to_vec()).unwrap();
            assert_eq!(m.rank(), 4, "a = {a}");
        }
    }
}

#[test]
fn forced_relation_errors() {
    let fan = family(FamilySpec::BundleOverP3(1));
    assert!(matches!(
        derive_block_relation(&fan, &[0, 4]),
        Err(DivisorError::NotABlock(_))
    ));
    assert!(matches!(
        derive_block_relation(&fan, &[4]),
        Err(DivisorError::BlockTooSmall(_))
    ));
    assert!(matches!(
        derive_block_relation_with_anchor(&fan, &[0, 1, 2, 3], 5),
        Err(DivisorError::AnchorOutsideBlock { .. })
    ));
}
