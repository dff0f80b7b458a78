//! The acceptance suite behind `verify-paper`.
//!
//! Every criterion is exact: counts, integer vectors and group orders are
//! compared for equality, so the pinned tolerance is zero throughout.

use std::collections::BTreeSet;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use toric_core::families::{corpus_specs, s3_generators_with_negation};
use toric_core::mmp::p1xp1_fan;
use toric_core::{
    action_from_generators, blow_up, build_surface_fan, centralizer_in_gl,
    check_adjacent_minus_one_rule, check_diagonal_obstruction, class_group,
    derive_block_relation, enumerate_invariant_fans, fan_automorphisms, invariant_picard_number,
    make_family_fan, ray_blocks, ray_orbits, run_equivariant_mmp, satisfies_star,
    self_intersection_profile, smith_normal_form, standard_field, symmetric_action_criteria,
    verify_negative_one_witness, BaseField, CriteriaAnswer, CriteriaQuery, EnumerationParams, Fan,
    FamilyError, FamilyFan, FamilySpec, GroupAction, IntMatrix, Lattice, MmpMode, QuadElement,
    QuadField, TerminalLabel,
};

/// Exact comparison everywhere.
pub const TOLERANCE: i64 = 0;
pub const RANDOM_SURFACES: usize = 200;
pub const RANDOM_SURFACE_MAX_RAYS: usize = 10;
pub const RANDOM_SEED: u64 = 0x5eed_0003;
pub const CENSUS_HEIGHTS: [i64; 2] = [1, 2];
pub const CENSUS_MAX_RAYS: usize = 12;

pub type FamilyBuilder = fn(FamilySpec) -> Result<FamilyFan, FamilyError>;

/// Inputs of the suite. `families` is swappable so that tests can inject a
/// faulty constructor.
#[derive(Clone, Copy)]
pub struct Harness {
    pub families: FamilyBuilder,
    pub random_surfaces: usize,
    pub seed: u64,
}

impl Default for Harness {
    fn default() -> Self {
        Self {
            families: make_family_fan,
            random_surfaces: RANDOM_SURFACES,
            seed: RANDOM_SEED,
        }
    }
}

type Check = fn(&Harness) -> Result<String, String>;

pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{:<4} {status}  {}: {}", self.id, self.title, self.detail)
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

pub fn criteria() -> &'static [Criterion] {
    &[
        Criterion { id: "A1", title: "rank Cl = |rays| - rank N", check: rank_law },
        Criterion { id: "A2", title: "ray block sizes", check: block_sizes },
        Criterion { id: "A3", title: "forced block relations", check: forced_relations },
        Criterion { id: "A4", title: "singular hexagon cone", check: singular_cone },
        Criterion { id: "A5", title: "automorphism orders", check: automorphism_orders },
        Criterion { id: "A6", title: "two permutation actions on the hexagon", check: two_actions },
        Criterion { id: "A7", title: "equivariant MMP census", check: mmp_census },
        Criterion { id: "A8", title: "adjacent (-1) rays", check: adjacent_rule },
        Criterion { id: "A9", title: "centralizer of S3 is {I, -I}", check: centralizers },
        Criterion { id: "A10", title: "condition (star) table", check: star_table },
        Criterion { id: "A11", title: "diagonal swap obstruction", check: diagonal_obstruction },
        Criterion { id: "A12", title: "parity criteria and degree tables", check: criteria_tables },
    ]
}

fn run_one(harness: &Harness, c: &Criterion) -> Outcome {
    let result = catch_unwind(AssertUnwindSafe(|| (c.check)(harness)))
        .unwrap_or_else(|_| Err("panicked".to_string()));
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome {
        id: c.id.to_string(),
        title: c.title.to_string(),
        passed,
        detail,
    }
}

/// Runs every criterion, or only the one named by `only`. `None` when
/// `only` names no criterion.
pub fn run(harness: &Harness, only: Option<&str>) -> Option<Vec<Outcome>> {
    let selected: Vec<&Criterion> = criteria()
        .iter()
        .filter(|c| only.map_or(true, |id| c.id.eq_ignore_ascii_case(id)))
        .collect();
    if selected.is_empty() {
        return None;
    }
    Some(selected.into_iter().map(|c| run_one(harness, c)).collect())
}

fn family(h: &Harness, spec: FamilySpec) -> Result<FamilyFan, String> {
    (h.families)(spec).map_err(|e| format!("{spec}: {e}"))
}

fn fan_of(h: &Harness, spec: FamilySpec) -> Result<Fan, String> {
    family(h, spec).map(|f| f.fan)
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Smooth complete surface: a minimal one followed by random toric blow-ups.
pub fn random_smooth_surface(rng: &mut ChaCha8Rng, max_rays: usize) -> Fan {
    let rays: Vec<Vec<i64>> = match rng.gen_range(0..3) {
        0 => vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        1 => vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        _ => {
            let a = rng.gen_range(1..=3);
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]]
        }
    };
    let mut fan = build_surface_fan(Lattice::Standard(2), &rays).expect("minimal surface");
    let target = rng.gen_range(fan.num_rays()..=max_rays.max(fan.num_rays()));
    while fan.num_rays() < target {
        let k = rng.gen_range(0..fan.cones().len());
        fan = blow_up(&fan, k).expect("blow-up of a smooth surface");
    }
    fan
}

fn rank_law(h: &Harness) -> Result<String, String> {
    let mut fans = Vec::new();
    for spec in corpus_specs() {
        fans.push((spec.to_string(), fan_of(h, spec)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h.seed);
    for k in 0..h.random_surfaces {
        fans.push((format!("random #{k}"), random_smooth_surface(&mut rng, RANDOM_SURFACE_MAX_RAYS)));
    }
    for (name, fan) in &fans {
        let cl = class_group(fan).map_err(|e| format!("{name}: {e}"))?;
        let expected = fan.num_rays() as i64 - fan.rank() as i64;
        let got = cl.group.free_rank() as i64;
        ensure!((got - expected).abs() <= TOLERANCE, "{name}: rank Cl = {got}, expected {expected}");
    }
    Ok(format!("{} fans", fans.len()))
}

fn block_sizes(h: &Harness) -> Result<String, String> {
    let mut cases: Vec<(FamilySpec, Vec<usize>)> = vec![(FamilySpec::ProjectiveSpace(4), vec![5])];
    // weight one is P^4 itself, whose five rays form a single block
    cases.push((FamilySpec::WeightedP1111m(1), vec![5]));
    for m in 2..=4 {
        cases.push((FamilySpec::WeightedP1111m(m), vec![4, 1]));
    }
    for a in -2..=2 {
        let bundle = if a == 0 { vec![4, 2] } else { vec![4, 1, 1] };
        cases.push((FamilySpec::BundleOverP3(a), bundle));
        let hirzebruch = if a == 0 { vec![2, 2] } else { vec![2, 1, 1] };
        cases.push((FamilySpec::Hirzebruch(a), hirzebruch));
        if a != 0 {
            cases.push((FamilySpec::BundleOverP1xP1(a), vec![2, 2, 1, 1]));
        }
    }
    for (spec, expected) in &cases {
        let fan = fan_of(h, *spec)?;
        let got = ray_blocks(&fan).map_err(|e| format!("{spec}: {e}"))?.sizes();
        ensure!(got == *expected, "{spec}: blocks {got:?}, expected {expected:?}");
    }
    Ok(format!("{} families", cases.len()))
}

fn check_relation(fan: &Fan, spec: FamilySpec, block: &[usize], expected: &[i64]) -> Result<(), String> {
    let rel = derive_block_relation(fan, block).map_err(|e| format!("{spec}: {e}"))?;
    let want = big(expected);
    let negated: Vec<BigInt> = want.iter().map(|x| -x).collect();
    ensure!(
        rel.relation == want || rel.relation == negated,
        "{spec}: relation {:?}, expected {expected:?}",
        rel.relation
    );
    for (j, u) in &rel.duals {
        for i in 0..fan.num_rays() {
            let pairing: BigInt = u.iter().zip(fan.ray(i)).map(|(a, &b)| a * b).sum();
            let want = i64::from(i == *j) - i64::from(i == rel.anchor);
            ensure!(pairing == BigInt::from(want), "{spec}: <u_{j}, v_{i}> = {pairing}");
        }
    }
    let duals: Vec<Vec<BigInt>> = rel.duals.iter().map(|(_, u)| u.clone()).collect();
    let m = IntMatrix::from_big_rows(&duals, fan.rank()).map_err(|e| e.to_string())?;
    ensure!(m.rank() == duals.len(), "{spec}: dual vectors are dependent");
    Ok(())
}

fn forced_relations(h: &Harness) -> Result<String, String> {
    let mut n = 0;
    for m in 1..=4 {
        let spec = FamilySpec::WeightedP1111m(m);
        let fan = fan_of(h, spec)?;
        let block: Vec<usize> = if m == 1 { (0..5).collect() } else { (0..4).collect() };
        check_relation(&fan, spec, &block, &[1, 1, 1, 1, m])?;
        n += 1;
    }
    for a in -2..=2 {
        let spec = FamilySpec::BundleOverP3(a);
        check_relation(&fan_of(h, spec)?, spec, &[0, 1, 2, 3], &[1, 1, 1, 1, -a, 0])?;
        n += 1;
    }
    Ok(format!("{n} relations with dual vectors"))
}

fn singular_cone(h: &Harness) -> Result<String, String> {
    let fan = fan_of(h, FamilySpec::SingularHexagon)?;
    let l = Lattice::RootA2;
    let a = l.lattice_coords(&[3, -1, -2]).map_err(|e| e.to_string())?;
    let b = l.lattice_coords(&[3, -2, -1]).map_err(|e| e.to_string())?;
    let (i, j) = match (fan.ray_index(&a), fan.ray_index(&b)) {
        (Some(i), Some(j)) => (i.min(j), i.max(j)),
        _ => return Err("rays missing from the fan".into()),
    };
    ensure!(fan.cones().iter().any(|c| c == &[i, j]), "the two rays do not span a cone");
    let m = IntMatrix::from_i64_columns(&[a, b], 2).map_err(|e| e.to_string())?;
    let factors = smith_normal_form(&m).invariant_factors();
    ensure!(factors == big(&[1, 3]), "invariant factors {factors:?}");
    Ok("invariant factors (1, 3)".into())
}

fn automorphism_orders(h: &Harness) -> Result<String, String> {
    let cases = [
        ("P1xP1", fan_of(h, FamilySpec::Hirzebruch(0))?, 8),
        ("dP6 N1", fan_of(h, FamilySpec::Dp6(Lattice::RootA2))?, 12),
        ("dP6 N2", fan_of(h, FamilySpec::Dp6(Lattice::WeightA2))?, 12),
        ("P2", fan_of(h, FamilySpec::ProjectiveSpace(2))?, 6),
    ];
    let mut parts = Vec::new();
    for (name, fan, expected) in &cases {
        let order = fan_automorphisms(fan).map_err(|e| e.to_string())?.order();
        ensure!(order == *expected, "{name}: order {order}, expected {expected}");
        parts.push(format!("{name} {order}"));
    }
    ensure!(
        fan_automorphisms(&p1xp1_fan()).map_err(|e| e.to_string())?.order() == 8,
        "reference P1xP1 fan"
    );
    Ok(parts.join(", "))
}

fn s3_action(fan: &Fan, negation: bool) -> Result<GroupAction, String> {
    let gens = s3_generators_with_negation(fan.lattice(), negation).map_err(|e| e.to_string())?;
    action_from_generators(fan, &gens).map_err(|e| e.to_string())
}

fn orbit_sizes(group: &GroupAction) -> Vec<usize> {
    let mut s: Vec<usize> = ray_orbits(group).iter().map(Vec::len).collect();
    s.sort_unstable();
    s
}

fn two_actions(h: &Harness) -> Result<String, String> {
    let n2 = fan_of(h, FamilySpec::Dp6(Lattice::WeightA2))?;
    let g2 = s3_action(&n2, false)?;
    ensure!(orbit_sizes(&g2) == [3, 3], "N2 orbits {:?}", orbit_sizes(&g2));
    for mode in [MmpMode::FirstOrbit, MmpMode::ExploreAll] {
        let traces = run_equivariant_mmp(&n2, &g2, mode).map_err(|e| e.to_string())?;
        for t in &traces {
            ensure!(
                t.steps.len() == 1 && t.label == TerminalLabel::P2,
                "N2 {mode:?}: {} steps to {}",
                t.steps.len(),
                t.label
            );
        }
    }
    let n1 = fan_of(h, FamilySpec::Dp6(Lattice::RootA2))?;
    let g1 = s3_action(&n1, false)?;
    ensure!(orbit_sizes(&g1) == [6], "N1 orbits {:?}", orbit_sizes(&g1));
    for mode in [MmpMode::FirstOrbit, MmpMode::ExploreAll] {
        let traces = run_equivariant_mmp(&n1, &g1, mode).map_err(|e| e.to_string())?;
        for t in &traces {
            ensure!(
                t.steps.is_empty() && t.label == TerminalLabel::DP6Terminal,
                "N1 {mode:?}: {} steps to {}",
                t.steps.len(),
                t.label
            );
        }
    }
    Ok("N2: orbits 3+3, one step to P2; N1: one orbit of 6, minimal".into())
}

fn census(lattice: Lattice, negation: bool) -> Result<Vec<Fan>, String> {
    let mut out = Vec::new();
    for height in CENSUS_HEIGHTS {
        let fans = enumerate_invariant_fans(EnumerationParams {
            lattice,
            height,
            max_rays: CENSUS_MAX_RAYS,
            require_smooth: true,
            include_negation: negation,
        })
        .map_err(|e| e.to_string())?;
        out.extend(fans.into_iter().map(|f| f.fan));
    }
    Ok(out)
}

fn mmp_census(_: &Harness) -> Result<String, String> {
    let mut fans = 0;
    let mut branches = 0;
    let mut labels = BTreeSet::new();
    for lattice in [Lattice::RootA2, Lattice::WeightA2] {
        for negation in [false, true] {
            for fan in census(lattice, negation)? {
                fans += 1;
                let group = s3_action(&fan, negation)?;
                let traces = run_equivariant_mmp(&fan, &group, MmpMode::ExploreAll)
                    .map_err(|e| format!("{lattice} {:?}: {e}", fan.rays()))?;
                for t in traces {
                    branches += 1;
                    ensure!(
                        matches!(t.label, TerminalLabel::P2 | TerminalLabel::DP6Terminal),
                        "{lattice} {:?}: terminal {}",
                        fan.rays(),
                        t.label
                    );
                    let reaches_six = t.terminal.num_rays() == 6
                        || t.steps.iter().any(|s| s.fan.num_rays() == 6);
                    ensure!(
                        !(negation && reaches_six) || t.label == TerminalLabel::DP6Terminal,
                        "{lattice} {:?}: with -I a 6-ray stage ends at {}",
                        fan.rays(),
                        t.label
                    );
                    let rho = invariant_picard_number(&t.terminal, &t.terminal_group)
                        .map_err(|e| e.to_string())?;
                    ensure!(rho == 1 || rho == 2, "{lattice} {:?}: rho^G = {rho}", fan.rays());
                    labels.insert(t.label.to_string());
                }
            }
        }
    }
    ensure!(fans > 0, "empty census");
    Ok(format!(
        "{fans} fans, {branches} branches, terminals {{{}}}",
        labels.into_iter().collect::<Vec<_>>().join(", ")
    ))
}

fn adjacent_rule(_: &Harness) -> Result<String, String> {
    let mut fans = 0;
    let mut pairs = 0;
    for lattice in [Lattice::RootA2, Lattice::WeightA2] {
        for negation in [false, true] {
            for fan in census(lattice, negation)? {
                fans += 1;
                let found = check_adjacent_minus_one_rule(&fan).map_err(|e| e.to_string())?;
                for inst in &found {
                    let (a, b) = (fan.ray(inst.neighbours.0), fan.ray(inst.neighbours.1));
                    ensure!(a[0] + b[0] == 0 && a[1] + b[1] == 0, "{:?}: v0 + v3 != 0", fan.rays());
                }
                let profile = self_intersection_profile(&fan).map_err(|e| e.to_string())?;
                let n = profile.order.len();
                let expected = (0..n)
                    .filter(|&k| {
                        profile.is_minus_one(profile.order[k])
                            && profile.is_minus_one(profile.order[(k + 1) % n])
                    })
                    .count();
                ensure!(found.len() == expected, "{:?}: missed adjacent pairs", fan.rays());
                pairs += found.len();
            }
        }
    }
    Ok(format!("{fans} fans, {pairs} adjacent pairs"))
}

fn centralizers(h: &Harness) -> Result<String, String> {
    let want = BTreeSet::from([IntMatrix::identity(2), IntMatrix::negative_identity(2)]);
    for lattice in [Lattice::RootA2, Lattice::WeightA2] {
        let fan = fan_of(h, FamilySpec::Dp6(lattice))?;
        let group = s3_action(&fan, false)?;
        let got: BTreeSet<IntMatrix> = centralizer_in_gl(&group)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        ensure!(got == want, "{lattice}: centralizer {got:?}");
    }
    Ok("N1 and N2".into())
}

fn star_table(_: &Harness) -> Result<String, String> {
    let field = |name: &str| standard_field(name).map_err(|e| e.to_string());
    for name in ["Q", "R"] {
        ensure!(satisfies_star(&field(name)?).map_err(|e| e.to_string())?, "{name} fails");
    }
    for name in ["Q(sqrt-3)", "Q(sqrt-1)"] {
        let f = field(name)?;
        ensure!(verify_negative_one_witness(&f).map_err(|e| e.to_string())?, "{name}: witness");
        ensure!(!satisfies_star(&f).map_err(|e| e.to_string())?, "{name} satisfies star");
    }
    let k = QuadField::quadratic(-3).map_err(|e| e.to_string())?;
    let one = QuadElement::from_int(k, 1);
    let two = QuadElement::from_int(k, 2);
    let s = QuadElement::sqrt(k);
    let half = |x: QuadElement| x.div(&two).map_err(|e| e.to_string());
    let pair = (
        half(one.add(&s).map_err(|e| e.to_string())?)?,
        half(one.sub(&s).map_err(|e| e.to_string())?)?,
    );
    ensure!(field("Q(sqrt-3)")?.witness() == Some(&pair), "witness is not ((1+w)/2, (1-w)/2)");
    Ok("Q, R satisfy; Q(sqrt-3), Q(sqrt-1) refuted by witnesses".into())
}

fn diagonal_obstruction(_: &Harness) -> Result<String, String> {
    for a in 0..=2 {
        let r = check_diagonal_obstruction(a);
        ensure!(r.swap_exchanges_subdivisions, "a = {a}: swap does not exchange");
        ensure!(!r.swap_fixes_a_subdivision, "a = {a}: swap fixes a subdivision");
        ensure!(r.six_ray_fan_preserved, "a = {a}: six-ray fan not preserved");
    }
    Ok("a = 0, 1, 2".into())
}

fn criteria_tables(_: &Harness) -> Result<String, String> {
    let ask = |q| symmetric_action_criteria(q).map_err(|e| e.to_string());
    for k in 1..=6 {
        let even = CriteriaAnswer::Holds(k % 2 == 0);
        ensure!(ask(CriteriaQuery::S6OnWeightedP1111m(k))? == even, "weighted m = {k}");
        ensure!(ask(CriteriaQuery::S6OnBundleOverP3(k))? == even, "bundle a = {k}");
    }
    let complex = [(1, 4, 1), (2, 5, 1), (3, 6, 1), (4, 6, 4), (5, 7, 1)];
    let star = [(1, 3, 1, false), (2, 4, 0, true), (3, 5, 1, false), (4, 6, 1, false), (5, 7, 1, false)];
    for (n, deg, count) in complex {
        match ask(CriteriaQuery::MaxDegree { dimension: n, field: BaseField::Complex })? {
            CriteriaAnswer::MaxDegree { degree, varieties, infinite_family } => ensure!(
                degree == deg && varieties.len() == count && !infinite_family,
                "complex n = {n}: S_{degree} on {varieties:?}"
            ),
            other => return Err(format!("complex n = {n}: {other:?}")),
        }
    }
    for (n, deg, count, infinite) in star {
        match ask(CriteriaQuery::MaxDegree { dimension: n, field: BaseField::Star })? {
            CriteriaAnswer::MaxDegree { degree, varieties, infinite_family } => ensure!(
                degree == deg && varieties.len() == count && infinite_family == infinite,
                "star n = {n}: S_{degree} on {varieties:?}"
            ),
            other => return Err(format!("star n = {n}: {other:?}")),
        }
    }
    Ok("m, a in 1..6; n in 1..5".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_ordered() {
        let ids: Vec<&str> = criteria().iter().map(|c| c.id).collect();
        let expected: Vec<String> = (1..=12).map(|k| format!("A{k}")).collect();
        assert_eq!(ids, expected);
    }

    #[test]
    fn unknown_filter() {
        assert!(run(&Harness::default(), Some("A99")).is_none());
        assert_eq!(run(&Harness::default(), Some("a4")).unwrap().len(), 1);
    }

    #[test]
    fn random_surfaces_are_smooth() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let fan = random_smooth_surface(&mut rng, 10);
            assert!(toric_core::validate_fan(&fan).smooth);
            assert!(fan.num_rays() <= 10);
        }
    }
}
