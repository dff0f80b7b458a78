//! Named fans, `S₃`-orbit fans and their enumeration, the symmetric-action
//! criteria tables, and two small group-theoretic and combinatorial checks.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::divisors::relation_lattice;
use crate::fan::{
    build_surface_fan, fan_isomorphism, fan_isomorphisms, primitive, validate_fan, Fan, FanError,
    Lattice,
};
use crate::intlin::{cokernel_group, IntMatrix};
use crate::symmetry::{
    permutation_center, permutation_closure, GaloisDatum, SymmetryError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("lattice {0} carries no permutation action")]
    NoPermutationAction(Lattice),
    #[error("query lies outside the tables: {0}")]
    OutsideTables(String),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// A named construction with its parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    ProjectiveSpace(usize),
    Hirzebruch(i64),
    WeightedP11a(i64),
    WeightedP1111m(i64),
    BundleOverP3(i64),
    BundleOverP1xP1(i64),
    Dp6(Lattice),
    Q22,
    WeilRestrictionP1,
    SingularHexagon,
}

impl FamilySpec {
    /// `(syntax, description)` for every family.
    pub fn catalogue() -> &'static [(&'static str, &'static str)] {
        &[
            ("projective:n", "projective space P^n, n >= 1"),
            ("hirzebruch:a", "Hirzebruch surface H_a"),
            ("p11a:a", "weighted projective plane P(1,1,a), a >= 1"),
            ("p1111m:m", "weighted projective space P(1,1,1,1,m), m >= 1"),
            ("bundle-p3:a", "P(O(a) + O) over P^3"),
            ("bundle-p1xp1:a", "P(O(a,a) + O) over P^1 x P^1"),
            ("dp6:n1|n2", "degree 6 del Pezzo hexagon in N1 or N2"),
            ("q22", "dP6 in N2 with the negation involution"),
            ("weil-p1", "P^1 x P^1 with the factor swap"),
            ("singular-hexagon", "S3-orbit of (3,-1,-2) in N1"),
        ]
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::ProjectiveSpace(n) => write!(f, "projective:{n}"),
            FamilySpec::Hirzebruch(a) => write!(f, "hirzebruch:{a}"),
            FamilySpec::WeightedP11a(a) => write!(f, "p11a:{a}"),
            FamilySpec::WeightedP1111m(m) => write!(f, "p1111m:{m}"),
            FamilySpec::BundleOverP3(a) => write!(f, "bundle-p3:{a}"),
            FamilySpec::BundleOverP1xP1(a) => write!(f, "bundle-p1xp1:{a}"),
            FamilySpec::Dp6(Lattice::RootA2) => write!(f, "dp6:n1"),
            FamilySpec::Dp6(_) => write!(f, "dp6:n2"),
            FamilySpec::Q22 => write!(f, "q22"),
            FamilySpec::WeilRestrictionP1 => write!(f, "weil-p1"),
            FamilySpec::SingularHexagon => write!(f, "singular-hexagon"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let int = || -> Result<i64, FamilyError> {
            param
                .ok_or_else(|| FamilyError::InvalidParameter(format!("{name} needs a parameter")))?
                .parse::<i64>()
                .map_err(|_| FamilyError::InvalidParameter(s.to_string()))
        };
        let no_param = |spec: FamilySpec| match param {
            None => Ok(spec),
            Some(_) => Err(FamilyError::InvalidParameter(format!("{name} takes no parameter"))),
        };
        match name {
            "projective" => usize::try_from(int()?)
                .map(FamilySpec::ProjectiveSpace)
                .map_err(|_| FamilyError::InvalidParameter(s.to_string())),
            "hirzebruch" => Ok(FamilySpec::Hirzebruch(int()?)),
            "p11a" => Ok(FamilySpec::WeightedP11a(int()?)),
            "p1111m" => Ok(FamilySpec::WeightedP1111m(int()?)),
            "bundle-p3" => Ok(FamilySpec::BundleOverP3(int()?)),
            "bundle-p1xp1" => Ok(FamilySpec::BundleOverP1xP1(int()?)),
            "dp6" => match param {
                Some("n1") => Ok(FamilySpec::Dp6(Lattice::RootA2)),
                Some("n2") => Ok(FamilySpec::Dp6(Lattice::WeightA2)),
                _ => Err(FamilyError::InvalidParameter(s.to_string())),
            },
            "q22" => no_param(FamilySpec::Q22),
            "weil-p1" => no_param(FamilySpec::WeilRestrictionP1),
            "singular-hexagon" => no_param(FamilySpec::SingularHexagon),
            _ => Err(FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

/// A constructed family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFan {
    pub spec: FamilySpec,
    pub fan: Fan,
    pub galois: Option<GaloisDatum>,
}

fn standard_basis(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn surface(rays: &[[i64; 2]]) -> Result<Fan, FanError> {
    build_surface_fan(
        Lattice::Standard(2),
        &rays.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    )
}

pub fn make_family_fan(spec: FamilySpec) -> Result<FamilyFan, FamilyError> {
    let invalid = |msg: &str| Err(FamilyError::InvalidParameter(format!("{spec}: {msg}")));
    let (fan, galois) = match spec {
        FamilySpec::ProjectiveSpace(n) => {
            if n == 0 {
                return invalid("n must be at least 1");
            }
            let mut rays: Vec<Vec<i64>> = (0..n).map(|i| standard_basis(n, i)).collect();
            rays.push(vec![-1; n]);
            (Fan::new(Lattice::Standard(n), rays, subsets(n + 1, n))?, None)
        }
        FamilySpec::Hirzebruch(a) => (surface(&[[1, 0], [0, 1], [-1, a], [0, -1]])?, None),
        FamilySpec::WeightedP11a(a) => {
            if a < 1 {
                return invalid("a must be at least 1");
            }
            (surface(&[[1, 0], [0, 1], [-1, -a]])?, None)
        }
        FamilySpec::WeightedP1111m(m) => {
            if m < 1 {
                return invalid("m must be at least 1");
            }
            let rays = vec![
                standard_basis(4, 0),
                standard_basis(4, 1),
                standard_basis(4, 2),
                vec![-1, -1, -1, -m],
                standard_basis(4, 3),
            ];
            (Fan::new(Lattice::Standard(4), rays, subsets(5, 4))?, None)
        }
        FamilySpec::BundleOverP3(a) => {
            let rays = vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![-1, -1, -1, a],
                vec![0, 0, 0, 1],
                vec![0, 0, 0, -1],
            ];
            let mut cones = Vec::new();
            for base in subsets(4, 3) {
                for fibre in [4, 5] {
                    let mut c = base.clone();
                    c.push(fibre);
                    cones.push(c);
                }
            }
            (Fan::new(Lattice::Standard(4), rays, cones)?, None)
        }
        FamilySpec::BundleOverP1xP1(a) => {
            let rays = vec![
                vec![1, 0, a],
                vec![-1, 0, 0],
                vec![0, 1, a],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
            ];
            let mut cones = Vec::new();
            for x in [0, 1] {
                for y in [2, 3] {
                    for z in [4, 5] {
                        cones.push(vec![x, y, z]);
                    }
                }
            }
            (Fan::new(Lattice::Standard(3), rays, cones)?, None)
        }
        FamilySpec::Dp6(Lattice::RootA2) => {
            (s3_orbit_fan(Lattice::RootA2, &[vec![1, -1, 0]], false)?, None)
        }
        FamilySpec::Dp6(Lattice::WeightA2) => (dp6_n2()?, None),
        FamilySpec::Dp6(l) => return Err(FamilyError::NoPermutationAction(l)),
        FamilySpec::Q22 => (dp6_n2()?, Some(GaloisDatum::negation(2))),
        FamilySpec::WeilRestrictionP1 => {
            let tau = IntMatrix::from_i64_rows(&[[0, 1], [1, 0]]).expect("2x2");
            (
                surface(&[[1, 0], [0, 1], [-1, 0], [0, -1]])?,
                Some(GaloisDatum::new(tau, "L/k quadratic")?),
            )
        }
        FamilySpec::SingularHexagon => (
            s3_orbit_fan(Lattice::RootA2, &[vec![3, -1, -2]], false)?,
            None,
        ),
    };
    Ok(FamilyFan { spec, fan, galois })
}

fn dp6_n2() -> Result<Fan, FamilyError> {
    s3_orbit_fan(Lattice::WeightA2, &[vec![1, 0, 0], vec![0, 0, -1]], false)
}

/// Every constructor instance used by the test corpus: `m ∈ 1..=4`,
/// `a ∈ -2..=2`, plus the parameter-free families.
pub fn corpus_specs() -> Vec<FamilySpec> {
    let mut out = vec![
        FamilySpec::ProjectiveSpace(1),
        FamilySpec::ProjectiveSpace(2),
        FamilySpec::ProjectiveSpace(3),
        FamilySpec::ProjectiveSpace(4),
        FamilySpec::Dp6(Lattice::RootA2),
        FamilySpec::Dp6(Lattice::WeightA2),
        FamilySpec::Q22,
        FamilySpec::WeilRestrictionP1,
        FamilySpec::SingularHexagon,
    ];
    for m in 1..=4 {
        out.push(FamilySpec::WeightedP1111m(m));
        out.push(FamilySpec::WeightedP11a(m));
    }
    for a in -2..=2 {
        out.push(FamilySpec::Hirzebruch(a));
        out.push(FamilySpec::BundleOverP3(a));
        out.push(FamilySpec::BundleOverP1xP1(a));
    }
    out
}

/// The `S₃`-orbit (and optionally `−1`-orbit) of lattice coordinates `v`.
fn orbit(lattice: Lattice, v: &[i64], include_negation: bool) -> Result<BTreeSet<Vec<i64>>, FamilyError> {
    let els = lattice
        .s3_elements()
        .ok_or(FamilyError::NoPermutationAction(lattice))?;
    let mut out = BTreeSet::new();
    for g in &els {
        let w = g.apply_i64(v).ok_or(FanError::Overflow)?;
        if include_negation {
            out.insert(w.iter().map(|x| -x).collect());
        }
        out.insert(w);
    }
    Ok(out)
}

/// Surface fan on the union of `S₃`-orbits of ambient seed vectors.
pub fn s3_orbit_fan(
    lattice: Lattice,
    seeds: &[Vec<i64>],
    include_negation: bool,
) -> Result<Fan, FamilyError> {
    if !lattice.has_ambient_form() {
        return Err(FamilyError::NoPermutationAction(lattice));
    }
    if seeds.is_empty() {
        return Err(FamilyError::InvalidParameter("no seeds".into()));
    }
    let mut rays = BTreeSet::new();
    for s in seeds {
        let v = primitive(&lattice.lattice_coords(s)?)?;
        rays.extend(orbit(lattice, &v, include_negation)?);
    }
    Ok(build_surface_fan(lattice, &rays.into_iter().collect::<Vec<_>>())?)
}

/// The `S₃` generators, plus `−I` when `include_negation` is set.
pub fn s3_generators_with_negation(
    lattice: Lattice,
    include_negation: bool,
) -> Result<Vec<IntMatrix>, FamilyError> {
    let mut gens = lattice
        .s3_generators()
        .ok_or(FamilyError::NoPermutationAction(lattice))?;
    if include_negation {
        gens.push(IntMatrix::negative_identity(2));
    }
    Ok(gens)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationParams {
    pub lattice: Lattice,
    pub height: i64,
    pub max_rays: usize,
    pub require_smooth: bool,
    pub include_negation: bool,
}

/// An enumerated fan with one ambient seed per orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFan {
    pub fan: Fan,
    pub seeds: Vec<Vec<i64>>,
}

/// All invariant fans built from orbits of primitive vectors with ambient
/// coordinates in `[-H, H]`, up to isomorphisms that normalize the acting
/// group. Sorted by ray count, then rays.
pub fn enumerate_invariant_fans(params: EnumerationParams) -> Result<Vec<InvariantFan>, FamilyError> {
    let EnumerationParams {
        lattice,
        height,
        max_rays,
        require_smooth,
        include_negation,
    } = params;
    if height < 1 || max_rays < 3 {
        return Err(FamilyError::InvalidParameter(
            "height must be >= 1 and max_rays >= 3".into(),
        ));
    }
    if !lattice.has_ambient_form() {
        return Err(FamilyError::NoPermutationAction(lattice));
    }
    let mut orbits: BTreeMap<BTreeSet<Vec<i64>>, Vec<i64>> = BTreeMap::new();
    for x in -height..=height {
        for y in -height..=height {
            for z in -height..=height {
                let amb = [x, y, z];
                let Ok(coords) = lattice.lattice_coords(&amb) else {
                    continue;
                };
                if coords.iter().all(|&c| c == 0) {
                    continue;
                }
                let v = primitive(&coords)?;
                let o = orbit(lattice, &v, include_negation)?;
                let seed = lattice.ambient(o.iter().next().expect("nonempty"));
                orbits.entry(o).or_insert(seed);
            }
        }
    }
    let orbits: Vec<(Vec<Vec<i64>>, Vec<i64>)> = orbits
        .into_iter()
        .filter(|(o, _)| o.len() <= max_rays)
        .map(|(o, s)| (o.into_iter().collect(), s))
        .collect();

    let mut choices = Vec::new();
    choose_orbits(&orbits, 0, max_rays, &mut Vec::new(), &mut choices);

    let built: Vec<Result<Option<InvariantFan>, FamilyError>> = choices
        .into_par_iter()
        .map(|chosen| {
            let rays: Vec<Vec<i64>> = chosen.iter().flat_map(|&i| orbits[i].0.clone()).collect();
            let fan = build_surface_fan(lattice, &rays)?;
            if require_smooth && !validate_fan(&fan).smooth {
                return Ok(None);
            }
            let seeds = chosen.iter().map(|&i| orbits[i].1.clone()).collect();
            Ok(Some(InvariantFan { fan, seeds }))
        })
        .collect();
    let mut candidates = Vec::new();
    for b in built {
        candidates.extend(b?);
    }
    candidates.sort_by(|a, b| {
        a.fan
            .num_rays()
            .cmp(&b.fan.num_rays())
            .then_with(|| a.fan.rays().cmp(b.fan.rays()))
    });

    let group = lattice
        .s3_elements()
        .ok_or(FamilyError::NoPermutationAction(lattice))?;
    let mut reps: Vec<InvariantFan> = Vec::new();
    for cand in candidates {
        let duplicate = reps
            .iter()
            .filter(|r| r.fan.num_rays() == cand.fan.num_rays())
            .any(|r| equivariantly_isomorphic(&r.fan, &cand.fan, &group));
        if !duplicate {
            reps.push(cand);
        }
    }
    Ok(reps)
}

fn choose_orbits(
    orbits: &[(Vec<Vec<i64>>, Vec<i64>)],
    start: usize,
    budget: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for i in start..orbits.len() {
        let size = orbits[i].0.len();
        if size > budget {
            continue;
        }
        current.push(i);
        out.push(current.clone());
        choose_orbits(orbits, i + 1, budget - size, current, out);
        current.pop();
    }
}

/// Some isomorphism `F1 → F2` conjugates the finite group onto itself.
/// `−I` is central, so the same test serves the group with negation.
fn equivariantly_isomorphic(f1: &Fan, f2: &Fan, group: &[IntMatrix]) -> bool {
    let set: HashSet<&IntMatrix> = group.iter().collect();
    fan_isomorphisms(f1, f2).into_iter().any(|(g, _)| {
        let inv = if g.det() == BigInt::from(1) {
            g.adjugate()
        } else {
            g.adjugate().neg()
        };
        group.iter().all(|s| set.contains(&g.mul(s).mul(&inv)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Complex,
    /// A field satisfying condition (★).
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriteriaQuery {
    S6OnWeightedP1111m(i64),
    S6OnBundleOverP3(i64),
    MaxDegree { dimension: u32, field: BaseField },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriteriaAnswer {
    Holds(bool),
    MaxDegree {
        degree: u32,
        varieties: Vec<String>,
        infinite_family: bool,
    },
}

/// Parity predicates and the maximal-degree tables, encoded as stated.
pub fn symmetric_action_criteria(query: CriteriaQuery) -> Result<CriteriaAnswer, FamilyError> {
    let table = |degree: u32, varieties: &[&str], infinite_family: bool| CriteriaAnswer::MaxDegree {
        degree,
        varieties: varieties.iter().map(|s| s.to_string()).collect(),
        infinite_family,
    };
    match query {
        CriteriaQuery::S6OnWeightedP1111m(m) => {
            if m < 1 {
                return Err(FamilyError::OutsideTables(format!("weight m = {m} is not positive")));
            }
            Ok(CriteriaAnswer::Holds(m % 2 == 0))
        }
        CriteriaQuery::S6OnBundleOverP3(a) => Ok(CriteriaAnswer::Holds(a % 2 == 0)),
        CriteriaQuery::MaxDegree { dimension: 0, .. } => {
            Err(FamilyError::OutsideTables("dimension 0".into()))
        }
        CriteriaQuery::MaxDegree {
            dimension,
            field: BaseField::Complex,
        } => Ok(match dimension {
            1 => table(4, &["P1"], false),
            2 => table(5, &["P1xP1"], false),
            3 => table(6, &["P3"], false),
            4 => table(6, &["P4", "P2xP2", "P(O+O(2a)) over P3", "P(1,1,1,1,2m)"], false),
            n => table(n + 2, &[format!("P{n}").as_str()], false),
        }),
        CriteriaQuery::MaxDegree {
            dimension,
            field: BaseField::Star,
        } => Ok(match dimension {
            1 => table(3, &["P1"], false),
            2 => table(4, &[], true),
            n => table(n + 2, &[format!("P{n}").as_str()], false),
        }),
    }
}

/// Rays with (not necessarily geometric) cones: lets the degenerate `a = 0`
/// subdivisions, whose cones contain opposite rays, be compared
/// combinatorially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayConfiguration {
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl RayConfiguration {
    /// Whether `g` maps rays onto rays and cones onto the cones of `target`.
    pub fn maps_to(&self, g: &IntMatrix, target: &RayConfiguration) -> bool {
        let mut perm = Vec::with_capacity(self.rays.len());
        for r in &self.rays {
            match g.apply_i64(r).and_then(|w| target.rays.iter().position(|t| *t == w)) {
                Some(j) => perm.push(j),
                None => return false,
            }
        }
        let target_cones: BTreeSet<Vec<usize>> = target.cones.iter().map(|c| sorted(c)).collect();
        let images: BTreeSet<Vec<usize>> = self
            .cones
            .iter()
            .map(|c| sorted(&c.iter().map(|&i| perm[i]).collect::<Vec<_>>()))
            .collect();
        self.rays.len() == target.rays.len() && images == target_cones
    }

    pub fn to_fan(&self, lattice: Lattice) -> Result<Fan, FanError> {
        Fan::new(lattice, self.rays.clone(), self.cones.clone())
    }
}

fn sorted(c: &[usize]) -> Vec<usize> {
    let mut c = c.to_vec();
    c.sort_unstable();
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalObstructionReport {
    pub a: i64,
    pub swap_exchanges_subdivisions: bool,
    pub swap_fixes_a_subdivision: bool,
    pub six_ray_fan_preserved: bool,
    /// Both subdivisions are complete simplicial fans (false when some cone
    /// degenerates, as for `a = 0`).
    pub subdivisions_are_fans: bool,
    pub six_ray_fan_complete: bool,
}

impl DiagonalObstructionReport {
    pub fn confirms_obstruction(&self) -> bool {
        self.swap_exchanges_subdivisions && !self.swap_fixes_a_subdivision && self.six_ray_fan_preserved
    }
}

/// The five-ray configuration `(1,0,a), (−1,0,0), (0,1,a), (0,−1,0),
/// (0,0,−1)` with either diagonal of the upper quadrangular cone, and the
/// six-ray fan with `(0,0,1)` restored, under the swap of the first two
/// coordinates.
pub fn check_diagonal_obstruction(a: i64) -> DiagonalObstructionReport {
    let base = vec![
        vec![1, 0, a],
        vec![-1, 0, 0],
        vec![0, 1, a],
        vec![0, -1, 0],
        vec![0, 0, -1],
    ];
    // around the vertical axis: 0 (x+), 2 (y+), 1 (x-), 3 (y-)
    let lower = [vec![0, 2, 4], vec![2, 1, 4], vec![1, 3, 4], vec![3, 0, 4]];
    let with = |upper: Vec<Vec<usize>>| RayConfiguration {
        rays: base.clone(),
        cones: lower.iter().cloned().chain(upper).collect(),
    };
    let sub1 = with(vec![vec![0, 2, 1], vec![0, 3, 1]]);
    let sub2 = with(vec![vec![2, 0, 3], vec![2, 1, 3]]);
    let mut six_rays = base.clone();
    six_rays.push(vec![0, 0, 1]);
    let six = RayConfiguration {
        rays: six_rays,
        cones: lower
            .iter()
            .cloned()
            .chain([vec![0, 2, 5], vec![2, 1, 5], vec![1, 3, 5], vec![3, 0, 5]])
            .collect(),
    };
    let swap = IntMatrix::from_i64_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]).expect("3x3");
    let l = Lattice::Standard(3);
    let complete = |c: &RayConfiguration| {
        c.to_fan(l)
            .map(|f| validate_fan(&f).complete)
            .unwrap_or(false)
    };
    DiagonalObstructionReport {
        a,
        swap_exchanges_subdivisions: sub1.maps_to(&swap, &sub2) && sub2.maps_to(&swap, &sub1),
        swap_fixes_a_subdivision: sub1.maps_to(&swap, &sub1) || sub2.maps_to(&swap, &sub2),
        six_ray_fan_preserved: six.maps_to(&swap, &six),
        subdivisions_are_fans: complete(&sub1) && complete(&sub2),
        six_ray_fan_complete: complete(&six),
    }
}

/// Structure of the group generated by the translations of `N/2N` and the
/// linear `S₃`-action on it, as permutations of the four points of `N/2N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinExtensionReport {
    pub order: usize,
    pub center_order: usize,
    /// Order of the `S₃` image acting on the three nonzero points.
    pub involution_action_order: usize,
}

impl KleinExtensionReport {
    /// Order 24 on four points is the full symmetric group.
    pub fn is_symmetric_group_s4(&self) -> bool {
        self.order == 24 && self.center_order == 1 && self.involution_action_order == 6
    }
}

pub fn klein_extension_check(lattice: Lattice) -> Result<KleinExtensionReport, FamilyError> {
    let gens = lattice
        .s3_generators()
        .ok_or(FamilyError::NoPermutationAction(lattice))?;
    let point = |x: i64, y: i64| (x.rem_euclid(2) + 2 * y.rem_euclid(2)) as usize;
    let coords = |p: usize| [(p % 2) as i64, (p / 2) as i64];
    let mut perm_gens = Vec::new();
    for g in &gens {
        let perm: Vec<usize> = (0..4)
            .map(|p| {
                let w = g.apply_i64(&coords(p)).expect("small entries");
                point(w[0], w[1])
            })
            .collect();
        perm_gens.push(perm);
    }
    let linear = permutation_closure(&perm_gens);
    let involution_action_order = linear
        .iter()
        .map(|p| p[1..].to_vec())
        .collect::<BTreeSet<_>>()
        .len();
    for t in [[1, 0], [0, 1]] {
        let translation = (0..4)
            .map(|p| {
                let c = coords(p);
                point(c[0] + t[0], c[1] + t[1])
            })
            .collect();
        perm_gens.push(translation);
    }
    let group = permutation_closure(&perm_gens);
    Ok(KleinExtensionReport {
        order: group.len(),
        center_order: permutation_center(&group).len(),
        involution_action_order,
    })
}

/// Rays of `ℤ⁵/ℤ(1,1,1,1,m)`: an independent presentation of the five rays
/// satisfying `v₁+v₂+v₃+v₄+m·v₅ = 0` and generating the lattice.
pub fn quotient_presentation_p1111m(m: i64) -> Result<Fan, FamilyError> {
    if m < 1 {
        return Err(FamilyError::InvalidParameter(format!("m = {m}")));
    }
    let c = IntMatrix::from_i64_rows(&[[1], [1], [1], [1], [m]]).expect("5x1");
    let (group, proj) = cokernel_group(&c);
    if group.free_rank() != 4 || !group.is_torsion_free() {
        return Err(FamilyError::InvalidParameter(format!("quotient is {group}")));
    }
    let rays = (0..5)
        .map(|i| {
            proj.project_basis(i)
                .free
                .iter()
                .map(|x| x.to_i64().ok_or(FanError::Overflow))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Fan::new(Lattice::Standard(4), rays, subsets(5, 4))?)
}

/// The quotient presentation is a complete fan with the expected relation
/// lattice and is isomorphic to the constructed `P(1,1,1,1,m)` fan.
pub fn check_case_one_uniqueness(m: i64) -> Result<bool, FamilyError> {
    let alt = quotient_presentation_p1111m(m)?;
    let built = make_family_fan(FamilySpec::WeightedP1111m(m))?.fan;
    let expected = vec![[1, 1, 1, 1, m].map(BigInt::from).to_vec()];
    Ok(validate_fan(&alt).complete
        && relation_lattice(&alt).basis == expected
        && fan_isomorphism(&alt, &built).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings_roundtrip() {
        for s in corpus_specs() {
            assert_eq!(s.to_string().parse::<FamilySpec>().unwrap(), s);
        }
        assert!("nope:1".parse::<FamilySpec>().is_err());
        assert!("hirzebruch".parse::<FamilySpec>().is_err());
        assert!("q22:3".parse::<FamilySpec>().is_err());
        assert!("dp6:n3".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn invalid_parameters() {
        for s in [
            FamilySpec::ProjectiveSpace(0),
            FamilySpec::WeightedP1111m(0),
            FamilySpec::WeightedP11a(0),
        ] {
            assert!(matches!(
                make_family_fan(s),
                Err(FamilyError::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn orbit_fans() {
        let p2 = s3_orbit_fan(Lattice::WeightA2, &[vec![1, 0, 0]], false).unwrap();
        assert_eq!(p2.num_rays(), 3);
        let hex = s3_orbit_fan(Lattice::WeightA2, &[vec![1, 0, 0], vec![0, 0, -1]], false).unwrap();
        assert_eq!(hex.num_rays(), 6);
        let sing = s3_orbit_fan(Lattice::RootA2, &[vec![3, -1, -2]], false).unwrap();
        assert_eq!(sing.num_rays(), 6);
        assert!(!validate_fan(&sing).smooth);
        assert!(matches!(
            s3_orbit_fan(Lattice::RootA2, &[vec![1, 0, 0]], false),
            Err(FamilyError::Fan(FanError::NotInRootLattice(_)))
        ));
    }

    #[test]
    fn criteria_tables() {
        assert_eq!(
            symmetric_action_criteria(CriteriaQuery::S6OnWeightedP1111m(4)).unwrap(),
            CriteriaAnswer::Holds(true)
        );
        assert_eq!(
            symmetric_action_criteria(CriteriaQuery::S6OnWeightedP1111m(3)).unwrap(),
            CriteriaAnswer::Holds(false)
        );
        assert!(symmetric_action_criteria(CriteriaQuery::S6OnWeightedP1111m(0)).is_err());
        assert!(symmetric_action_criteria(CriteriaQuery::MaxDegree {
            dimension: 0,
            field: BaseField::Star
        })
        .is_err());
    }

    #[test]
    fn klein_extension() {
        for l in [Lattice::RootA2, Lattice::WeightA2] {
            let r = klein_extension_check(l).unwrap();
            assert!(r.is_symmetric_group_s4(), "{l}: {r:?}");
        }
        assert!(klein_extension_check(Lattice::Standard(2)).is_err());
    }

    #[test]
    fn diagonal_obstruction_geometry() {
        let r = check_diagonal_obstruction(0);
        assert!(r.confirms_obstruction());
        assert!(!r.subdivisions_are_fans);
        assert!(r.six_ray_fan_complete);
        for a in [1, 2] {
            let r = check_diagonal_obstruction(a);
            assert!(r.confirms_obstruction());
            assert!(r.subdivisions_are_fans, "a = {a}");
            assert!(r.six_ray_fan_complete, "a = {a}");
        }
    }
}
