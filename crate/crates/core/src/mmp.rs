//! Equivariant minimal model program on smooth complete toric surfaces.
//!
//! On a smooth complete surface fan with rays `v₀, …, v_{n-1}` in
//! counterclockwise order, each ray satisfies `v_{i-1} + v_{i+1} = aᵢ vᵢ`
//! and `Dᵢ² = −aᵢ`. Contracting a `(−1)`-curve removes a ray with `aᵢ = 1`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::fan::{build_surface_fan, fan_isomorphism, validate_fan, Fan, FanError, Lattice};
use crate::symmetry::{ray_orbits, GroupAction, SymmetryError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MmpError {
    #[error("fan has rank {0}; the surface MMP needs rank 2")]
    NotSurface(usize),
    #[error("fan is not smooth and complete")]
    NotSmoothComplete,
    #[error("ray {0} has no integral self-intersection coefficient")]
    ProfileFailure(usize),
    #[error("ray {0} is not a (-1)-ray")]
    NotMinusOne(usize),
    #[error("rays {0} and {1} of the orbit are adjacent")]
    AdjacentRays(usize, usize),
    #[error("contraction leaves fewer than three rays")]
    TooFewRays,
    #[error("contracted fan is not smooth and complete")]
    ResultNotSmooth,
    #[error("neighbours {0} and {1} of adjacent (-1)-rays do not cancel")]
    RuleViolated(usize, usize),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}

/// Coefficients `aᵢ` indexed by ray, plus the cyclic order used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfIntersectionProfile {
    pub order: Vec<usize>,
    pub coefficients: Vec<i64>,
}

impl SelfIntersectionProfile {
    pub fn self_intersection(&self, ray: usize) -> i64 {
        -self.coefficients[ray]
    }

    /// Self-intersections listed in cyclic order.
    pub fn cyclic_self_intersections(&self) -> Vec<i64> {
        self.order.iter().map(|&i| -self.coefficients[i]).collect()
    }

    pub fn is_minus_one(&self, ray: usize) -> bool {
        self.coefficients[ray] == 1
    }

    fn position(&self, ray: usize) -> usize {
        self.order.iter().position(|&r| r == ray).expect("ray in order")
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let n = self.order.len();
        let (pa, pb) = (self.position(a), self.position(b));
        (pa + 1) % n == pb || (pb + 1) % n == pa
    }
}

fn smooth_complete_surface(fan: &Fan) -> Result<Vec<usize>, MmpError> {
    if fan.rank() != 2 {
        return Err(MmpError::NotSurface(fan.rank()));
    }
    let report = validate_fan(fan);
    if !(report.smooth && report.complete) {
        return Err(MmpError::NotSmoothComplete);
    }
    Ok(report.surface_cyclic_order.expect("rank 2"))
}

pub fn self_intersection_profile(fan: &Fan) -> Result<SelfIntersectionProfile, MmpError> {
    let order = smooth_complete_surface(fan)?;
    let n = order.len();
    let mut coefficients = vec![0i64; n];
    for k in 0..n {
        let v = fan.ray(order[k]);
        let p = fan.ray(order[(k + n - 1) % n]);
        let q = fan.ray(order[(k + 1) % n]);
        let s = [p[0] + q[0], p[1] + q[1]];
        let pivot = usize::from(v[0] == 0);
        if s[pivot] % v[pivot] != 0 {
            return Err(MmpError::ProfileFailure(order[k]));
        }
        let a = s[pivot] / v[pivot];
        if s != [a * v[0], a * v[1]] {
            return Err(MmpError::ProfileFailure(order[k]));
        }
        coefficients[order[k]] = a;
    }
    Ok(SelfIntersectionProfile {
        order,
        coefficients,
    })
}

fn acting_on(fan: &Fan, group: &GroupAction) -> Result<GroupAction, MmpError> {
    Ok(group.restrict_to(fan)?)
}

fn orbit_contractible(profile: &SelfIntersectionProfile, orbit: &[usize]) -> bool {
    orbit.iter().all(|&r| profile.is_minus_one(r))
        && orbit
            .iter()
            .enumerate()
            .all(|(i, &a)| orbit[i + 1..].iter().all(|&b| !profile.adjacent(a, b)))
        && profile.order.len() - orbit.len() >= 3
}

/// Ray orbits made of pairwise non-adjacent `(−1)`-rays.
pub fn contractible_orbits(fan: &Fan, group: &GroupAction) -> Result<Vec<Vec<usize>>, MmpError> {
    let profile = self_intersection_profile(fan)?;
    let group = acting_on(fan, group)?;
    Ok(ray_orbits(&group)
        .into_iter()
        .filter(|o| orbit_contractible(&profile, o))
        .collect())
}

/// Removes the orbit and re-validates smoothness and completeness.
pub fn contract_orbit(fan: &Fan, orbit: &[usize]) -> Result<Fan, MmpError> {
    let profile = self_intersection_profile(fan)?;
    for &r in orbit {
        if !profile.is_minus_one(r) {
            return Err(MmpError::NotMinusOne(r));
        }
    }
    for (i, &a) in orbit.iter().enumerate() {
        for &b in &orbit[i + 1..] {
            if profile.adjacent(a, b) {
                return Err(MmpError::AdjacentRays(a, b));
            }
        }
    }
    if fan.num_rays() - orbit.len() < 3 {
        return Err(MmpError::TooFewRays);
    }
    let out = remove_rays_unchecked(fan, orbit)?;
    let report = validate_fan(&out);
    if !(report.smooth && report.complete) {
        return Err(MmpError::ResultNotSmooth);
    }
    Ok(out)
}

/// Drops rays from a surface fan and rebuilds it, with no smoothness
/// guarantee on the result.
pub fn remove_rays_unchecked(fan: &Fan, rays: &[usize]) -> Result<Fan, MmpError> {
    if fan.rank() != 2 {
        return Err(MmpError::NotSurface(fan.rank()));
    }
    let kept: Vec<Vec<i64>> = (0..fan.num_rays())
        .filter(|i| !rays.contains(i))
        .map(|i| fan.ray(i).to_vec())
        .collect();
    Ok(build_surface_fan(fan.lattice(), &kept)?)
}

/// Toric blow-up of the fixed point of a maximal cone: inserts the sum of
/// the cone's two rays.
pub fn blow_up(fan: &Fan, cone: usize) -> Result<Fan, MmpError> {
    if fan.rank() != 2 {
        return Err(MmpError::NotSurface(fan.rank()));
    }
    let c = &fan.cones()[cone];
    let (a, b) = (fan.ray(c[0]), fan.ray(c[1]));
    let mut rays = fan.rays().to_vec();
    rays.push(vec![a[0] + b[0], a[1] + b[1]]);
    Ok(build_surface_fan(fan.lattice(), &rays)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmpMode {
    FirstOrbit,
    ExploreAll,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TerminalLabel {
    P2,
    DP6Terminal,
    P1xP1,
    Hirzebruch(u64),
    Other,
}

impl fmt::Display for TerminalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalLabel::P2 => write!(f, "P2"),
            TerminalLabel::DP6Terminal => write!(f, "DP6Terminal"),
            TerminalLabel::P1xP1 => write!(f, "P1xP1"),
            TerminalLabel::Hirzebruch(a) => write!(f, "Hirzebruch({a})"),
            TerminalLabel::Other => write!(f, "Other"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmpStep {
    /// Fan before the contraction.
    pub fan: Fan,
    /// Contracted ray indices of `fan`.
    pub orbit: Vec<usize>,
}

impl MmpStep {
    pub fn orbit_rays(&self) -> Vec<Vec<i64>> {
        self.orbit.iter().map(|&i| self.fan.ray(i).to_vec()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmpTrace {
    pub steps: Vec<MmpStep>,
    pub terminal: Fan,
    pub terminal_group: GroupAction,
    pub label: TerminalLabel,
}

/// Contracts orbits until none is contractible. `FirstOrbit` follows the
/// orbit holding the lexicographically least ray and yields one trace;
/// `ExploreAll` branches over every contractible orbit.
pub fn run_equivariant_mmp(
    fan: &Fan,
    group: &GroupAction,
    mode: MmpMode,
) -> Result<Vec<MmpTrace>, MmpError> {
    smooth_complete_surface(fan)?;
    let group = acting_on(fan, group)?;
    run_from(fan.clone(), group, Vec::new(), mode)
}

fn run_from(
    fan: Fan,
    group: GroupAction,
    steps: Vec<MmpStep>,
    mode: MmpMode,
) -> Result<Vec<MmpTrace>, MmpError> {
    let mut orbits = contractible_orbits(&fan, &group)?;
    if orbits.is_empty() {
        let label = classify_terminal(&fan, &group);
        return Ok(vec![MmpTrace {
            steps,
            terminal: fan,
            terminal_group: group,
            label,
        }]);
    }
    if mode == MmpMode::FirstOrbit {
        let least = |o: &Vec<usize>| o.iter().map(|&i| fan.ray(i).to_vec()).min();
        orbits.sort_by_key(least);
        orbits.truncate(1);
    }
    let branches: Vec<Result<Vec<MmpTrace>, MmpError>> = orbits
        .into_par_iter()
        .map(|orbit| {
            let next = contract_orbit(&fan, &orbit)?;
            let next_group = acting_on(&next, &group)?;
            let mut next_steps = steps.clone();
            next_steps.push(MmpStep {
                fan: fan.clone(),
                orbit,
            });
            run_from(next, next_group, next_steps, mode)
        })
        .collect();
    let mut out = Vec::new();
    for b in branches {
        out.extend(b?);
    }
    Ok(out)
}

fn reference(rays: &[[i64; 2]]) -> Fan {
    build_surface_fan(
        Lattice::Standard(2),
        &rays.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    )
    .expect("reference fan")
}

pub fn p2_fan() -> Fan {
    reference(&[[1, 0], [0, 1], [-1, -1]])
}

pub fn p1xp1_fan() -> Fan {
    reference(&[[1, 0], [0, 1], [-1, 0], [0, -1]])
}

pub fn hexagon_fan() -> Fan {
    reference(&[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]])
}

/// Isomorphism type of a terminal fan. The group is not consulted; the
/// label depends on the fan alone.
pub fn classify_terminal(fan: &Fan, _group: &GroupAction) -> TerminalLabel {
    if fan.rank() != 2 {
        return TerminalLabel::Other;
    }
    if fan_isomorphism(fan, &p2_fan()).is_some() {
        return TerminalLabel::P2;
    }
    if fan_isomorphism(fan, &p1xp1_fan()).is_some() {
        return TerminalLabel::P1xP1;
    }
    if fan_isomorphism(fan, &hexagon_fan()).is_some() {
        return TerminalLabel::DP6Terminal;
    }
    if fan.num_rays() == 4 {
        if let Ok(profile) = self_intersection_profile(fan) {
            let s = profile.cyclic_self_intersections();
            for shift in 0..4 {
                let (x0, x1, x2, x3) = (s[shift], s[(shift + 1) % 4], s[(shift + 2) % 4], s[(shift + 3) % 4]);
                if x0 == 0 && x2 == 0 && x1 == -x3 && x1 < 0 {
                    return TerminalLabel::Hirzebruch(x3.unsigned_abs());
                }
            }
        }
    }
    TerminalLabel::Other
}

/// One verified instance of `v₀ + v₃ = 0` for adjacent `(−1)`-rays
/// `v₁, v₂` with outer neighbours `v₀, v₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacentRuleInstance {
    pub pair: (usize, usize),
    pub neighbours: (usize, usize),
}

pub fn check_adjacent_minus_one_rule(fan: &Fan) -> Result<Vec<AdjacentRuleInstance>, MmpError> {
    let profile = self_intersection_profile(fan)?;
    let order = &profile.order;
    let n = order.len();
    let mut out = Vec::new();
    if n < 4 {
        return Ok(out);
    }
    for k in 0..n {
        let (v1, v2) = (order[k], order[(k + 1) % n]);
        if !(profile.is_minus_one(v1) && profile.is_minus_one(v2)) {
            continue;
        }
        let (v0, v3) = (order[(k + n - 1) % n], order[(k + 2) % n]);
        let (a, b) = (fan.ray(v0), fan.ray(v3));
        if a[0] + b[0] != 0 || a[1] + b[1] != 0 {
            return Err(MmpError::RuleViolated(v0, v3));
        }
        out.push(AdjacentRuleInstance {
            pair: (v1, v2),
            neighbours: (v0, v3),
        });
    }
    Ok(out)
}
