//! Lattices, simplicial fans and their structural predicates.
//!
//! Rays are stored as primitive `i64` vectors in the coordinates of the
//! fan's lattice basis; all matrix work goes through [`IntMatrix`]. For the
//! two rank-2 lattices with a coordinate-permuting `S₃` action:
//!
//! * `RootA2` is `N₁ = {x ∈ ℤ³ : x₁+x₂+x₃ = 0}` with basis `f₁ = (1,-1,0)`,
//!   `f₂ = (0,1,-1)`;
//! * `WeightA2` is `N₂ = ℤ³/ℤ(1,1,1)` with basis the classes of `e₁`, `e₂`.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::intlin::{gcd_i64, smith_normal_form, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("expected a vector of length {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("vector {0:?} does not lie in N1 (coordinate sum is nonzero)")]
    NotInRootLattice(Vec<i64>),
    #[error("zero vector cannot span a ray")]
    ZeroRay,
    #[error("a surface fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("rays {0} and {1} are parallel")]
    ParallelRays(usize, usize),
    #[error("incomplete: the angular gap after ray {0:?} is at least pi")]
    Incomplete(Vec<i64>),
    #[error("operation needs a rank-2 lattice, got rank {0}")]
    NotSurface(usize),
    #[error("cone {0:?} refers to a missing ray or repeats one")]
    BadCone(Vec<usize>),
    #[error("cone {0:?} is not simplicial")]
    NotSimplicial(Vec<usize>),
    #[error("cone {0:?} is listed twice")]
    DuplicateCone(Vec<usize>),
    #[error("cone {0:?} is a face of another listed cone")]
    NotMaximal(Vec<usize>),
    #[error("unknown lattice `{0}` (expected standard:n, rootA2 or weightA2)")]
    UnknownLattice(String),
    #[error("coordinates overflow i64")]
    Overflow,
}

/// The lattice `N` a fan lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lattice {
    Standard(usize),
    RootA2,
    WeightA2,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        match self {
            Lattice::Standard(n) => *n,
            Lattice::RootA2 | Lattice::WeightA2 => 2,
        }
    }

    pub fn has_ambient_form(&self) -> bool {
        matches!(self, Lattice::RootA2 | Lattice::WeightA2)
    }

    /// Coordinates of an ambient vector in the lattice basis.
    pub fn lattice_coords(&self, v: &[i64]) -> Result<Vec<i64>, FanError> {
        match self {
            Lattice::Standard(n) => {
                if v.len() != *n {
                    return Err(FanError::Dimension {
                        expected: *n,
                        found: v.len(),
                    });
                }
                Ok(v.to_vec())
            }
            Lattice::RootA2 => {
                let [x, y, z] = ambient3(v)?;
                if x.checked_add(y).and_then(|s| s.checked_add(z)) != Some(0) {
                    return Err(FanError::NotInRootLattice(v.to_vec()));
                }
                // x f1 + (-z) f2 = (x, -x - z, z) = (x, y, z)
                Ok(vec![x, z.checked_neg().ok_or(FanError::Overflow)?])
            }
            Lattice::WeightA2 => {
                let [x, y, z] = ambient3(v)?;
                Ok(vec![
                    x.checked_sub(z).ok_or(FanError::Overflow)?,
                    y.checked_sub(z).ok_or(FanError::Overflow)?,
                ])
            }
        }
    }

    /// Inverse of [`Lattice::lattice_coords`]. For `WeightA2` the
    /// representative with last coordinate 0 is returned.
    pub fn ambient(&self, coords: &[i64]) -> Vec<i64> {
        match self {
            Lattice::Standard(_) => coords.to_vec(),
            Lattice::RootA2 => vec![coords[0], coords[1] - coords[0], -coords[1]],
            Lattice::WeightA2 => vec![coords[0], coords[1], 0],
        }
    }

    /// Matrix in lattice coordinates of the coordinate permutation sending
    /// ambient coordinate `i` to position `perm[i]`. `None` for `Standard`.
    pub fn coordinate_permutation(&self, perm: [usize; 3]) -> Option<IntMatrix> {
        if !self.has_ambient_form() {
            return None;
        }
        let mut cols = Vec::new();
        for basis in [[1, 0], [0, 1]] {
            let amb = self.ambient(&basis);
            let mut moved = [0i64; 3];
            for i in 0..3 {
                moved[perm[i]] = amb[i];
            }
            cols.push(self.lattice_coords(&moved).expect("permutation preserves N"));
        }
        Some(IntMatrix::from_i64_columns(&cols, 2).expect("2x2"))
    }

    /// Generators `(1 2)` and `(1 2 3)` of the permutation action.
    pub fn s3_generators(&self) -> Option<Vec<IntMatrix>> {
        Some(vec![
            self.coordinate_permutation([1, 0, 2])?,
            self.coordinate_permutation([1, 2, 0])?,
        ])
    }

    /// All six permutation matrices.
    pub fn s3_elements(&self) -> Option<Vec<IntMatrix>> {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        PERMS.iter().map(|p| self.coordinate_permutation(*p)).collect()
    }
}

fn ambient3(v: &[i64]) -> Result<[i64; 3], FanError> {
    <[i64; 3]>::try_from(v).map_err(|_| FanError::Dimension {
        expected: 3,
        found: v.len(),
    })
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lattice::Standard(n) => write!(f, "standard:{n}"),
            Lattice::RootA2 => write!(f, "rootA2"),
            Lattice::WeightA2 => write!(f, "weightA2"),
        }
    }
}

impl FromStr for Lattice {
    type Err = FanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rootA2" => Ok(Lattice::RootA2),
            "weightA2" => Ok(Lattice::WeightA2),
            _ => s
                .strip_prefix("standard:")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(Lattice::Standard)
                .ok_or_else(|| FanError::UnknownLattice(s.to_string())),
        }
    }
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn primitive(v: &[i64]) -> Result<Vec<i64>, FanError> {
    let g = gcd_i64(v);
    if g == 0 {
        return Err(FanError::ZeroRay);
    }
    Ok(v.iter().map(|x| x / g).collect())
}

fn cross(a: &[i64], b: &[i64]) -> i128 {
    a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
}

/// Counterclockwise angular order starting at the positive x-axis.
fn angle_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let half = |v: &[i64]| u8::from(!(v[1] > 0 || (v[1] == 0 && v[0] > 0)));
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&cross(a, b)))
}

/// A fan of simplicial cones: primitive rays plus maximal cones given as
/// sorted ray-index lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    lattice: Lattice,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Builds a fan from rays (lattice coordinates) and maximal cones. Rays
    /// are made primitive; every cone must be simplicial and no listed cone
    /// may be a face of another.
    pub fn new(
        lattice: Lattice,
        rays: Vec<Vec<i64>>,
        cones: Vec<Vec<usize>>,
    ) -> Result<Self, FanError> {
        let n = lattice.rank();
        let mut prim = Vec::with_capacity(rays.len());
        for r in &rays {
            if r.len() != n {
                return Err(FanError::Dimension {
                    expected: n,
                    found: r.len(),
                });
            }
            prim.push(primitive(r)?);
        }
        let mut seen: HashMap<&[i64], usize> = HashMap::new();
        for (i, r) in prim.iter().enumerate() {
            if let Some(&j) = seen.get(r.as_slice()) {
                return Err(FanError::ParallelRays(j, i));
            }
            seen.insert(r, i);
        }
        let mut sorted_cones = Vec::with_capacity(cones.len());
        for c in cones {
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != c.len() || s.is_empty() || s.iter().any(|&i| i >= prim.len()) {
                return Err(FanError::BadCone(c));
            }
            let m = IntMatrix::from_i64_rows_with_cols(
                &s.iter().map(|&i| prim[i].clone()).collect::<Vec<_>>(),
                n,
            )
            .expect("consistent lengths");
            if s.len() > n || m.rank() != s.len() {
                return Err(FanError::NotSimplicial(s));
            }
            sorted_cones.push(s);
        }
        let mut set = HashSet::new();
        for c in &sorted_cones {
            if !set.insert(c.clone()) {
                return Err(FanError::DuplicateCone(c.clone()));
            }
        }
        for a in &sorted_cones {
            for b in &sorted_cones {
                if a.len() < b.len() && a.iter().all(|i| b.contains(i)) {
                    return Err(FanError::NotMaximal(a.clone()));
                }
            }
        }
        Ok(Self {
            lattice,
            rays: prim,
            cones: sorted_cones,
        })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ray_index(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Rays as the rows of a `|Δ(1)| x rank` matrix.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_rows_with_cols(&self.rays, self.rank()).expect("consistent lengths")
    }

    pub fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        IntMatrix::from_i64_rows_with_cols(
            &cone.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>(),
            self.rank(),
        )
        .expect("consistent lengths")
    }

    pub fn rays_span(&self) -> bool {
        self.ray_matrix().rank() == self.rank()
    }

    /// Ray indices in counterclockwise order starting from the
    /// lexicographically least ray. Rank 2 only.
    pub fn cyclic_order(&self) -> Result<Vec<usize>, FanError> {
        if self.rank() != 2 {
            return Err(FanError::NotSurface(self.rank()));
        }
        let mut idx: Vec<usize> = (0..self.rays.len()).collect();
        idx.sort_by(|&a, &b| angle_cmp(&self.rays[a], &self.rays[b]));
        if let Some(start) = (0..idx.len()).min_by(|&a, &b| self.rays[idx[a]].cmp(&self.rays[idx[b]])) {
            idx.rotate_left(start);
        }
        Ok(idx)
    }

    /// Images of all rays under `g`, as ray indices of `target`, provided
    /// `g` maps the rays of `self` bijectively onto the rays of `target` and
    /// maximal cones onto maximal cones.
    pub fn maps_onto(&self, g: &IntMatrix, target: &Fan) -> Option<Vec<usize>> {
        if self.rays.len() != target.rays.len() || self.cones.len() != target.cones.len() {
            return None;
        }
        let index: HashMap<&[i64], usize> = target
            .rays
            .iter()
            .enumerate()
            .map(|(i, r)| (r.as_slice(), i))
            .collect();
        let perm = ray_images(g, &self.rays, &index)?;
        let target_cones: HashSet<&Vec<usize>> = target.cones.iter().collect();
        let all_cones_map = self.cones.iter().all(|c| {
            let mut img: Vec<usize> = c.iter().map(|&i| perm[i]).collect();
            img.sort_unstable();
            target_cones.contains(&img)
        });
        all_cones_map.then_some(perm)
    }

    pub fn is_preserved_by(&self, g: &IntMatrix) -> bool {
        self.maps_onto(g, self).is_some()
    }
}

fn ray_images(
    g: &IntMatrix,
    rays: &[Vec<i64>],
    index: &HashMap<&[i64], usize>,
) -> Option<Vec<usize>> {
    let mut perm = Vec::with_capacity(rays.len());
    let mut used = vec![false; index.len()];
    for r in rays {
        let img = g.apply_i64(r)?;
        let j = *index.get(img.as_slice())?;
        if std::mem::replace(&mut used[j], true) {
            return None;
        }
        perm.push(j);
    }
    Some(perm)
}

/// Complete surface fan on the given rays (lattice coordinates).
///
/// Rays are made primitive and sorted counterclockwise starting from the
/// lexicographically least one; the maximal cones are the adjacent pairs.
pub fn build_surface_fan(lattice: Lattice, rays: &[Vec<i64>]) -> Result<Fan, FanError> {
    if lattice.rank() != 2 {
        return Err(FanError::NotSurface(lattice.rank()));
    }
    if rays.len() < 3 {
        return Err(FanError::TooFewRays(rays.len()));
    }
    let mut prim = Vec::with_capacity(rays.len());
    for r in rays {
        if r.len() != 2 {
            return Err(FanError::Dimension {
                expected: 2,
                found: r.len(),
            });
        }
        prim.push(primitive(r)?);
    }
    for i in 0..prim.len() {
        for j in i + 1..prim.len() {
            if prim[i] == prim[j] {
                return Err(FanError::ParallelRays(i, j));
            }
        }
    }
    prim.sort_by(|a, b| angle_cmp(a, b));
    let start = (0..prim.len()).min_by(|&a, &b| prim[a].cmp(&prim[b])).unwrap();
    prim.rotate_left(start);
    let n = prim.len();
    for k in 0..n {
        if cross(&prim[k], &prim[(k + 1) % n]) <= 0 {
            return Err(FanError::Incomplete(prim[k].clone()));
        }
    }
    let cones = (0..n)
        .map(|k| {
            let (a, b) = (k, (k + 1) % n);
            vec![a.min(b), a.max(b)]
        })
        .collect();
    Fan::new(lattice, prim, cones)
}

/// Structural flags of a fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanReport {
    pub simplicial: bool,
    pub complete: bool,
    pub smooth: bool,
    pub surface_cyclic_order: Option<Vec<usize>>,
}

/// SNF invariant factors of the ray matrix of one cone.
pub fn cone_invariant_factors(fan: &Fan, cone: &[usize]) -> Vec<BigInt> {
    smith_normal_form(&fan.cone_matrix(cone)).invariant_factors()
}

pub fn validate_fan(fan: &Fan) -> FanReport {
    let simplicial = fan
        .cones
        .iter()
        .all(|c| c.len() <= fan.rank() && fan.cone_matrix(c).rank() == c.len());
    let smooth = simplicial
        && fan.cones.iter().all(|c| {
            let f = cone_invariant_factors(fan, c);
            f.len() == c.len() && f.iter().all(One::is_one)
        });
    let (complete, order) = match fan.rank() {
        2 => {
            let order = fan.cyclic_order().expect("rank 2");
            (surface_complete(fan, &order), Some(order))
        }
        1 => (
            fan.rays.len() == 2 && fan.rays[0][0] == -fan.rays[1][0] && fan.cones.len() == 2,
            None,
        ),
        _ => (simplicial && higher_complete(fan), None),
    };
    FanReport {
        simplicial,
        complete,
        smooth,
        surface_cyclic_order: order,
    }
}

fn surface_complete(fan: &Fan, order: &[usize]) -> bool {
    let n = order.len();
    if n < 3 || fan.cones.len() != n {
        return false;
    }
    let cones: HashSet<&Vec<usize>> = fan.cones.iter().collect();
    (0..n).all(|k| {
        let (a, b) = (order[k], order[(k + 1) % n]);
        cross(&fan.rays[a], &fan.rays[b]) > 0 && cones.contains(&vec![a.min(b), a.max(b)])
    })
}

/// Wall criterion for rank ≥ 3: every maximal cone is full-dimensional,
/// every facet lies in exactly two maximal cones which sit on opposite
/// sides of it, the dual graph is connected, and a generic vector lies in
/// exactly one maximal cone.
fn higher_complete(fan: &Fan) -> bool {
    let n = fan.rank();
    if fan.cones.is_empty() || fan.cones.iter().any(|c| c.len() != n) {
        return false;
    }
    let mut walls: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (ci, c) in fan.cones.iter().enumerate() {
        for (k, &dropped) in c.iter().enumerate() {
            let mut facet = c.clone();
            facet.remove(k);
            walls.entry(facet).or_default().push((ci, dropped));
        }
    }
    for (facet, sides) in &walls {
        if sides.len() != 2 {
            return false;
        }
        let a = side_of(fan, facet, sides[0].1);
        let b = side_of(fan, facet, sides[1].1);
        if a.is_zero() || b.is_zero() || (a > BigInt::zero()) == (b > BigInt::zero()) {
            return false;
        }
    }
    // dual graph connectivity
    let mut adj = vec![Vec::new(); fan.cones.len()];
    for sides in walls.values() {
        adj[sides[0].0].push(sides[1].0);
        adj[sides[1].0].push(sides[0].0);
    }
    let mut seen = vec![false; fan.cones.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(c) = queue.pop_front() {
        for &d in &adj[c] {
            if !std::mem::replace(&mut seen[d], true) {
                queue.push_back(d);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    generic_cover_count(fan) == Some(1)
}

/// Sign of the determinant of `facet ∪ {ray}`.
fn side_of(fan: &Fan, facet: &[usize], ray: usize) -> BigInt {
    let mut idx = facet.to_vec();
    idx.push(ray);
    fan.cone_matrix(&idx).det()
}

/// Number of maximal cones containing a generic vector in their interior.
/// Tries moment-curve vectors `(1, t, t², …)` until one avoids every facet
/// hyperplane.
fn generic_cover_count(fan: &Fan) -> Option<usize> {
    let n = fan.rank();
    let candidates = (2i64..64).flat_map(|t| [(t, 1i64), (t, -1)]);
    'candidates: for (t, sign) in candidates {
        let w: Vec<BigInt> = (0..n)
            .map(|k| BigInt::from(sign) * BigInt::from(t).pow(k as u32) + BigInt::from(k as i64))
            .collect();
        let mut count = 0;
        for c in &fan.cones {
            let basis = fan.cone_matrix(c).transpose();
            let det = basis.det();
            // coordinates of w in the cone basis are adj·w / det
            let coeffs = basis.adjugate().mul_vec(&w);
            if coeffs.iter().any(Zero::is_zero) {
                continue 'candidates;
            }
            if coeffs.iter().all(|x| (x > &BigInt::zero()) == (det > BigInt::zero())) {
                count += 1;
            }
        }
        return Some(count);
    }
    None
}

/// Every unimodular `g` with `g·F1 = F2`, paired with its ray permutation.
///
/// A fixed set of `rank` linearly independent rays of `F1` is sent to every
/// ordered tuple of distinct rays of `F2`; each candidate matrix is kept when
/// it is integral, unimodular, and maps rays and maximal cones onto those of
/// `F2`. Results are sorted by ray permutation, then by matrix.
pub fn fan_isomorphisms(f1: &Fan, f2: &Fan) -> Vec<(IntMatrix, Vec<usize>)> {
    let n = f1.rank();
    if n != f2.rank() || f1.num_rays() != f2.num_rays() || f1.cones.len() != f2.cones.len() {
        return Vec::new();
    }
    let Some(basis) = independent_rays(f1) else {
        return Vec::new();
    };
    let b1 = IntMatrix::from_i64_columns(
        &basis.iter().map(|&i| f1.rays[i].clone()).collect::<Vec<_>>(),
        n,
    )
    .expect("n columns");
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(n);
    let mut used = vec![false; f2.num_rays()];
    search_tuples(f1, f2, &b1, &mut tuple, &mut used, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

fn search_tuples(
    f1: &Fan,
    f2: &Fan,
    b1: &IntMatrix,
    tuple: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<(IntMatrix, Vec<usize>)>,
) {
    let n = f1.rank();
    if tuple.len() == n {
        let b2 = IntMatrix::from_i64_columns(
            &tuple.iter().map(|&i| f2.rays[i].clone()).collect::<Vec<_>>(),
            n,
        )
        .expect("n columns");
        if let Some(g) = b1.solve_left_integral(&b2) {
            if g.is_unimodular() {
                if let Some(perm) = f1.maps_onto(&g, f2) {
                    out.push((g, perm));
                }
            }
        }
        return;
    }
    for j in 0..f2.num_rays() {
        if used[j] {
            continue;
        }
        used[j] = true;
        tuple.push(j);
        search_tuples(f1, f2, b1, tuple, used, out);
        tuple.pop();
        used[j] = false;
    }
}

/// Greedy choice of `rank` linearly independent rays (smallest indices).
pub fn independent_rays(fan: &Fan) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..fan.num_rays() {
        let mut trial = chosen.clone();
        trial.push(i);
        if fan.cone_matrix(&trial).rank() == trial.len() {
            chosen = trial;
            if chosen.len() == fan.rank() {
                return Some(chosen);
            }
        }
    }
    None
}

/// The isomorphism `F1 → F2` with least induced ray permutation, if any.
/// For `F1 = F2` this is the identity.
pub fn fan_isomorphism(f1: &Fan, f2: &Fan) -> Option<IntMatrix> {
    fan_isomorphisms(f1, f2).into_iter().next().map(|(g, _)| g)
}
