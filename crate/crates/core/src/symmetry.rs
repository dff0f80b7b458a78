//! Finite groups of lattice automorphisms preserving a fan.
//!
//! Elements are matrices; the permutations they induce on rays are derived
//! from the matrices and recomputed whenever the fan changes.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fan::{fan_isomorphisms, Fan};
use crate::intlin::{kernel_basis, IntMatrix};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("generator {index} is not a {rank}x{rank} matrix")]
    Shape { index: usize, rank: usize },
    #[error("generator {0} is not unimodular")]
    NotUnimodular(usize),
    #[error("generator {0} does not preserve the fan")]
    NotFanPreserving(usize),
    #[error("group closure exceeds {0} elements")]
    ClosureExceedsBound(usize),
    #[error("rays do not span the lattice")]
    RaysDoNotSpan,
    #[error("centralizer search supports rank at most 3, got {0}")]
    RankTooLarge(usize),
    #[error("commutant has dimension {0}; its unit group is not enumerated")]
    CommutantTooLarge(usize),
    #[error("Galois involution must square to the identity")]
    NotInvolution,
    #[error("Galois involution does not preserve the fan")]
    TauNotFanPreserving,
    #[error("Galois involution does not commute with group element {0}")]
    TauDoesNotCommute(usize),
    #[error("matrix does not preserve the fan after restriction")]
    RestrictionFailed,
}

/// A finite group of unimodular matrices preserving a fan, with the induced
/// ray permutations. Elements are sorted by ray permutation, then matrix, so
/// the identity comes first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    rank: usize,
    elements: Vec<IntMatrix>,
    ray_perms: Vec<Vec<usize>>,
    generator_names: Vec<String>,
}

impl GroupAction {
    fn from_elements(
        fan: &Fan,
        elements: Vec<IntMatrix>,
        generator_names: Vec<String>,
    ) -> Result<Self, SymmetryError> {
        let mut pairs = Vec::with_capacity(elements.len());
        for g in elements {
            let perm = fan.maps_onto(&g, fan).ok_or(SymmetryError::RestrictionFailed)?;
            pairs.push((perm, g));
        }
        pairs.sort();
        pairs.dedup();
        let (ray_perms, elements) = pairs.into_iter().unzip();
        Ok(Self {
            rank: fan.rank(),
            elements,
            ray_perms,
            generator_names,
        })
    }

    pub fn trivial(fan: &Fan) -> Self {
        Self::from_elements(fan, vec![IntMatrix::identity(fan.rank())], Vec::new())
            .expect("identity preserves every fan")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn ray_perms(&self) -> &[Vec<usize>] {
        &self.ray_perms
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn contains(&self, g: &IntMatrix) -> bool {
        self.elements.contains(g)
    }

    /// Distinct elements induce distinct ray permutations.
    pub fn is_faithful_on_rays(&self) -> bool {
        let set: HashSet<&Vec<usize>> = self.ray_perms.iter().collect();
        set.len() == self.elements.len()
    }

    /// The same matrices acting on another fan (for instance after an
    /// orbit of rays has been removed).
    pub fn restrict_to(&self, fan: &Fan) -> Result<Self, SymmetryError> {
        Self::from_elements(fan, self.elements.clone(), self.generator_names.clone())
    }

    /// Adds generators and closes again.
    pub fn extended_by(&self, fan: &Fan, extra: &[IntMatrix]) -> Result<Self, SymmetryError> {
        let mut gens = self.elements.clone();
        gens.extend_from_slice(extra);
        action_from_generators(fan, &gens)
    }

    fn index_of(&self) -> HashMap<&IntMatrix, usize> {
        self.elements.iter().enumerate().map(|(i, g)| (g, i)).collect()
    }

    /// Element indices of the subgroup generated by the given elements.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let index = self.index_of();
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let prod = self.elements[a].mul(&self.elements[g]);
                let k = index[&prod];
                if seen.insert(k) {
                    queue.push_back(k);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All subgroups generated by at most two elements, as sorted index sets.
    pub fn two_generated_subgroups(&self) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for a in 0..self.order() {
            for b in a..self.order() {
                out.insert(self.subgroup_generated(&[a, b]));
            }
        }
        out.into_iter().collect()
    }

    /// The subgroup on the given element indices, as its own action.
    pub fn subaction(&self, fan: &Fan, indices: &[usize]) -> Result<Self, SymmetryError> {
        Self::from_elements(
            fan,
            indices.iter().map(|&i| self.elements[i].clone()).collect(),
            Vec::new(),
        )
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a.mul(b) == b.mul(a)))
    }
}

/// `Aut(N, Δ)` by exhaustive basis-image search.
pub fn fan_automorphisms(fan: &Fan) -> Result<GroupAction, SymmetryError> {
    if !fan.rays_span() {
        return Err(SymmetryError::RaysDoNotSpan);
    }
    let elements = fan_isomorphisms(fan, fan).into_iter().map(|(g, _)| g).collect();
    GroupAction::from_elements(fan, elements, Vec::new())
}

pub fn action_from_generators(
    fan: &Fan,
    gens: &[IntMatrix],
) -> Result<GroupAction, SymmetryError> {
    action_from_generators_with_cap(fan, gens, DEFAULT_CLOSURE_CAP)
}

/// Closure of the generators under composition, refusing to grow past `cap`.
pub fn action_from_generators_with_cap(
    fan: &Fan,
    gens: &[IntMatrix],
    cap: usize,
) -> Result<GroupAction, SymmetryError> {
    let n = fan.rank();
    for (index, g) in gens.iter().enumerate() {
        if g.rows() != n || g.cols() != n {
            return Err(SymmetryError::Shape { index, rank: n });
        }
        if !g.is_unimodular() {
            return Err(SymmetryError::NotUnimodular(index));
        }
        if !fan.is_preserved_by(g) {
            return Err(SymmetryError::NotFanPreserving(index));
        }
    }
    let identity = IntMatrix::identity(n);
    let mut seen = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(a) = queue.pop_front() {
        for g in gens {
            let prod = a.mul(g);
            if seen.insert(prod.clone()) {
                if seen.len() > cap {
                    return Err(SymmetryError::ClosureExceedsBound(cap));
                }
                queue.push_back(prod);
            }
        }
    }
    let names = (1..=gens.len()).map(|i| format!("g{i}")).collect();
    GroupAction::from_elements(fan, seen.into_iter().collect(), names)
}

/// Orbits of the induced ray permutations, each sorted, ordered by least
/// member.
pub fn ray_orbits(group: &GroupAction) -> Vec<Vec<usize>> {
    let Some(first) = group.ray_perms.first() else {
        return Vec::new();
    };
    let n = first.len();
    let mut assigned = vec![false; n];
    let mut orbits = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let orbit: BTreeSet<usize> = group.ray_perms.iter().map(|p| p[start]).collect();
        for &i in &orbit {
            assigned[i] = true;
        }
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Dimension of the common fixed space of all group elements on `N_ℝ`.
pub fn fixed_space_dimension(group: &GroupAction) -> usize {
    let n = group.rank;
    let id = IntMatrix::identity(n);
    let blocks: Vec<IntMatrix> = group.elements.iter().map(|g| g.sub(&id)).collect();
    n - IntMatrix::stack(&blocks, n).rank()
}

/// `ρ^G` = number of ray orbits minus `dim (N_ℝ)^G`.
pub fn invariant_picard_number(fan: &Fan, group: &GroupAction) -> Result<usize, SymmetryError> {
    if !fan.rays_span() {
        return Err(SymmetryError::RaysDoNotSpan);
    }
    let restricted;
    let group = if group.ray_perms.first().map(Vec::len) == Some(fan.num_rays()) {
        group
    } else {
        restricted = group.restrict_to(fan)?;
        &restricted
    };
    Ok(ray_orbits(group).len() - fixed_space_dimension(group))
}

/// Unimodular matrices commuting with every group element.
///
/// The commutant is computed as a saturated integer kernel. When it has
/// rank 1 with generator `B`, its unimodular points are `±B` when
/// `det B = ±1` and nothing otherwise. Larger commutants may have infinite
/// unit groups and are reported instead of enumerated.
pub fn centralizer_in_gl(group: &GroupAction) -> Result<Vec<IntMatrix>, SymmetryError> {
    let n = group.rank;
    if n > 3 {
        return Err(SymmetryError::RankTooLarge(n));
    }
    let commutant = commutant_basis(group.elements(), n);
    if commutant.len() != 1 {
        return Err(SymmetryError::CommutantTooLarge(commutant.len()));
    }
    let b = IntMatrix::new(n, n, commutant[0].clone()).expect("n*n entries");
    if b.det().magnitude().is_one() {
        let mut out = vec![b.clone(), b.neg()];
        out.sort();
        Ok(out)
    } else {
        Ok(Vec::new())
    }
}

/// ℤ-basis of `{X : gX = Xg for all g}` as row-major entry vectors.
pub fn commutant_basis(elements: &[IntMatrix], n: usize) -> Vec<Vec<BigInt>> {
    // unknown X[p][q] sits at index p*n + q
    let mut rows = Vec::new();
    for g in elements {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![BigInt::zero(); n * n];
                for k in 0..n {
                    row[k * n + j] += g.get(i, k);
                    row[i * n + k] -= g.get(k, j);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return (0..n * n)
            .map(|k| {
                let mut e = vec![BigInt::zero(); n * n];
                e[k] = BigInt::one();
                e
            })
            .collect();
    }
    kernel_basis(&IntMatrix::from_big_rows(&rows, n * n).expect("consistent lengths"))
}

/// A Galois involution acting on `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisDatum {
    pub tau: IntMatrix,
    pub extension: String,
}

impl GaloisDatum {
    pub fn new(tau: IntMatrix, extension: impl Into<String>) -> Result<Self, SymmetryError> {
        if !tau.is_square() || !tau.mul(&tau).is_identity() {
            return Err(SymmetryError::NotInvolution);
        }
        Ok(Self {
            tau,
            extension: extension.into(),
        })
    }

    pub fn negation(rank: usize) -> Self {
        Self::new(IntMatrix::negative_identity(rank), "L/k quadratic").expect("-I is an involution")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormClass {
    Split,
    NegationTwist,
    FactorSwap,
    Other(IntMatrix),
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormClass::Split => write!(f, "Split"),
            FormClass::NegationTwist => write!(f, "NegationTwist"),
            FormClass::FactorSwap => write!(f, "FactorSwap"),
            FormClass::Other(m) => write!(f, "Other({m})"),
        }
    }
}

pub fn classify_galois_form(
    fan: &Fan,
    group: &GroupAction,
    datum: &GaloisDatum,
) -> Result<FormClass, SymmetryError> {
    let tau = &datum.tau;
    if tau.rows() != fan.rank() || !fan.is_preserved_by(tau) {
        return Err(SymmetryError::TauNotFanPreserving);
    }
    if let Some(i) = group
        .elements
        .iter()
        .position(|g| g.mul(tau) != tau.mul(g))
    {
        return Err(SymmetryError::TauDoesNotCommute(i));
    }
    let n = fan.rank();
    Ok(if tau.is_identity() {
        FormClass::Split
    } else if *tau == IntMatrix::negative_identity(n) {
        FormClass::NegationTwist
    } else if is_block_swap(tau) {
        FormClass::FactorSwap
    } else {
        FormClass::Other(tau.clone())
    })
}

/// Permutation matrix exchanging coordinates `i` and `i + n/2`.
fn is_block_swap(m: &IntMatrix) -> bool {
    let n = m.rows();
    if n == 0 || n % 2 != 0 {
        return false;
    }
    (0..n).all(|j| {
        (0..n).all(|i| {
            let expected = i64::from(i == (j + n / 2) % n);
            *m.get(i, j) == BigInt::from(expected)
        })
    })
}

/// Order-6 non-abelian subgroups acting faithfully on rays.
pub fn faithful_s3_subgroups(
    fan: &Fan,
    group: &GroupAction,
) -> Result<Vec<GroupAction>, SymmetryError> {
    let mut out = Vec::new();
    for indices in group.two_generated_subgroups() {
        if indices.len() != 6 {
            continue;
        }
        let sub = group.subaction(fan, &indices)?;
        if !sub.is_abelian() && sub.is_faithful_on_rays() {
            out.push(sub);
        }
    }
    Ok(out)
}

/// Closure of a set of permutations of `0..n` under composition.
pub fn permutation_closure(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let Some(n) = gens.first().map(Vec::len) else {
        return Vec::new();
    };
    let identity: Vec<usize> = (0..n).collect();
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose(g, &p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// Elements commuting with every element of the group.
pub fn permutation_center(group: &[Vec<usize>]) -> Vec<Vec<usize>> {
    group
        .iter()
        .filter(|z| group.iter().all(|g| compose(z, g) == compose(g, z)))
        .cloned()
        .collect()
}
