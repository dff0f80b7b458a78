//! Class groups, linear-equivalence blocks of rays, integer relations among
//! rays, and forced relations obtained from dual vectors.
//!
//! The pairing map `M → ℤ^{Δ(1)}`, `u ↦ (⟨u, vᵢ⟩)ᵢ`, is the ray matrix
//! itself (rays as rows). Its cokernel is `Cl(X)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fan::Fan;
use crate::intlin::{
    cokernel_group, kernel_basis, solve_integer, ClassCoords, CokernelMap, FgAbelianGroup,
    IntMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorError {
    #[error("rays do not span the lattice")]
    RaysDoNotSpan,
    #[error("{0:?} is not a block of the ray partition")]
    NotABlock(Vec<usize>),
    #[error("block {0:?} has fewer than two rays")]
    BlockTooSmall(Vec<usize>),
    #[error("anchor {anchor} is not in block {block:?}")]
    AnchorOutsideBlock { anchor: usize, block: Vec<usize> },
    #[error("no integral dual vector separates ray {ray} from ray {anchor}")]
    TorsionObstruction { ray: usize, anchor: usize },
    #[error("dual vectors of block {0:?} are linearly dependent")]
    DependentDuals(Vec<usize>),
    #[error("dual vector for ray {0} fails its pairing identities")]
    PairingMismatch(usize),
    #[error("no relation with equal block coefficients is supported on block {0:?}")]
    NoForcedRelation(Vec<usize>),
}

/// `Cl(X)` with the class of every torus-invariant prime divisor.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub group: FgAbelianGroup,
    pub ray_classes: Vec<ClassCoords>,
    pub projection: CokernelMap,
}

pub fn class_group(fan: &Fan) -> Result<ClassGroup, DivisorError> {
    if !fan.rays_span() {
        return Err(DivisorError::RaysDoNotSpan);
    }
    let (group, projection) = cokernel_group(&fan.ray_matrix());
    let ray_classes = (0..fan.num_rays())
        .map(|i| projection.project_basis(i))
        .collect();
    Ok(ClassGroup {
        group,
        ray_classes,
        projection,
    })
}

/// Rays grouped by divisor class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayBlockPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl RayBlockPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn block_of(&self, ray: usize) -> Option<&[usize]> {
        self.blocks
            .iter()
            .find(|b| b.contains(&ray))
            .map(Vec::as_slice)
    }
}

/// Blocks ordered by size (largest first), then by least ray index.
pub fn ray_blocks(fan: &Fan) -> Result<RayBlockPartition, DivisorError> {
    let cl = class_group(fan)?;
    let mut by_class: BTreeMap<&ClassCoords, Vec<usize>> = BTreeMap::new();
    for (i, c) in cl.ray_classes.iter().enumerate() {
        by_class.entry(c).or_default().push(i);
    }
    let mut blocks: Vec<Vec<usize>> = by_class.into_values().collect();
    blocks.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
    Ok(RayBlockPartition { blocks })
}

/// Saturated basis of `{c ∈ ℤ^{Δ(1)} : Σ cᵢ vᵢ = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    pub basis: Vec<Vec<BigInt>>,
}

impl RelationLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether `c` is an integer combination of the basis.
    pub fn contains(&self, c: &[BigInt]) -> bool {
        if self.basis.is_empty() {
            return c.iter().all(Zero::is_zero);
        }
        let cols = IntMatrix::from_big_rows(&self.basis, c.len())
            .expect("consistent lengths")
            .transpose();
        solve_integer(&cols, c).is_some()
    }
}

pub fn relation_lattice(fan: &Fan) -> RelationLattice {
    RelationLattice {
        basis: kernel_basis(&fan.ray_matrix().transpose()),
    }
}

/// Whether `[D_i] = [D_j]`, decided by solving `⟨u, v⟩ = e_i − e_j` over ℤ.
pub fn rays_linearly_equivalent(fan: &Fan, i: usize, j: usize) -> bool {
    i == j || dual_vector(fan, i, j).is_some()
}

fn dual_vector(fan: &Fan, ray: usize, anchor: usize) -> Option<Vec<BigInt>> {
    let mut rhs = vec![BigInt::zero(); fan.num_rays()];
    rhs[ray] += 1;
    rhs[anchor] -= 1;
    solve_integer(&fan.ray_matrix(), &rhs)
}

/// Output of [`derive_block_relation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRelation {
    pub anchor: usize,
    /// `(j, uⱼ)` for every non-anchor ray `j` of the block.
    pub duals: Vec<(usize, Vec<BigInt>)>,
    pub support: Vec<usize>,
    /// Primitive relation with all block coefficients equal and positive.
    pub relation: Vec<BigInt>,
}

/// Forced relation for a block, anchored at its last ray.
pub fn derive_block_relation(fan: &Fan, block: &[usize]) -> Result<BlockRelation, DivisorError> {
    let anchor = *block
        .iter()
        .max()
        .ok_or_else(|| DivisorError::BlockTooSmall(block.to_vec()))?;
    derive_block_relation_with_anchor(fan, block, anchor)
}

/// Builds `uⱼ ∈ M` with `⟨uⱼ, vᵢ⟩ = δᵢⱼ − δᵢ,anchor`, checks their
/// independence, and returns the primitive relation supported on the block
/// plus the fewest further rays (earliest indices first) whose block
/// coefficients are all equal.
pub fn derive_block_relation_with_anchor(
    fan: &Fan,
    block: &[usize],
    anchor: usize,
) -> Result<BlockRelation, DivisorError> {
    let mut block = block.to_vec();
    block.sort_unstable();
    if block.len() < 2 {
        return Err(DivisorError::BlockTooSmall(block));
    }
    if !block.contains(&anchor) {
        return Err(DivisorError::AnchorOutsideBlock { anchor, block });
    }
    let partition = ray_blocks(fan)?;
    if !partition.blocks.contains(&block) {
        return Err(DivisorError::NotABlock(block));
    }

    let pairing = fan.ray_matrix();
    let mut duals = Vec::with_capacity(block.len() - 1);
    for &j in block.iter().filter(|&&j| j != anchor) {
        let u = dual_vector(fan, j, anchor)
            .ok_or(DivisorError::TorsionObstruction { ray: j, anchor })?;
        let values = pairing.mul_vec(&u);
        let expected = |i: usize| i64::from(i == j) - i64::from(i == anchor);
        if values
            .iter()
            .enumerate()
            .any(|(i, x)| *x != BigInt::from(expected(i)))
        {
            return Err(DivisorError::PairingMismatch(j));
        }
        duals.push((j, u));
    }
    let stacked = IntMatrix::from_big_rows(
        &duals.iter().map(|(_, u)| u.clone()).collect::<Vec<_>>(),
        fan.rank(),
    )
    .expect("consistent lengths");
    if stacked.rank() != duals.len() {
        return Err(DivisorError::DependentDuals(block));
    }

    let others: Vec<usize> = (0..fan.num_rays()).filter(|i| !block.contains(i)).collect();
    for size in 0..=others.len() {
        for extra in combinations(&others, size) {
            if let Some(relation) = equal_block_relation(fan, &block, &extra) {
                let mut support = block.clone();
                support.extend(&extra);
                support.sort_unstable();
                return Ok(BlockRelation {
                    anchor,
                    duals,
                    support,
                    relation,
                });
            }
        }
    }
    Err(DivisorError::NoForcedRelation(block))
}

/// The relation on `block ∪ extra`, if the relations there form a rank-1
/// lattice whose generator has equal nonzero block coefficients and is
/// nonzero on every extra ray.
fn equal_block_relation(fan: &Fan, block: &[usize], extra: &[usize]) -> Option<Vec<BigInt>> {
    let support: Vec<usize> = block.iter().chain(extra).copied().collect();
    let sub = fan.cone_matrix(&support).transpose();
    let kernel = kernel_basis(&sub);
    if kernel.len() != 1 {
        return None;
    }
    let mut gen = kernel.into_iter().next().unwrap();
    let b = block.len();
    if gen[0].is_zero() || gen[..b].iter().any(|x| *x != gen[0]) {
        return None;
    }
    if gen[b..].iter().any(Zero::is_zero) {
        return None;
    }
    if gen[0].is_negative() {
        gen.iter_mut().for_each(|x| *x = -x.clone());
    }
    let mut full = vec![BigInt::zero(); fan.num_rays()];
    for (k, &i) in support.iter().enumerate() {
        full[i] = gen[k].clone();
    }
    Some(full)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_surface_fan, Lattice};
    use crate::intlin::to_big;

    fn p2() -> Fan {
        build_surface_fan(
            Lattice::Standard(2),
            &[vec![1, 0], vec![0, 1], vec![-1, -1]],
        )
        .unwrap()
    }

    #[test]
    fn p2_class_group() {
        let cl = class_group(&p2()).unwrap();
        assert_eq!(cl.group, FgAbelianGroup::free(1));
        assert!(cl.ray_classes.iter().all(|c| *c == cl.ray_classes[0]));
        assert_eq!(ray_blocks(&p2()).unwrap().sizes(), vec![3]);
    }

    #[test]
    fn p2_relations() {
        let f = p2();
        assert_eq!(relation_lattice(&f).basis, vec![to_big(&[1, 1, 1])]);
        let r = derive_block_relation(&f, &[0, 1, 2]).unwrap();
        assert_eq!(r.relation, to_big(&[1, 1, 1]));
        assert_eq!(r.anchor, 2);
        assert_eq!(r.duals.len(), 2);
    }

    #[test]
    fn non_spanning_rays_rejected() {
        let f = Fan::new(Lattice::Standard(2), vec![vec![1, 0]], vec![vec![0]]).unwrap();
        assert_eq!(class_group(&f).unwrap_err(), DivisorError::RaysDoNotSpan);
    }

    #[test]
    fn hirzebruch_blocks() {
        for (a, sizes) in [(0, vec![2, 2]), (1, vec![2, 1, 1]), (3, vec![2, 1, 1])] {
            let f = build_surface_fan(
                Lattice::Standard(2),
                &[vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            )
            .unwrap();
            assert_eq!(ray_blocks(&f).unwrap().sizes(), sizes, "a = {a}");
        }
    }

    #[test]
    fn blocks_must_be_genuine() {
        let f = p2();
        assert!(matches!(
            derive_block_relation(&f, &[0, 1]),
            Err(DivisorError::NotABlock(_))
        ));
        assert!(matches!(
            derive_block_relation(&f, &[0]),
            Err(DivisorError::BlockTooSmall(_))
        ));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(&[1, 2, 3, 4], 2).len(), 6);
        assert_eq!(combinations(&[1, 2], 0), vec![Vec::<usize>::new()]);
        assert!(combinations(&[1], 2).is_empty());
    }
}
