//! Exact lattice and fan combinatorics for complete simplicial toric
//! varieties carrying finite symmetric-group actions.

pub mod divisors;
pub mod families;
pub mod fan;
pub mod intlin;
pub mod mmp;
pub mod qfield;
pub mod symmetry;

pub use divisors::{
    class_group, derive_block_relation, derive_block_relation_with_anchor, ray_blocks,
    rays_linearly_equivalent, relation_lattice, BlockRelation, ClassGroup, DivisorError,
    RayBlockPartition, RelationLattice,
};
pub use families::{
    check_diagonal_obstruction, enumerate_invariant_fans, klein_extension_check, make_family_fan,
    s3_orbit_fan, symmetric_action_criteria, BaseField, CriteriaAnswer, CriteriaQuery,
    EnumerationParams, FamilyError, FamilyFan, FamilySpec, InvariantFan,
};
pub use fan::{
    build_surface_fan, cone_invariant_factors, fan_isomorphism, fan_isomorphisms, validate_fan,
    Fan, FanError, FanReport, Lattice,
};
pub use intlin::{
    cokernel_group, kernel_basis, smith_normal_form, ClassCoords, CokernelMap, FgAbelianGroup,
    IntLinError, IntMatrix, SnfResult,
};
pub use mmp::{
    blow_up, check_adjacent_minus_one_rule, classify_terminal, contract_orbit, contractible_orbits,
    run_equivariant_mmp, self_intersection_profile, MmpError, MmpMode, MmpStep, MmpTrace,
    SelfIntersectionProfile, TerminalLabel,
};
pub use qfield::{
    quad_eval, satisfies_star, standard_field, standard_fields, verify_negative_one_witness,
    FieldDescriptor, FieldKind, QFieldError, QuadElement, QuadExpr, QuadField,
};
pub use symmetry::{
    action_from_generators, centralizer_in_gl, classify_galois_form, fan_automorphisms,
    invariant_picard_number, ray_orbits, FormClass, GaloisDatum, GroupAction, SymmetryError,
};
